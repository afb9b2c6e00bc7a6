#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "dkc/cli/app.hpp"
#include "json.hpp"

using namespace dkc::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  json summary() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dkc_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream f(p);
  std::string line;
  while (std::getline(f, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.0) == "0.00000000000e+00");
  CHECK(format_number(-0.0) == "0.00000000000e+00");
  CHECK(format_number(81.4140381867e-9) == "8.14140381867e-08");
  CHECK(format_number(-1.0 / 3.0) == "-3.33333333333e-01");
  CHECK(format_number(NAN) == "nan");
  CHECK(round_to_output(1.0 / 3.0) == 0.333333333333);
}

TEST_CASE("fig1 preset") {
  const fs::path dir = scratch("fig1");
  const Run r = run({"coupled", "--reproduce", "fig1", "--out", dir.string()});
  REQUIRE(r.code == kExitOk);
  const json s = r.summary();
  const double er = s["final"]["ER_K"].get<double>();
  CHECK(er > 79e-9);
  CHECK(er < 83e-9);
  CHECK(s["relative_difference"].get<double>() == doctest::Approx(4.5e-4).epsilon(0.2));
  CHECK(json::parse(slurp(dir / "coupled_summary.json")) == s);

  const auto rows = csv_rows(dir / "coupled.csv");
  REQUIRE(rows.size() == 1502);
  CHECK(rows[0] == std::vector<std::string>{"t_s", "R_m", "Rdot_m_per_s", "r_m", "rdot_m_per_s",
                                            "ER_K", "Er_K", "Ec_K", "ER_uncoupled_K"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 9);
    for (const auto& cell : rows[i]) CHECK(std::isfinite(std::stod(cell)));
  }

  const Run u = run({"coupled", "--reproduce", "fig1", "--uncoupled-only", "--out", dir.string()});
  REQUIRE(u.code == kExitOk);
  CHECK(u.summary()["relative_difference"].get<double>() ==
        doctest::Approx(4.5e-4).epsilon(0.2));
  CHECK(u.summary()["uncoupled_only"] == true);
  for (std::size_t i = 1; i < 50; ++i) {
    const auto row = csv_rows(dir / "coupled.csv")[i];
    CHECK(row[5] == row[8]);
    CHECK(std::stod(row[7]) == 0.0);
  }
}

TEST_CASE("presets are deterministic") {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  for (const char* fig : {"fig1", "fig2", "fig3"}) {
    const std::string cmd = std::string(fig) == "fig1" ? "coupled" : "gain-scan";
    REQUIRE(run({cmd, "--reproduce", fig, "--out", a.string(), "--threads", "1"}).code == 0);
    REQUIRE(run({cmd, "--reproduce", fig, "--out", b.string(), "--threads", "3"}).code == 0);
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
    ++compared;
  }
  // fig2 and fig3 share gain_scan_summary.json.
  CHECK(compared == 11);
}

TEST_CASE("fig2 and fig3 presets") {
  const fs::path dir = scratch("figs");
  const Run f2 = run({"gain-scan", "--reproduce", "fig2", "--out", dir.string()});
  REQUIRE(f2.code == kExitOk);
  const json c2 = f2.summary()["curves"];
  REQUIRE(c2.size() == 4);
  CHECK(c2[0]["label"] == "thomas-fermi");
  CHECK(c2[0]["G_max"].get<double>() > 500.0);
  for (int i = 1; i < 4; ++i) CHECK(c2[i]["G_max"].get<double>() > 450.0);
  CHECK(c2[0]["E_i_K"].get<double>() == doctest::Approx(25.2e-9).epsilon(0.02));
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".csv") continue;
    const auto rows = csv_rows(entry.path());
    CHECK(rows[0] == std::vector<std::string>{"t_dkc_s", "gain", "E_f_K"});
    CHECK(rows.size() == 602);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      for (const auto& cell : rows[i]) CHECK(std::isfinite(std::stod(cell)));
    }
  }

  const Run f3 = run({"optimize", "--reproduce", "fig3", "--out", dir.string()});
  REQUIRE(f3.code == kExitOk);
  const json c3 = f3.summary()["curves"];
  REQUIRE(c3.size() == 4);
  const double expected[] = {550.0, 282.0, 164.0, 90.0};
  for (int i = 0; i < 4; ++i) {
    CHECK(c3[i]["G_max"].get<double>() == doctest::Approx(expected[i]).epsilon(0.05));
  }
  CHECK(c3[3]["window_s"].is_null());
  CHECK(c3[0]["window_s"].size() == 2);
}

TEST_CASE("csv and json carry the same numbers") {
  const fs::path c = scratch("fmt_csv");
  const fs::path j = scratch("fmt_json");
  REQUIRE(run({"coupled", "--reproduce", "fig1", "--out", c.string()}).code == 0);
  REQUIRE(run({"coupled", "--reproduce", "fig1", "--out", j.string(), "--format", "json"}).code == 0);
  REQUIRE(run({"gain-scan", "--reproduce", "fig2", "--out", c.string()}).code == 0);
  REQUIRE(run({"gain-scan", "--reproduce", "fig2", "--out", j.string(), "--format", "json"}).code ==
          0);
  for (const char* stem : {"coupled", "gain_scan_thomas-fermi", "gain_scan_variational_a50"}) {
    const auto rows = csv_rows(c / (std::string(stem) + ".csv"));
    const json doc = json::parse(slurp(j / (std::string(stem) + ".json")));
    CHECK(doc["columns"].get<std::vector<std::string>>() == rows[0]);
    REQUIRE(doc["rows"].size() + 1 == rows.size());
    for (std::size_t i = 1; i < rows.size(); ++i) {
      for (std::size_t k = 0; k < rows[i].size(); ++k) {
        CHECK(std::stod(rows[i][k]) == doc["rows"][i - 1][k].get<double>());
      }
    }
  }
}

TEST_CASE("custom configurations") {
  const fs::path dir = scratch("custom");
  const fs::path zero = write_config(dir, R"({
    "trap": {"omega_mol_hz": 100},
    "sequence": {"t_dkc_s": 20e-6, "t_r_s": 1e-6}
  })");
  const Run z = run({"coupled", "--config", zero.string(), "--out", dir.string()});
  REQUIRE(z.code == kExitOk);
  const auto rows = csv_rows(dir / "coupled.csv");
  REQUIRE(rows.size() > 2);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    for (std::size_t k = 1; k < rows[i].size(); ++k) CHECK(std::stod(rows[i][k]) == 0.0);
  }

  const fs::path single = write_config(dir, R"({
    "trap": {"omega_mol_hz": 100},
    "sequence": {"t_pre_tof_s": 14.9e-3, "scan": {"min_s": 0, "max_s": 0, "steps": 1}},
    "regime": {"type": "thomas-fermi", "N": 5e4, "a_dd_au": 500}
  })");
  const Run s = run({"gain-scan", "--config", single.string(), "--out", dir.string()});
  REQUIRE(s.code == kExitOk);
  const auto scan = csv_rows(dir / "gain_scan.csv");
  REQUIRE(scan.size() == 2);
  CHECK(std::stod(scan[1][1]) == 1.0);

  // A preset patched by a config file.
  const fs::path patch = write_config(dir, R"({"regime": {"type": "thermal", "temperature_nK": 1000},
                                              "sequence": {"scan": {"steps": 61}}})");
  const Run p = run({"optimize", "--reproduce", "fig2", "--config", patch.string(), "--out",
                     dir.string()});
  REQUIRE(p.code == kExitOk);
  REQUIRE(p.summary()["curves"].size() == 1);
  CHECK(p.summary()["curves"][0]["G_max"].get<double>() == doctest::Approx(88.6).epsilon(0.05));
}

TEST_CASE("species info") {
  const Run d = run({"species-info"});
  REQUIRE(d.code == kExitOk);
  const json s = d.summary();
  CHECK(s["thin_lens_s"].get<double>() == doctest::Approx(6.78e-5).epsilon(1e-3));
  CHECK(s["binding_energy_K"].get<double>() == doctest::Approx(3.111e-6).epsilon(1e-3));
  CHECK(s["p_opt"].get<double>() == doctest::Approx(2.1217).epsilon(1e-4));

  const fs::path dir = scratch("info");
  const fs::path magic = write_config(dir, R"({"species": {"p": "magic"},
                                              "trap": {"omega_mol_hz": 100}})");
  const Run m = run({"species-info", "--config", magic.string()});
  REQUIRE(m.code == kExitOk);
  CHECK(m.summary()["omega_c_sq"].get<double>() == 0.0);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("errors");
  CHECK(run({}).code == kExitConfig);
  CHECK(run({"launch"}).code == kExitConfig);
  CHECK(run({"coupled"}).code == kExitConfig);
  CHECK(run({"coupled", "--reproduce", "fig9"}).code == kExitConfig);
  CHECK(run({"coupled", "--config", (dir / "missing.json").string()}).code == kExitConfig);
  CHECK(run({"species-info", "--help"}).code == kExitOk);

  const fs::path typo = write_config(dir, R"({"trap": {"omega_hz": 100}})");
  const Run t = run({"species-info", "--config", typo.string()});
  CHECK(t.code == kExitConfig);
  CHECK(t.err.find("trap.omega_hz") != std::string::npos);

  const fs::path broken = write_config(dir, "{\"trap\": {\"omega_mol_hz\": 100,}}");
  CHECK(run({"species-info", "--config", broken.string()}).code == kExitConfig);

  const fs::path bad_xi = write_config(dir, R"({"trap": {"omega_mol_hz": 100},
      "regime": {"type": "hydrodynamic", "xi": 1.5, "temperature_K": 1e-8}})");
  CHECK(run({"gain-scan", "--config", bad_xi.string(), "--out", dir.string()}).code ==
        kExitConfig);

  const fs::path no_regime = write_config(dir, R"({"trap": {"omega_mol_hz": 100}})");
  CHECK(run({"gain-scan", "--config", no_regime.string(), "--out", dir.string()}).code ==
        kExitConfig);

  // A threshold the gain never drops below cannot be bracketed.
  const fs::path unreachable = write_config(dir, R"({"trap": {"omega_mol_hz": 100},
      "sequence": {"t_pre_tof_s": 14.9e-3, "threshold": 1e-9,
                   "scan": {"min_s": 0, "max_s": 300e-6, "steps": 31}},
      "regime": {"type": "thomas-fermi", "N": 5e4, "a_dd_au": 500}})");
  const Run n = run({"optimize", "--config", unreachable.string(), "--out", dir.string()});
  CHECK(n.code == kExitNumerical);
  CHECK_FALSE(n.err.empty());
}
