#include "dkc/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <utility>

#include "dkc/units.hpp"

namespace dkc::cli {

using nlohmann::json;

namespace {

// Reads one JSON object, remembering which keys were consumed so that
// misspelt keys are reported instead of silently ignored.
class Block {
 public:
  Block(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError("config: '" + path_ + "' must be an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  std::optional<double> number(const std::string& key) {
    if (!obj_.contains(key)) return std::nullopt;
    used_.insert(key);
    const json& v = obj_.at(key);
    if (!v.is_number()) throw ConfigError("config: '" + where(key) + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError("config: '" + where(key) + "' must be finite");
    return x;
  }

  double number(const std::string& key, double fallback) {
    return number(key).value_or(fallback);
  }

  /// Quantity that may be given in one of several units, e.g.
  /// {"_au", bohr}, {"_m", 1}: at most one spelling may be present.
  std::optional<double> quantity(const std::string& base,
                                 std::initializer_list<std::pair<const char*, double>> units) {
    std::optional<double> out;
    std::string seen;
    for (const auto& [suffix, factor] : units) {
      const std::string key = base + suffix;
      if (auto v = number(key)) {
        if (out) throw ConfigError("config: both '" + where(seen) + "' and '" + where(key) + "' given");
        out = *v * factor;
        seen = key;
      }
    }
    return out;
  }

  std::optional<std::string> string(const std::string& key) {
    if (!obj_.contains(key)) return std::nullopt;
    used_.insert(key);
    const json& v = obj_.at(key);
    if (!v.is_string()) throw ConfigError("config: '" + where(key) + "' must be a string");
    return v.get<std::string>();
  }

  const json* child(const std::string& key) {
    if (!obj_.contains(key)) return nullptr;
    used_.insert(key);
    return &obj_.at(key);
  }

  std::string where(const std::string& key) const { return path_ + "." + key; }

  void finish() const {
    for (const auto& item : obj_.items()) {
      if (!used_.count(item.key())) throw ConfigError("config: unknown key '" + where(item.key()) + "'");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> used_;
};

const double kBohr = constants::bohr_radius;
const double kAmu = constants::atomic_mass_unit;
const double kTwoPi = constants::two_pi;

double positive(std::optional<double> v, const std::string& field) {
  if (!v) throw ConfigError("config: '" + field + "' is required");
  if (!(*v > 0.0)) throw ConfigError("config: '" + field + "' must be positive");
  return *v;
}

double non_negative(double v, const std::string& field) {
  if (!(v >= 0.0)) throw ConfigError("config: '" + field + "' must be non-negative");
  return v;
}

Curve parse_curve(const json& obj, const std::string& path) {
  Block b(obj, path);
  Curve c;
  const std::string type = b.string("type").value_or("");
  c.label = b.string("label").value_or(type);
  c.size.N = b.number("N", 0.0);
  c.size.a_dd = b.quantity("a_dd", {{"_au", kBohr}, {"_m", 1.0}}).value_or(0.0);
  c.size.temperature = b.quantity("temperature", {{"_K", 1.0}, {"_nK", 1e-9}}).value_or(0.0);
  if (auto s = b.number("sigma0_m")) c.sigma0_std = positive(s, b.where("sigma0_m"));

  if (type == "thomas-fermi") {
    c.regime = scaling::ThomasFermi{};
  } else if (type == "variational") {
    c.regime = scaling::Variational{c.size.N, c.size.a_dd};
  } else if (type == "hydrodynamic") {
    const auto xi = b.number("xi");
    if (!xi) throw ConfigError("config: '" + b.where("xi") + "' is required for hydrodynamic");
    c.regime = scaling::Hydrodynamic{*xi};
  } else if (type == "thermal") {
    c.regime = scaling::Thermal{};
  } else {
    throw ConfigError("config: '" + b.where("type") +
                      "' must be thomas-fermi, variational, hydrodynamic or thermal");
  }
  b.finish();
  try {
    scaling::validate(c.regime);
  } catch (const InvalidInput& e) {
    throw ConfigError("config: '" + path + "': " + e.what());
  }
  if (c.label.empty()) c.label = scaling::regime_name(c.regime);
  return c;
}

}  // namespace

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ConfigError("config: format must be csv or json, got '" + name + "'");
}

RunConfig parse_config(const json& doc) {
  Block top(doc, "$");
  RunConfig cfg;

  if (const json* s = top.child("species")) {
    Block b(*s, "species");
    const double ml = b.quantity("m_light", {{"_u", kAmu}, {"_kg", 1.0}})
                          .value_or(cfg.species.m_light());
    const double mh = b.quantity("m_heavy", {{"_u", kAmu}, {"_kg", 1.0}})
                          .value_or(cfg.species.m_heavy());
    // "p": "magic" selects the decoupling polarizability ratio.
    const bool magic = b.has("p") && doc.at("species").at("p").is_string();
    const double p = magic ? 1.0 : b.number("p", cfg.species.p());
    if (magic && b.string("p") != "magic") {
      throw ConfigError("config: 'species.p' must be a number or \"magic\"");
    }
    try {
      cfg.species = SpeciesPair(ml, mh, p);
      if (magic) cfg.species = cfg.species.with_p(magic_polarizability_ratio(cfg.species));
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("config: 'species': ") + e.what());
    }
    if (auto a = b.quantity("scattering_length", {{"_au", kBohr}, {"_m", 1.0}})) {
      cfg.scattering_length = positive(a, "species.scattering_length");
    }
    b.finish();
  }

  {
    const json* t = top.child("trap");
    if (!t) throw ConfigError("config: 'trap' block is required");
    Block b(*t, "trap");
    const auto omega = b.quantity("omega_mol", {{"_hz", kTwoPi}, {"_rad_s", 1.0}});
    const auto kick = b.quantity("kick_omega", {{"_hz", kTwoPi}, {"_rad_s", 1.0}});
    b.finish();
    cfg.omega_mol = positive(omega, "trap.omega_mol_hz");
    if (kick) cfg.omega_kick = positive(kick, "trap.kick_omega_hz");
  }

  if (const json* s = top.child("sequence")) {
    Block b(*s, "sequence");
    cfg.t_pre_tof = non_negative(b.number("t_pre_tof_s", cfg.t_pre_tof), "sequence.t_pre_tof_s");
    cfg.t_dkc = non_negative(b.number("t_dkc_s", cfg.t_dkc), "sequence.t_dkc_s");
    cfg.t_r = non_negative(b.number("t_r_s", cfg.t_r), "sequence.t_r_s");
    cfg.t_tof = non_negative(b.number("t_tof_s", cfg.t_tof), "sequence.t_tof_s");
    cfg.threshold = b.number("threshold", cfg.threshold);
    cfg.initial.R = b.number("R0_m", 0.0);
    cfg.initial.R_dot = b.number("Rdot0_m_per_s", 0.0);
    cfg.initial.r = b.quantity("r0", {{"_au", kBohr}, {"_m", 1.0}}).value_or(0.0);
    cfg.initial.r_dot = b.number("rdot0_m_per_s", 0.0);
    if (const json* g = b.child("scan")) {
      Block sb(*g, "sequence.scan");
      cfg.scan.min_s = non_negative(sb.number("min_s", cfg.scan.min_s), "sequence.scan.min_s");
      cfg.scan.max_s = non_negative(sb.number("max_s", cfg.scan.max_s), "sequence.scan.max_s");
      const double steps = sb.number("steps", static_cast<double>(cfg.scan.steps));
      if (!(steps >= 1.0) || steps != std::floor(steps) || steps > 1e7) {
        throw ConfigError("config: 'sequence.scan.steps' must be a positive integer");
      }
      cfg.scan.steps = static_cast<std::size_t>(steps);
      if (cfg.scan.max_s < cfg.scan.min_s) {
        throw ConfigError("config: 'sequence.scan.max_s' must not be below min_s");
      }
      sb.finish();
    }
    b.finish();
  }

  if (const json* r = top.child("regime")) {
    if (r->is_array()) {
      for (std::size_t i = 0; i < r->size(); ++i) {
        cfg.curves.push_back(parse_curve((*r)[i], "regime[" + std::to_string(i) + "]"));
      }
    } else {
      cfg.curves.push_back(parse_curve(*r, "regime"));
    }
  }

  if (const json* o = top.child("output")) {
    Block b(*o, "output");
    if (auto f = b.string("format")) cfg.format = parse_format(*f);
    if (auto d = b.string("dir")) cfg.out_dir = *d;
    cfg.report_dt = positive(b.number("report_dt_s", cfg.report_dt), "output.report_dt_s");
    cfg.trace_dt = non_negative(b.number("trace_dt_s", cfg.trace_dt), "output.trace_dt_s");
    b.finish();
  }

  top.finish();
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: '" + path + "': " + e.what());
  }
  return parse_config(doc);
}

json default_document() {
  return json::parse(R"({
    "species": {"m_light_u": 40.96182526, "m_heavy_u": 86.909180531, "p": 1.10,
                "scattering_length_au": 1000},
    "trap": {"omega_mol_hz": 100},
    "sequence": {"t_pre_tof_s": 14.9e-3}
  })");
}

json preset(const std::string& name) {
  if (name == "fig1") {
    return json::parse(R"({
      "species": {"m_light_u": 40.96182526, "m_heavy_u": 86.909180531, "p": 1.10,
                  "scattering_length_au": 1000},
      "trap": {"omega_mol_hz": 100},
      "sequence": {"t_dkc_s": 150e-6, "t_r_s": 1e-6, "t_pre_tof_s": 14.9e-3,
                   "R0_m": 4.06e-6, "Rdot0_m_per_s": 2.55e-3,
                   "r0_au": 1000, "rdot0_m_per_s": 0},
      "output": {"report_dt_s": 1e-7}
    })");
  }
  if (name == "fig2") {
    return json::parse(R"({
      "species": {"m_light_u": 40.96182526, "m_heavy_u": 86.909180531, "p": 1.10},
      "trap": {"omega_mol_hz": 100},
      "sequence": {"t_pre_tof_s": 14.9e-3, "t_r_s": 1e-6, "threshold": 100,
                   "scan": {"min_s": 0, "max_s": 300e-6, "steps": 601}},
      "regime": [
        {"label": "thomas-fermi", "type": "thomas-fermi", "N": 5e4, "a_dd_au": 500},
        {"label": "variational_a500", "type": "variational", "N": 5e4, "a_dd_au": 500},
        {"label": "variational_a250", "type": "variational", "N": 5e4, "a_dd_au": 250},
        {"label": "variational_a50", "type": "variational", "N": 5e4, "a_dd_au": 50}
      ]
    })");
  }
  if (name == "fig3") {
    return json::parse(R"({
      "species": {"m_light_u": 40.96182526, "m_heavy_u": 86.909180531, "p": 1.10},
      "trap": {"omega_mol_hz": 100},
      "sequence": {"t_pre_tof_s": 14.9e-3, "t_r_s": 1e-6, "threshold": 100,
                   "scan": {"min_s": 0, "max_s": 300e-6, "steps": 601}},
      "regime": [
        {"label": "xi_0.9999", "type": "hydrodynamic", "xi": 0.9999, "temperature_K": 2e-9,
         "N": 5e4, "a_dd_au": 500},
        {"label": "xi_0.8958", "type": "hydrodynamic", "xi": 0.8958, "temperature_K": 30e-9,
         "N": 5e4, "a_dd_au": 500},
        {"label": "xi_0.7056", "type": "hydrodynamic", "xi": 0.7056, "temperature_K": 50e-9,
         "N": 5e4, "a_dd_au": 500},
        {"label": "xi_0", "type": "hydrodynamic", "xi": 0, "temperature_K": 1e-6,
         "N": 5e4, "a_dd_au": 500}
      ]
    })");
  }
  throw ConfigError("unknown preset '" + name + "' (expected fig1, fig2 or fig3)");
}

}  // namespace dkc::cli
