#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "dkc/cli/app.hpp"
#include "dkc/coupled/dynamics.hpp"
#include "dkc/scaling/sequence.hpp"
#include "dkc/units.hpp"

namespace dkc::cli {

using nlohmann::json;

namespace {

// Column-oriented table written as CSV or as JSON {"columns", "rows"}.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> notes;  // optional trailing text column
  std::string notes_column;
};

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round_to_output(v);
}

std::filesystem::path output_path(const RunConfig& cfg, const std::string& stem,
                                  OutputFormat format) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + cfg.out_dir + "'");
  return std::filesystem::path(cfg.out_dir) /
         (stem + (format == OutputFormat::Csv ? ".csv" : ".json"));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
}

std::string write_table(const RunConfig& cfg, const std::string& stem, const Table& t) {
  const auto path = output_path(cfg, stem, cfg.format);
  const bool with_notes = !t.notes_column.empty();
  std::string text;
  if (cfg.format == OutputFormat::Csv) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) text += (c ? "," : "") + t.columns[c];
    if (with_notes) text += "," + t.notes_column;
    text += "\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      for (std::size_t c = 0; c < t.rows[r].size(); ++c) {
        text += (c ? "," : "") + format_number(t.rows[r][c]);
      }
      if (with_notes) {
        std::string note = t.notes[r];
        std::replace(note.begin(), note.end(), ',', ';');
        std::replace(note.begin(), note.end(), '\n', ' ');
        text += "," + note;
      }
      text += "\n";
    }
  } else {
    json doc;
    doc["columns"] = t.columns;
    if (with_notes) doc["columns"].push_back(t.notes_column);
    doc["rows"] = json::array();
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      json row = json::array();
      for (double v : t.rows[r]) row.push_back(number(v));
      if (with_notes) row.push_back(t.notes[r]);
      doc["rows"].push_back(std::move(row));
    }
    text = doc.dump(1) + "\n";
  }
  write_text(path, text);
  return path.filename().string();
}

void write_summary(const RunConfig& cfg, const std::string& stem, const json& summary) {
  write_text(output_path(cfg, stem, OutputFormat::Json), summary.dump(2) + "\n");
}

scaling::SequenceConfig sequence_for(const RunConfig& cfg, const Curve& curve) {
  scaling::SequenceConfig s;
  s.omega_trap = cfg.omega_mol;
  s.omega_kick = cfg.omega_kick;
  s.t_pre_tof = cfg.t_pre_tof;
  s.t_dkc = cfg.t_dkc;
  s.t_r = cfg.t_r;
  s.t_tof = cfg.t_tof;
  s.regime = curve.regime;
  s.size = curve.size;
  s.sigma0_std = curve.sigma0_std;
  s.trace_dt = cfg.trace_dt;
  return s;
}

void require_curves(const RunConfig& cfg, const char* command) {
  if (cfg.curves.empty()) {
    throw ConfigError(std::string("config: a 'regime' block is required for ") + command);
  }
}

std::string file_stem(const std::string& prefix, const Curve& curve, std::size_t n_curves) {
  if (n_curves == 1) return prefix;
  std::string label = curve.label;
  for (char& ch : label) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' || ch == '_')) {
      ch = '_';
    }
  }
  return prefix + "_" + label;
}

// Optimum and threshold window, bracketing the maximum from a finished scan.
json optimum_summary(const RunConfig& cfg, const Curve& curve,
                     const std::vector<scaling::ScanPoint>& scan) {
  json j;
  std::size_t best = scan.size();
  for (std::size_t i = 0; i < scan.size(); ++i) {
    if (scan[i].ok() && (best == scan.size() || scan[i].gain > scan[best].gain)) best = i;
  }
  j["t_opt_s"] = nullptr;
  j["G_max"] = nullptr;
  j["window_s"] = nullptr;
  j["threshold"] = number(cfg.threshold);
  if (best == scan.size()) return j;
  if (scan.size() < 3) {
    j["t_opt_s"] = number(scan[best].t_dkc);
    j["G_max"] = number(scan[best].gain);
    return j;
  }
  const double lo = scan[best == 0 ? 0 : best - 1].t_dkc;
  const double hi = scan[std::min(best + 1, scan.size() - 1)].t_dkc;
  const auto opt = scaling::optimize_kick(sequence_for(cfg, curve), cfg.species, {lo, hi},
                                          cfg.threshold);
  j["t_opt_s"] = number(opt.t_opt);
  j["G_max"] = number(opt.G_max);
  if (opt.window) j["window_s"] = {number(opt.window->first), number(opt.window->second)};
  return j;
}

json curve_header(const RunConfig& cfg, const Curve& curve) {
  const scaling::SequenceRunner runner(sequence_for(cfg, curve), cfg.species);
  json j;
  j["label"] = curve.label;
  j["regime"] = scaling::regime_name(curve.regime);
  j["E_i_K"] = number(runner.E_i());
  j["sigma0_std_m"] = number(runner.sigma0_std());
  j["sigma_at_kick_m"] = number(runner.sigma0_std() * runner.pre_kick_state().lambda);
  return j;
}

}  // namespace

json cmd_coupled(const RunConfig& cfg, const CommandOptions& opt) {
  const KickSchedule sched(cfg.omega_kick > 0.0 ? cfg.omega_kick : cfg.omega_mol,
                           cfg.t_r, cfg.t_dkc);
  const Propagation coupled = propagate_analytic(cfg.initial, sched, cfg.species, cfg.report_dt);
  const Propagation uncoupled =
      propagate_uncoupled(cfg.initial, sched, cfg.species, cfg.report_dt);
  const Propagation& shown = opt.uncoupled_only ? uncoupled : coupled;

  const auto ER = shown.energy.E_R_kelvin();
  const auto Er = shown.energy.E_r_kelvin();
  const auto Ec = shown.energy.E_c_kelvin();
  const auto ER_u = uncoupled.energy.E_R_kelvin();
  const auto ER_c = coupled.energy.E_R_kelvin();
  const auto Er_c = coupled.energy.E_r_kelvin();
  const auto Ec_c = coupled.energy.E_c_kelvin();

  Table t;
  t.columns = {"t_s", "R_m", "Rdot_m_per_s", "r_m", "rdot_m_per_s",
               "ER_K", "Er_K", "Ec_K", "ER_uncoupled_K"};
  const Trajectory& tr = shown.trajectory;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    t.rows.push_back({tr.t[i], tr.R[i], tr.R_dot[i], tr.r[i], tr.r_dot[i], ER[i], Er[i], Ec[i],
                      ER_u[i]});
  }
  const std::string file = write_table(cfg, "coupled", t);

  const std::size_t last = tr.size() - 1;
  double ec_lo = std::numeric_limits<double>::quiet_NaN();
  double ec_hi = ec_lo;
  double er_at_ramp = ec_lo;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double ti = coupled.trajectory.t[i];
    if (std::isnan(er_at_ramp) && ti >= sched.hold_start()) er_at_ramp = ER_c[i];
    if (ti < sched.hold_start() || ti > sched.hold_end()) continue;
    ec_lo = std::isnan(ec_lo) ? Ec_c[i] : std::min(ec_lo, Ec_c[i]);
    ec_hi = std::isnan(ec_hi) ? Ec_c[i] : std::max(ec_hi, Ec_c[i]);
  }

  json s;
  s["command"] = "coupled";
  s["data_file"] = file;
  s["rows"] = tr.size();
  s["uncoupled_only"] = opt.uncoupled_only;
  s["final"] = {{"t_s", number(tr.t[last])},
                {"ER_K", number(ER_c[last])},
                {"Er_K", number(Er_c[last])},
                {"Ec_K", number(Ec_c[last])},
                {"ER_uncoupled_K", number(ER_u[last])}};
  s["ER_after_switch_on_K"] = number(er_at_ramp);
  s["relative_difference"] = number(ER_u[last] != 0.0
                                        ? std::abs(ER_c[last] - ER_u[last]) / std::abs(ER_u[last])
                                        : 0.0);
  s["Ec_hold_min_K"] = number(ec_lo);
  s["Ec_hold_max_K"] = number(ec_hi);
  s["delta_Er_K"] = number(Er_c[last] - Er_c.front());
  write_summary(cfg, "coupled_summary", s);
  return s;
}

json cmd_gain_scan(const RunConfig& cfg, const CommandOptions& opt) {
  require_curves(cfg, "gain-scan");
  const auto grid = scaling::linear_grid(cfg.scan.min_s, cfg.scan.max_s, cfg.scan.steps);
  json s;
  s["command"] = "gain-scan";
  s["curves"] = json::array();
  for (const Curve& curve : cfg.curves) {
    const auto scan = scaling::gain_scan(sequence_for(cfg, curve), cfg.species, grid, opt.threads);
    Table t;
    t.columns = {"t_dkc_s", "gain", "E_f_K"};
    std::size_t failed = 0;
    for (const auto& p : scan) failed += p.ok() ? 0 : 1;
    if (failed) t.notes_column = "error";
    for (const auto& p : scan) {
      t.rows.push_back({p.t_dkc, p.gain, p.E_f});
      t.notes.push_back(p.error);
    }
    json c = curve_header(cfg, curve);
    c["data_file"] = write_table(cfg, file_stem("gain_scan", curve, cfg.curves.size()), t);
    c["failed_points"] = failed;
    c.update(optimum_summary(cfg, curve, scan));
    s["curves"].push_back(std::move(c));
  }
  write_summary(cfg, "gain_scan_summary", s);
  return s;
}

json cmd_optimize(const RunConfig& cfg, const CommandOptions& opt) {
  require_curves(cfg, "optimize");
  const auto grid = scaling::linear_grid(cfg.scan.min_s, cfg.scan.max_s, cfg.scan.steps);
  json s;
  s["command"] = "optimize";
  s["curves"] = json::array();
  for (const Curve& curve : cfg.curves) {
    const auto scan = scaling::gain_scan(sequence_for(cfg, curve), cfg.species, grid, opt.threads);
    json c = curve_header(cfg, curve);
    c.update(optimum_summary(cfg, curve, scan));
    s["curves"].push_back(std::move(c));
  }
  write_summary(cfg, "optimize", s);
  return s;
}

json cmd_species_info(const RunConfig& cfg) {
  const SpeciesPair& sp = cfg.species;
  const TrapFrequencies f = derived_frequencies(sp, cfg.omega_mol);
  const ModeFactors a = mode_factors(sp);
  const double e_b = binding_energy(sp.reduced_mass(), cfg.scattering_length);
  json s;
  s["command"] = "species-info";
  s["m_light_kg"] = number(sp.m_light());
  s["m_heavy_kg"] = number(sp.m_heavy());
  s["p"] = number(sp.p());
  s["gamma"] = number(sp.mass_ratio());
  s["total_mass_kg"] = number(sp.total_mass());
  s["reduced_mass_kg"] = number(sp.reduced_mass());
  s["omega_mol_rad_s"] = number(f.omega_mol);
  s["omega_r_rad_s"] = number(f.omega_r);
  s["omega_c_sq"] = number(f.omega_c_sq);
  s["omega_light_rad_s"] = number(f.omega_light);
  s["omega_heavy_rad_s"] = number(f.omega_heavy);
  s["alpha_plus"] = number(a.alpha_plus);
  s["alpha_minus"] = number(a.alpha_minus);
  s["a_mol_m"] = number(oscillator_length(sp.total_mass(), cfg.omega_mol));
  s["p_opt"] = number(magic_polarizability_ratio(sp));
  s["scattering_length_m"] = number(cfg.scattering_length);
  s["binding_energy_J"] = number(e_b);
  s["binding_energy_K"] = number(e_b / constants::k_boltzmann);
  s["t_pre_tof_s"] = number(cfg.t_pre_tof);
  s["thin_lens_s"] = cfg.t_pre_tof > 0.0 ? number(thin_lens_duration(cfg.omega_mol, cfg.t_pre_tof))
                                         : json(nullptr);
  return s;
}

}  // namespace dkc::cli
