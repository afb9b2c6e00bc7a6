#pragma once

// Run configuration for the command-line tool. Configs are JSON documents
// whose physical quantities carry their unit in the key name, e.g.
//
//   {
//     "species":  {"m_light_u": 40.96182526, "m_heavy_u": 86.909180531,
//                  "p": 1.10, "scattering_length_au": 1000},
//     "trap":     {"omega_mol_hz": 100},
//     "sequence": {"t_pre_tof_s": 14.9e-3, "t_dkc_s": 150e-6, "t_r_s": 1e-6,
//                  "scan": {"min_s": 0, "max_s": 300e-6, "steps": 601}},
//     "regime":   {"type": "thomas-fermi", "N": 5e4, "a_dd_au": 500},
//     "output":   {"format": "csv", "report_dt_s": 1e-7}
//   }
//
// "regime" may also be an array of labelled regimes, one curve each, and
// "p" may be the string "magic" for the decoupling ratio.

#include <optional>
#include <string>
#include <vector>

#include "dkc/coupled/dynamics.hpp"
#include "dkc/error.hpp"
#include "dkc/scaling/regime.hpp"
#include "dkc/species.hpp"
#include "json.hpp"

namespace dkc::cli {

/// Malformed or inconsistent configuration; the message names the field.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

enum class OutputFormat { Csv, Json };

struct Curve {
  std::string label;
  scaling::Regime regime;
  scaling::SizeExtras size;
  std::optional<double> sigma0_std;  // m
};

struct ScanGrid {
  double min_s = 0.0;
  double max_s = 300e-6;
  std::size_t steps = 601;
};

struct RunConfig {
  SpeciesPair species = SpeciesPair::potassium_rubidium();
  double scattering_length = 1000.0 * 5.29177210903e-11;  // m
  double omega_mol = 0.0;                                  // rad/s
  double omega_kick = 0.0;                                 // rad/s, 0 reuses omega_mol

  CoupledState initial;  // coupled runs
  double t_pre_tof = 14.9e-3;
  double t_dkc = 150e-6;
  double t_r = 1e-6;
  double t_tof = 0.0;
  ScanGrid scan;
  double threshold = 100.0;

  std::vector<Curve> curves;

  OutputFormat format = OutputFormat::Csv;
  std::string out_dir = ".";
  double report_dt = 1e-7;
  double trace_dt = 0.0;
};

/// Throws ConfigError on unknown keys, wrong types or invalid values.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config_file(const std::string& path);

/// Built-in parameter sets: "fig1", "fig2", "fig3".
nlohmann::json preset(const std::string& name);

/// Config used when neither a file nor a preset is given.
nlohmann::json default_document();

OutputFormat parse_format(const std::string& name);

}  // namespace dkc::cli
