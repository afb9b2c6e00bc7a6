#include <algorithm>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "dkc/cli/app.hpp"
#include "dkc/error.hpp"

namespace dkc::cli {

namespace {

struct Flags {
  std::string config_path;
  std::string reproduce;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  bool uncoupled_only = false;
};

void add_common_options(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  sub->add_option("--reproduce", f.reproduce, "Built-in parameter set")
      ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  sub->add_option("--out", f.out_dir, "Directory for data files");
  sub->add_option("--format", f.format, "Data file format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--threads", f.threads, "Worker threads for gain scans")
      ->check(CLI::Range(1u, 1024u));
}

// Preset first, then the config file on top of it (as a JSON merge patch).
RunConfig resolve(const Flags& f, bool defaults_allowed) {
  nlohmann::json doc;
  if (!f.reproduce.empty()) {
    doc = preset(f.reproduce);
  } else if (f.config_path.empty()) {
    if (!defaults_allowed) throw ConfigError("either --config or --reproduce is required");
    doc = default_document();
  }
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw ConfigError("config: cannot open '" + f.config_path + "'");
    try {
      const auto patch = nlohmann::json::parse(in);
      if (doc.is_null()) {
        doc = patch;
      } else {
        doc.merge_patch(patch);
      }
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config: '" + f.config_path + "': " + e.what());
    }
  }
  RunConfig cfg = parse_config(doc);
  if (f.out_dir) cfg.out_dir = *f.out_dir;
  if (f.format) cfg.format = parse_format(*f.format);
  return cfg;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Delta-kick collimation of heteronuclear Feshbach molecules", "dkc"};
  app.require_subcommand(1);
  Flags flags;

  auto* coupled = app.add_subcommand("coupled", "Coupled centre-of-mass and vibrational run");
  auto* scan = app.add_subcommand("gain-scan", "Collimation gain versus kick duration");
  auto* optimize = app.add_subcommand("optimize", "Optimal kick duration and gain window");
  auto* info = app.add_subcommand("species-info", "Trap frequencies and species constants");
  for (auto* sub : {coupled, scan, optimize, info}) add_common_options(sub, flags);
  coupled->add_flag("--uncoupled-only", flags.uncoupled_only,
                    "Write the trajectory of the uncoupled run");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const CommandOptions opt{flags.uncoupled_only, flags.threads};
    nlohmann::json summary;
    if (coupled->parsed()) {
      summary = cmd_coupled(resolve(flags, false), opt);
    } else if (scan->parsed()) {
      summary = cmd_gain_scan(resolve(flags, false), opt);
    } else if (optimize->parsed()) {
      summary = cmd_optimize(resolve(flags, false), opt);
    } else {
      summary = cmd_species_info(resolve(flags, true));
    }
    out << summary.dump(2) << "\n";
    return kExitOk;
  } catch (const InvalidInput& e) {
    err << "dkc: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "dkc: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace dkc::cli
