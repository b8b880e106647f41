// Command-line front end: one subcommand per experiment mode.
//
//   sparsity_lab <mode> [key=value ...] [--config PATH] [--out PATH]
//                [--format csv|jsonl] [--budget INT] [--seed INT]
//
// Values from --config are read first; flags and key=value arguments
// override them. SPARSITY_LAB_BUDGET overrides every other budget source.

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "sparsity/error.hpp"
#include "sparsity/harness.hpp"

namespace {

using namespace sparsity;

void merge_arguments(ExperimentConfig& cfg, const std::vector<std::string>& args) {
  for (const auto& arg : args) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorKind::ConfigError, "argument '" + arg + "' is not key=value");
    }
    const auto key = arg.substr(0, eq);
    if (key == "mode" || key == "seed" || key == "budget" || key == "out" || key == "format") {
      throw Error(ErrorKind::ConfigError, "use --" + key + " instead of " + key + "=");
    }
    cfg.params[key] = arg.substr(eq + 1);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse-form, sieve and character-sum experiments"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string config_path, out_path, format;
  std::optional<std::uint64_t> budget, seed;
  app.add_option("--config", config_path, "flat key=value configuration file");
  app.add_option("--out", out_path, "output file (default: standard output)");
  app.add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  app.add_option("--budget", budget, "maximum enumerated states");
  app.add_option("--seed", seed, "seed for sampled coefficient vectors");

  std::map<std::string, std::vector<std::string>> positional;
  for (const auto& mode : known_modes()) {
    auto* sub = app.add_subcommand(mode, "run the " + mode + " experiment");
    sub->add_option("params", positional[mode], "key=value parameters");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  }

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw Error(ErrorKind::ConfigError, "cannot read config '" + config_path + "'");
      cfg = parse_config(in);
    }
    const auto subs = app.get_subcommands();
    if (!subs.empty()) {
      const auto name = subs.front()->get_name();
      if (!cfg.mode.empty() && cfg.mode != name) {
        throw Error(ErrorKind::ConfigError,
                    "config mode '" + cfg.mode + "' conflicts with subcommand '" + name + "'");
      }
      cfg.mode = name;
      merge_arguments(cfg, positional[name]);
    }
    if (!out_path.empty()) cfg.out = out_path;
    if (format == "csv") cfg.format = OutputFormat::csv;
    if (format == "jsonl") cfg.format = OutputFormat::jsonl;
    if (budget) cfg.budget = *budget;
    if (seed) cfg.seed = *seed;
    apply_budget_env(cfg);
    return run(cfg, std::cout, std::cerr);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return e.kind() == ErrorKind::WorkloadExceeded ? kExitWorkload : kExitConfig;
  }
}
