#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kbandit/harness.hpp"

namespace {

// Precedence: --seed flag, then KBANDIT_SEED, then the config file.
void apply_seed_override(kbandit::ExperimentConfig& config, bool seed_given, long seed_flag) {
  if (seed_given) {
    config.seed = static_cast<std::uint64_t>(seed_flag);
    return;
  }
  if (const char* env = std::getenv("KBANDIT_SEED")) {
    try {
      config.seed = static_cast<std::uint64_t>(std::stoll(env));
    } catch (const std::exception&) {
      throw kbandit::ConfigError("KBANDIT_SEED is not an integer: " + std::string(env));
    }
  }
}

kbandit::TraceFormat parse_format(const std::string& format) {
  if (format == "csv") return kbandit::TraceFormat::csv;
  if (format == "json") return kbandit::TraceFormat::json;
  throw kbandit::ConfigError("unknown format '" + format + "', expected csv or json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed kernelized contextual bandit simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string format = "csv";
  long seed_flag = 0;
  bool seed_given = false;

  CLI::App* simulate = app.add_subcommand("simulate", "Run one experiment configuration");
  simulate->add_option("--config", config_path, "Configuration file")->required();
  simulate->add_option("--seed", seed_flag, "Seed override")->each([&](const std::string&) {
    seed_given = true;
  });
  simulate->add_option("--out", out_dir, "Output directory");
  simulate->add_option("--format", format, "csv or json");

  std::string grid_path;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a grid of configurations");
  sweep->add_option("--config", config_path, "Base configuration file")->required();
  sweep->add_option("--grid", grid_path, "Grid file with comma-separated value lists")
      ->required();
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_option("--format", format, "csv or json");

  CLI11_PARSE(app, argc, argv);

  try {
    const kbandit::TraceFormat fmt = parse_format(format);
    if (simulate->parsed()) {
      kbandit::ExperimentConfig config = kbandit::load_config(config_path);
      apply_seed_override(config, seed_given, seed_flag);
      const auto traces = kbandit::run_replicates(config);
      const auto paths = kbandit::emit_replicates(traces, out_dir, fmt);
      for (const auto& p : paths) std::cout << p << "\n";
    } else {
      const int combos = kbandit::run_sweep(config_path, grid_path, out_dir, fmt);
      std::cout << "ran " << combos << " grid combinations into " << out_dir << "\n";
    }
  } catch (const kbandit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
