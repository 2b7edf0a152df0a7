// SPDX-License-Identifier: Apache-2.0
//
// cfris: Monte Carlo uplink simulator for cell-free massive MIMO with
// RIS-integrated access points.
//
//   cfris run      [--preset fig1|fig2|fig3] [--config PATH] [--seed U64]
//                  [--scenario NAME...] [--out DIR] [--threads N] [--set key=value...]
//   cfris validate [--preset ...] [--config PATH] [--set key=value...]
//   cfris oracle
//
// Precedence: built-in defaults < preset < config file < --set < --seed.
#include <chrono>
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "cfris/config.hpp"
#include "cfris/errors.hpp"
#include "cfris/experiment.hpp"
#include "cfris_oracle/suites.hpp"

namespace {

struct ConfigFlags {
  std::string preset;
  std::string config_path;
  std::vector<std::string> sets;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void add_config_flags(CLI::App* app, ConfigFlags& flags) {
  app->add_option("--preset", flags.preset, "Named base configuration")
      ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  app->add_option("--config", flags.config_path, "Key-value configuration file");
  app->add_option("--set", flags.sets, "Override one key, e.g. --set mc_setups=10");
}

cfris::SimConfig resolve(const ConfigFlags& flags) {
  cfris::SimConfig cfg = flags.preset.empty() ? cfris::SimConfig{} : cfris::preset(flags.preset);
  if (!flags.config_path.empty()) cfg = cfris::load_config_file(flags.config_path, cfg);
  for (const auto& s : flags.sets) cfris::apply_overrides(cfg, cfris::parse_key_values(s));
  if (flags.seed_given) cfg.seed = flags.seed;
  cfris::validate(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell-free massive MIMO uplink with RIS-integrated access points"};
  app.require_subcommand(1);

  ConfigFlags run_flags;
  std::vector<std::string> scenario_names;
  std::string out_dir = "cfris_out";
  int threads = 1;
  auto* run = app.add_subcommand("run", "Run the Monte Carlo experiment");
  add_config_flags(run, run_flags);
  auto* seed_opt = run->add_option("--seed", run_flags.seed, "Global seed");
  run->add_option("--scenario", scenario_names,
                  "ris_optimized, ris_random, no_ris_small, no_ris_large (default: all)");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  ConfigFlags validate_flags;
  auto* validate = app.add_subcommand("validate", "Check a configuration and print it resolved");
  add_config_flags(validate, validate_flags);

  auto* oracle = app.add_subcommand("oracle", "Run the reference-oracle check suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) {
      run_flags.seed_given = seed_opt->count() > 0;
      cfris::ExperimentSpec spec;
      spec.base = resolve(run_flags);
      spec.threads = threads;
      if (!scenario_names.empty()) {
        spec.scenarios.clear();
        for (const auto& n : scenario_names) spec.scenarios.push_back(cfris::parse_scenario(n));
      }
      const auto start = std::chrono::steady_clock::now();
      const cfris::SeReport report = cfris::run_experiment(spec);
      cfris::emit_report(report, out_dir);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      for (const auto& r : report.results) {
        std::printf("%-14s median %.4f  p10 %.4f bit/s/Hz  (%zu samples)\n",
                    std::string(cfris::scenario_name(r.scenario)).c_str(), r.median, r.p10,
                    r.se.size());
      }
      std::printf("wrote %s in %.1f s\n", out_dir.c_str(), secs);
      return 0;
    }
    if (*validate) {
      const cfris::SimConfig cfg = resolve(validate_flags);
      for (const auto& [key, value] : cfris::to_key_values(cfg)) {
        std::cout << key << " = " << value << '\n';
      }
      return 0;
    }
    if (*oracle) {
      return cfris_oracle::run_all_suites(std::cout) ? 0 : 1;
    }
  } catch (const cfris::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const cfris::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
