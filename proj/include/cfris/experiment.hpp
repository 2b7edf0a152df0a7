// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo orchestration for the four compared access-point designs and
// CSV/manifest reporting of the resulting per-UE spectral efficiencies.
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfris/config.hpp"
#include "cfris/linalg.hpp"

namespace cfris {

enum class Scenario {
  ris_optimized,  // M antennas behind an N-element RIS, power-iteration phases
  ris_random,     // same hardware, i.i.d. uniform phases
  no_ris_small,   // M-antenna array, no RIS
  no_ris_large,   // N-antenna array shaped like the RIS, no RIS
};

std::string_view scenario_name(Scenario s);
Scenario parse_scenario(std::string_view name);
std::vector<Scenario> all_scenarios();

struct ExperimentSpec {
  SimConfig base;
  std::vector<Scenario> scenarios = all_scenarios();
  int threads = 1;
};

struct CdfPoint {
  double value = 0.0;
  double probability = 0.0;
};

struct ScenarioResult {
  Scenario scenario = Scenario::ris_optimized;
  /// SE of UE k in setup s at index s * K + k, bit/s/Hz.
  std::vector<double> se;
  std::vector<CdfPoint> cdf;
  double median = 0.0;
  double p10 = 0.0;
};

struct SeReport {
  SimConfig config;
  std::vector<ScenarioResult> results;

  /// nullptr when the scenario was not run.
  const ScenarioResult* find(Scenario s) const;
};

/// Sorted values with probabilities (i + 1) / n; the last point is 1.
std::vector<CdfPoint> empirical_cdf(std::span<const double> values);

/// Linear-interpolation quantile (p in [0, 1]).
double quantile(std::span<const double> values, double p);

/// Fills cdf, median and p10 from `se`.
void summarize(ScenarioResult& result);

/// Per-UE SE of every requested scenario for one network setup. All
/// scenarios see the same positions, gains and clusters; the RIS scenarios
/// and the large array share the same UE-to-array correlation matrices.
std::vector<std::vector<double>> simulate_setup(const SimConfig& cfg, int setup,
                                                std::span<const Scenario> scenarios,
                                                std::span<const CMatrix> box_channels);

/// Runs every setup, spread over `threads` workers. Results depend only on
/// the configuration, never on the thread count.
SeReport run_experiment(const ExperimentSpec& spec);

/// Writes manifest.txt, se_samples.csv (scenario,realization,ue,se) and one
/// cdf_<scenario>.csv per scenario. No data files when no scenario ran.
void emit_report(const SeReport& report, const std::filesystem::path& dir);

/// Parses a directory written by emit_report.
SeReport read_report(const std::filesystem::path& dir);

}  // namespace cfris
