// SPDX-License-Identifier: Apache-2.0
#include "cfris/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "cfris/association.hpp"
#include "cfris/errors.hpp"
#include "cfris/estimation.hpp"
#include "cfris/network.hpp"
#include "cfris/receiver.hpp"
#include "cfris/ris_config.hpp"
#include "cfris/rng.hpp"

namespace cfris {

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::ris_optimized: return "ris_optimized";
    case Scenario::ris_random: return "ris_random";
    case Scenario::no_ris_small: return "no_ris_small";
    case Scenario::no_ris_large: return "no_ris_large";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  for (Scenario s : all_scenarios()) {
    if (scenario_name(s) == name) return s;
  }
  throw ConfigError("scenario", "unknown scenario '" + std::string(name) + "'");
}

std::vector<Scenario> all_scenarios() {
  return {Scenario::ris_optimized, Scenario::ris_random, Scenario::no_ris_small,
          Scenario::no_ris_large};
}

const ScenarioResult* SeReport::find(Scenario s) const {
  for (const auto& r : results) {
    if (r.scenario == s) return &r;
  }
  return nullptr;
}

std::vector<CdfPoint> empirical_cdf(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<CdfPoint> out(sorted.size());
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out[i] = {sorted[i], static_cast<double>(i + 1) / n};
  }
  return out;
}

double quantile(std::span<const double> values, double p) {
  if (values.empty()) throw DimensionError("quantile: empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

void summarize(ScenarioResult& result) {
  result.cdf = empirical_cdf(result.se);
  if (result.se.empty()) return;
  result.median = quantile(result.se, 0.5);
  result.p10 = quantile(result.se, 0.1);
}

namespace {

std::vector<CMatrix> identity_front_ends(int count, Index dim) {
  return std::vector<CMatrix>(static_cast<std::size_t>(count), CMatrix::Identity(dim, dim));
}

std::vector<double> run_blocks(const SimConfig& cfg, const Association& assoc,
                               std::span<const CMatrix> front_ends,
                               std::span<const CMatrix> correlations, Rng& rng) {
  const EstimatorBank bank(front_ends, correlations, assoc, PilotParams::from(cfg));
  const CombiningEngine engine(assoc, bank.error_covariances(), ReceiverParams::from(cfg),
                               cfg.combiner);
  const int k_count = assoc.num_ues();
  const int blocks = cfg.mc_channel_realizations;
  std::vector<std::vector<double>> sinr(static_cast<std::size_t>(k_count),
                                        std::vector<double>(static_cast<std::size_t>(blocks)));
  for (int b = 0; b < blocks; ++b) {
    const BlockEstimates est = bank.draw_block(rng);
    const std::vector<double> s = engine.sinrs(est);
    for (int k = 0; k < k_count; ++k) sinr[k][b] = s[k];
  }
  std::vector<double> se(static_cast<std::size_t>(k_count));
  for (int k = 0; k < k_count; ++k) {
    se[k] = spectral_efficiency(sinr[k], cfg.coherence_block_samples, cfg.pilot_samples);
  }
  return se;
}

}  // namespace

std::vector<std::vector<double>> simulate_setup(const SimConfig& cfg, int setup,
                                                std::span<const Scenario> scenarios,
                                                std::span<const CMatrix> box_channels) {
  const auto s = static_cast<std::uint64_t>(setup);
  Rng setup_rng = make_stream(cfg.seed, {stream::kSetup, s});
  const NetworkRealization real = generate_realization(cfg, setup_rng);
  const Association assoc = assign_pilots_and_clusters(real, cfg);

  const bool needs_ris_correlation =
      std::any_of(scenarios.begin(), scenarios.end(),
                  [](Scenario sc) { return sc != Scenario::no_ris_small; });
  ChannelStats stats;
  if (needs_ris_correlation) {
    stats.num_ues = real.num_ues();
    stats.num_aps = real.num_aps();
    stats.correlation = build_correlations(real, ris_layout(cfg), cfg);
    stats.ap_ris.assign(box_channels.begin(), box_channels.end());
  }

  std::vector<std::vector<double>> out;
  for (Scenario sc : scenarios) {
    const auto tag = static_cast<std::uint64_t>(sc);
    Rng block_rng = make_stream(cfg.seed, {stream::kBlocks, s, tag});
    switch (sc) {
      case Scenario::ris_optimized:
      case Scenario::ris_random: {
        Rng phase_rng = make_stream(cfg.seed, {stream::kRandomPhases, s, tag});
        const PhaseMode mode =
            sc == Scenario::ris_optimized ? PhaseMode::optimized : PhaseMode::random;
        const PhaseConfig phases = select_long_term_config(stats, assoc, cfg, mode, phase_rng);
        std::vector<CMatrix> fronts;
        fronts.reserve(phases.size());
        for (int l = 0; l < stats.num_aps; ++l) fronts.push_back(front_end(stats.h(l), phases[l]));
        out.push_back(run_blocks(cfg, assoc, fronts, stats.correlation, block_rng));
        break;
      }
      case Scenario::no_ris_small: {
        const std::vector<CMatrix> r = build_correlations(real, antenna_layout(cfg, 0.0), cfg);
        const auto fronts = identity_front_ends(real.num_aps(), cfg.antennas_per_ap);
        out.push_back(run_blocks(cfg, assoc, fronts, r, block_rng));
        break;
      }
      case Scenario::no_ris_large: {
        const auto fronts = identity_front_ends(real.num_aps(), cfg.ris_elements());
        out.push_back(run_blocks(cfg, assoc, fronts, stats.correlation, block_rng));
        break;
      }
    }
  }
  return out;
}

SeReport run_experiment(const ExperimentSpec& spec) {
  validate(spec.base);
  const SimConfig& cfg = spec.base;
  SeReport report;
  report.config = cfg;
  if (spec.scenarios.empty()) return report;

  const std::vector<CMatrix> boxes = build_ap_ris_channels(cfg);
  std::vector<std::vector<std::vector<double>>> per_setup(static_cast<std::size_t>(cfg.mc_setups));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int s = next++; s < cfg.mc_setups; s = next++) {
      try {
        per_setup[s] = simulate_setup(cfg, s, spec.scenarios, boxes);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(spec.threads, 1, cfg.mc_setups);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 0; i < spec.scenarios.size(); ++i) {
    ScenarioResult r;
    r.scenario = spec.scenarios[i];
    r.se.reserve(static_cast<std::size_t>(cfg.mc_setups * cfg.num_ues));
    for (const auto& setup : per_setup) r.se.insert(r.se.end(), setup[i].begin(), setup[i].end());
    summarize(r);
    report.results.push_back(std::move(r));
  }
  return report;
}

}  // namespace cfris
