// SPDX-License-Identifier: Apache-2.0
#include "cfris_oracle/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <random>

#include "cfris/estimation.hpp"
#include "cfris/receiver.hpp"
#include "cfris/ris_config.hpp"
#include "cfris_oracle/reference.hpp"

namespace cfris_oracle {

namespace {

using cfris::Association;
using cfris::BlockEstimates;
using cfris::ErrorCovariances;
using cfris::Index;
using cfris::ReceiverParams;
using cfris::Rng;

constexpr std::uint64_t kSuiteSeed = 0x5eed0fc0ffee;

std::string fmt(const char* spec, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, spec, a, b);
  return buf;
}

CheckResult check(std::string name, bool passed, std::string detail) {
  return CheckResult{std::move(name), passed, std::move(detail)};
}

double rel_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// ---------------------------------------------------------------- estimation

struct EstimationOutcome {
  double orthogonality = 0.0;   // ||E{h_hat e^H}||_F / tr R
  double decomposition = 0.0;   // ||cov(h_hat) + C - R||_F / ||R||_F
  double error_cov = 0.0;       // ||cov(e) - C||_F / ||C||_F
  double mse_vs_trace = 0.0;    // |MSE - tr C| / tr C
  double mmse_mse = 0.0;
  double best_linear_mse = 0.0;
};

// M=2 antennas behind an N=4 RIS, UE k with one co-pilot interferer.
EstimationOutcome run_estimation_trial(int draws, int competitors) {
  Rng rng = cfris::make_stream(kSuiteSeed, {1});
  constexpr int m = 2;
  constexpr int n = 4;
  const CMatrix r_k = random_psd(n, n, rng) / n;
  const CMatrix r_i = random_psd(n, n, rng) / n;
  CMatrix h = CMatrix::Zero(m, n);
  for (Index c = 0; c < n; ++c) h.col(c) = cfris::standard_complex_gaussian(m, rng);
  const CMatrix front = cfris::front_end(h, random_phases(n, rng));
  const cfris::PilotParams p{2, 0.5, 1.0};

  const CMatrix q_k = cfris::effective_covariance(front, r_k);
  const CMatrix q_i = cfris::effective_covariance(front, r_i);
  const std::vector<CMatrix> both{q_k, q_i};
  const CMatrix gram = cfris::pilot_gram(both, p);
  const CMatrix c = cfris::error_covariance(gram, r_k, front, p);

  // Competing linear estimators x = W z: perturbations of the MMSE matrix
  // and unrelated random matrices.
  const CMatrix w_mmse = std::sqrt(p.processing_gain()) * r_k * front.adjoint() *
                         cfris::solve_pd(gram, CMatrix(CMatrix::Identity(m, m)));
  std::vector<CMatrix> rivals;
  for (int j = 0; j < competitors; ++j) {
    CMatrix w(n, m);
    for (Index col = 0; col < m; ++col) w.col(col) = cfris::standard_complex_gaussian(n, rng);
    const double scale = 0.02 * std::pow(10.0, 2.0 * j / std::max(1, competitors - 1));
    rivals.push_back(j % 2 == 0 ? CMatrix(w_mmse + scale * w) : CMatrix(w * scale));
  }

  const cfris::GaussianSampler draw_k(r_k);
  const cfris::GaussianSampler draw_i(r_i);
  CMatrix cross = CMatrix::Zero(n, n);
  CMatrix est_cov = CMatrix::Zero(n, n);
  CMatrix err_cov = CMatrix::Zero(n, n);
  double mse = 0.0;
  std::vector<double> rival_mse(rivals.size(), 0.0);
  for (int t = 0; t < draws; ++t) {
    const CVector hk = draw_k.draw(rng);
    const CVector hi = draw_i.draw(rng);
    const std::vector<CVector> chans{hk, hi};
    const CVector z = cfris::received_pilot_statistic(chans, front, p, rng);
    const CVector hat = cfris::mmse_estimate(z, gram, r_k, front, p);
    const CVector e = hk - hat;
    cross.noalias() += hat * e.adjoint();
    est_cov.noalias() += hat * hat.adjoint();
    err_cov.noalias() += e * e.adjoint();
    mse += e.squaredNorm();
    for (std::size_t j = 0; j < rivals.size(); ++j) {
      rival_mse[j] += (hk - rivals[j] * z).squaredNorm();
    }
  }
  const double inv = 1.0 / draws;
  EstimationOutcome out;
  out.orthogonality = (cross * inv).norm() / r_k.trace().real();
  out.decomposition = (est_cov * inv + c - r_k).norm() / r_k.norm();
  out.error_cov = (err_cov * inv - c).norm() / c.norm();
  out.mse_vs_trace = std::abs(mse * inv - c.trace().real()) / c.trace().real();
  out.mmse_mse = mse * inv;
  out.best_linear_mse = *std::min_element(rival_mse.begin(), rival_mse.end()) * inv;
  return out;
}

// ----------------------------------------------------------------- receiver

struct ReceiverInstance {
  Association assoc;
  BlockEstimates est;
  ErrorCovariances err;
  ReceiverParams rx;
  int antennas = 0;
};

ReceiverInstance random_receiver_instance(int l_count, int m, int k_count, bool full_overlap,
                                          Rng& rng) {
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> pick(0, l_count - 1);
  std::vector<std::vector<char>> membership(static_cast<std::size_t>(k_count),
                                            std::vector<char>(static_cast<std::size_t>(l_count)));
  for (auto& row : membership) {
    for (auto& cell : row) cell = full_overlap ? 1 : coin(rng);
    row[static_cast<std::size_t>(pick(rng))] = 1;
  }
  std::vector<int> pilots(static_cast<std::size_t>(k_count));
  for (int k = 0; k < k_count; ++k) pilots[k] = k % 2;

  ReceiverInstance inst;
  inst.antennas = m;
  inst.assoc = cfris::make_association(pilots, membership);
  inst.est.num_aps = l_count;
  inst.err.num_aps = l_count;
  std::uniform_real_distribution<double> power(0.5, 2.0);
  for (int i = 0; i < k_count; ++i) {
    for (int l = 0; l < l_count; ++l) {
      inst.est.g_hat.push_back(cfris::standard_complex_gaussian(m, rng));
      inst.err.cov.push_back(0.2 * random_psd(m, 1 + (i + l) % m, rng) / m);
    }
    inst.rx.data_power.push_back(power(rng));
  }
  inst.rx.noise_power = power(rng) * 0.5;
  return inst;
}

CVector random_combiner(const ReceiverInstance& inst, int k, Rng& rng) {
  const Index dim = static_cast<Index>(inst.assoc.serving[k].size()) * inst.antennas;
  return cfris::standard_complex_gaussian(dim, rng);
}

double sinr(const ReceiverInstance& inst, int k, const CVector& v) {
  return cfris::instantaneous_sinr(k, v, inst.est, inst.err, inst.assoc, inst.rx);
}

// Interference-plus-noise matrix of UE k on its serving subspace, formed
// from explicit selector matrices.
CMatrix interference_matrix(const ReceiverInstance& inst, int k) {
  const int l_count = inst.assoc.num_aps;
  const int m = inst.antennas;
  const CMatrix d = selector_matrix(inst.assoc, k, m);
  CMatrix full = CMatrix::Zero(l_count * m, l_count * m);
  for (int i = 0; i < inst.assoc.num_ues(); ++i) {
    CVector g(l_count * m);
    for (int l = 0; l < l_count; ++l) g.segment(l * m, m) = inst.est.at(i, l);
    if (i != k) full += inst.rx.data_power[i] * g * g.adjoint();
    for (int l = 0; l < l_count; ++l) {
      full.block(l * m, l * m, m, m) += inst.rx.data_power[i] * inst.err.at(i, l);
    }
  }
  full = d * full * d;
  full += inst.rx.noise_power * CMatrix::Identity(l_count * m, l_count * m);
  // Keep only the rows and columns of the serving APs.
  const auto& aps = inst.assoc.serving[k];
  const Index dim = static_cast<Index>(aps.size()) * m;
  CMatrix out(dim, dim);
  for (std::size_t a = 0; a < aps.size(); ++a) {
    for (std::size_t b = 0; b < aps.size(); ++b) {
      out.block(static_cast<Index>(a) * m, static_cast<Index>(b) * m, m, m) =
          full.block(aps[a] * m, aps[b] * m, m, m);
    }
  }
  return out;
}

}  // namespace

std::vector<CheckResult> estimation_suite() {
  std::vector<CheckResult> out;
  const auto start = std::chrono::steady_clock::now();
  const EstimationOutcome e = run_estimation_trial(100000, 50);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.push_back(check("estimation.orthogonality", e.orthogonality <= 0.03,
                      fmt("||E{h_hat e^H}||_F / tr R = %.4g (limit %.2g)", e.orthogonality, 0.03)));
  out.push_back(check("estimation.decomposition", e.decomposition <= 0.03,
                      fmt("||cov(h_hat) + C - R||_F / ||R||_F = %.4g (limit %.2g)",
                          e.decomposition, 0.03)));
  out.push_back(check("estimation.error_covariance", e.error_cov <= 0.03,
                      fmt("||cov(e) - C||_F / ||C||_F = %.4g (limit %.2g)", e.error_cov, 0.03)));
  out.push_back(check("estimation.mse_matches_trace", e.mse_vs_trace <= 0.02,
                      fmt("|MSE - tr C| / tr C = %.4g (limit %.2g)", e.mse_vs_trace, 0.02)));
  out.push_back(check("estimation.beats_linear_estimators", e.mmse_mse <= e.best_linear_mse,
                      fmt("MMSE MSE %.6g, best of 50 linear %.6g", e.mmse_mse,
                          e.best_linear_mse)));
  out.push_back(check("estimation.runtime", secs < 60.0, fmt("%.2f s (limit %.0f s)", secs, 60.0)));
  return out;
}

std::vector<CheckResult> optimizer_suite() {
  std::vector<CheckResult> out;
  const auto start = std::chrono::steady_clock::now();
  Rng rng = cfris::make_stream(kSuiteSeed, {2});

  // Trace form against quadratic form.
  {
    double worst = 0.0;
    for (int inst = 0; inst < 10; ++inst) {
      constexpr int m = 2;
      constexpr int n = 4;
      CMatrix h(m, n);
      for (Index c = 0; c < n; ++c) h.col(c) = cfris::standard_complex_gaussian(m, rng);
      const std::vector<CMatrix> served{random_psd(n, 2, rng), random_psd(n, n, rng)};
      const cfris::SignalStrengthObjective obj = cfris::build_objective(served, h);
      for (int t = 0; t < 100; ++t) {
        const CVector psi = random_phases(n, rng);
        worst = std::max(worst, rel_gap(cfris::quadratic_objective(obj.a, psi),
                                        cfris::received_strength(h, obj.b, psi)));
      }
    }
    out.push_back(check("optimizer.objective_identity", worst <= 1e-10,
                        fmt("max relative gap %.3g (limit %.0e)", worst, 1e-10)));
  }

  // Monotone trajectory.
  {
    std::uniform_int_distribution<int> size(2, 36);
    double worst = 0.0;
    int failures = 0;
    for (int inst = 0; inst < 1000; ++inst) {
      const int n = size(rng);
      const int rank = std::uniform_int_distribution<int>(1, n)(rng);
      const CMatrix a = random_psd(n, rank, rng);
      const auto res = cfris::constrained_power_iteration(a, {50, 0.0});
      for (std::size_t i = 1; i < res.trajectory.size(); ++i) {
        const double drop = (res.trajectory[i - 1] - res.trajectory[i]) /
                            std::max(std::abs(res.trajectory[i - 1]), 1e-300);
        worst = std::max(worst, drop);
        if (drop > 1e-9) ++failures;
      }
    }
    out.push_back(check("optimizer.monotone", failures == 0,
                        fmt("largest relative decrease %.3g over 1000 instances (limit %.0e)",
                            worst, 1e-9)));
  }

  // Rank-one optimum.
  {
    const double pi = std::numbers::pi;
    CVector v(3);
    v << 1.0, std::polar(1.0, pi / 3.0), std::polar(1.0, -pi / 4.0);
    const CMatrix a = v * v.adjoint();
    const auto res = cfris::constrained_power_iteration(a);
    const double objective = cfris::quadratic_objective(a, res.phases);
    CVector aligned(3);
    for (Index i = 0; i < 3; ++i) aligned(i) = std::polar(1.0, std::arg(v(i)));
    // |<aligned, psi>| = 3 iff psi equals aligned up to a global phase.
    const double alignment = std::abs(aligned.dot(res.phases)) / 3.0;
    const bool ok = std::abs(objective - 9.0) <= 1e-12 && std::abs(alignment - 1.0) <= 1e-12;
    out.push_back(check("optimizer.rank_one_optimum", ok,
                        fmt("objective %.15g (expected 9), phase alignment %.15g", objective,
                            alignment)));
  }

  // Exhaustive grid on N = 3.
  {
    double worst = 1.0;
    for (int inst = 0; inst < 20; ++inst) {
      const CMatrix a = random_psd(3, 1 + inst % 3, rng);
      const auto res = cfris::constrained_power_iteration(a, {50, 0.0});
      const double got = cfris::quadratic_objective(a, res.phases);
      worst = std::min(worst, got / phase_grid_maximum(a, 64));
    }
    out.push_back(check("optimizer.phase_grid", worst >= 0.99,
                        fmt("worst objective / grid maximum %.6f over 20 instances (limit %.2f)",
                            worst, 0.99)));
  }

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.push_back(check("optimizer.runtime", secs < 60.0, fmt("%.2f s (limit %.0f s)", secs, 60.0)));
  return out;
}

std::vector<CheckResult> receiver_suite() {
  std::vector<CheckResult> out;
  Rng rng = cfris::make_stream(kSuiteSeed, {3});

  // Term-by-term SINR against the Rayleigh quotient.
  {
    double worst = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
      const ReceiverInstance ri = random_receiver_instance(3, 2, 4, false, rng);
      for (int k = 0; k < ri.assoc.num_ues(); ++k) {
        const CVector v = random_combiner(ri, k, rng);
        worst = std::max(worst, rel_gap(sinr(ri, k, v),
                                        cfris::rayleigh_quotient_sinr(k, v, ri.est, ri.err,
                                                                      ri.assoc, ri.rx)));
      }
    }
    out.push_back(check("receiver.sinr_identity", worst <= 1e-12,
                        fmt("max relative gap %.3g (limit %.0e)", worst, 1e-12)));
  }

  // MMSE against random combiners and the generalized eigenvector.
  {
    int losses = 0;
    double eig_gap = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
      const ReceiverInstance ri = random_receiver_instance(2, 2, 3, false, rng);
      for (int k = 0; k < ri.assoc.num_ues(); ++k) {
        const CVector v =
            cfris::mmse_combiner(k, ri.est, ri.err, ri.assoc, ri.rx);
        const double best = sinr(ri, k, v);
        for (int t = 0; t < 200; ++t) {
          if (sinr(ri, k, random_combiner(ri, k, rng)) > best * (1.0 + 1e-12)) ++losses;
        }
        const double bound = generalized_rayleigh_max(
            cfris::stack_serving(ri.assoc, k, ri.est, k), ri.rx.data_power[k],
            interference_matrix(ri, k));
        eig_gap = std::max(eig_gap, rel_gap(best, bound));
      }
    }
    out.push_back(check("receiver.mmse_beats_random", losses == 0,
                        fmt("%.0f of %.0f random combiners beat MMSE", losses, 100.0 * 3 * 200)));
    out.push_back(check("receiver.mmse_attains_maximum", eig_gap <= 1e-8,
                        fmt("max relative gap to generalized eigenvalue %.3g (limit %.0e)",
                            eig_gap, 1e-8)));
  }

  // Scale invariance.
  {
    double worst = 0.0;
    std::uniform_real_distribution<double> exponent(-3.0, 3.0);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    for (int inst = 0; inst < 100; ++inst) {
      const ReceiverInstance ri = random_receiver_instance(3, 2, 4, false, rng);
      for (int k = 0; k < ri.assoc.num_ues(); ++k) {
        const CVector v = random_combiner(ri, k, rng);
        const Complex c = std::polar(std::pow(10.0, exponent(rng)), angle(rng));
        worst = std::max(worst, rel_gap(sinr(ri, k, v), sinr(ri, k, CVector(c * v))));
      }
    }
    out.push_back(check("receiver.scale_invariance", worst <= 1e-12,
                        fmt("max relative gap %.3g (limit %.0e)", worst, 1e-12)));
  }

  // Full overlap: P-MMSE reduces to MMSE, in both the direct and the
  // per-setup engine paths.
  {
    double worst = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
      const ReceiverInstance ri = random_receiver_instance(3, 2, 4, true, rng);
      const cfris::CombiningEngine engine(ri.assoc, ri.err, ri.rx, cfris::CombinerKind::pmmse);
      const std::vector<CVector> fast = engine.combiners(ri.est);
      for (int k = 0; k < ri.assoc.num_ues(); ++k) {
        const CVector full = cfris::mmse_combiner(k, ri.est, ri.err, ri.assoc, ri.rx);
        const CVector part = cfris::pmmse_combiner(k, ri.est, ri.err, ri.assoc, ri.rx);
        worst = std::max(worst, (part - full).norm() / full.norm());
        worst = std::max(worst, (fast[k] - full).norm() / full.norm());
      }
    }
    out.push_back(check("receiver.pmmse_full_overlap", worst <= 1e-10,
                        fmt("max relative difference %.3g (limit %.0e)", worst, 1e-10)));
  }
  return out;
}

bool report(std::ostream& out, const std::vector<CheckResult>& checks) {
  bool all = true;
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << "  " << c.detail << '\n';
    all = all && c.passed;
  }
  return all;
}

bool run_all_suites(std::ostream& out) {
  bool ok = report(out, estimation_suite());
  ok = report(out, optimizer_suite()) && ok;
  ok = report(out, receiver_suite()) && ok;
  return ok;
}

}  // namespace cfris_oracle
