// SPDX-License-Identifier: Apache-2.0
#include "cfris/ris_config.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include "cfris/errors.hpp"

namespace cfris {

SignalStrengthObjective build_objective(std::span<const CMatrix> served_correlations,
                                        const CMatrix& ap_ris) {
  const Index n = ap_ris.cols();
  SignalStrengthObjective obj;
  obj.b = CMatrix::Zero(n, n);
  obj.a = CMatrix::Zero(n, n);
  if (served_correlations.empty()) {
    obj.neutral = true;
    return obj;
  }
  for (const auto& r : served_correlations) {
    if (r.rows() != n || r.cols() != n) {
      throw DimensionError("build_objective: correlation size does not match the RIS");
    }
    obj.b += r;
  }
  obj.b = hermitian_part(obj.b);

  const CMatrix gram = ap_ris.adjoint() * ap_ris;
  const HermitianEig eig = hermitian_eig(obj.b);
  for (Index i = 0; i < n; ++i) {
    const double lambda = eig.eigenvalues(i);
    if (lambda == 0.0) continue;
    const CVector u = eig.eigenvectors.col(i);
    obj.a += lambda * (u.conjugate().asDiagonal() * gram * u.asDiagonal());
  }
  obj.a = hermitian_part(obj.a);
  return obj;
}

double quadratic_objective(const CMatrix& a, const CVector& psi) {
  return psi.dot(a * psi).real();
}

double received_strength(const CMatrix& ap_ris, const CMatrix& b, const CVector& psi) {
  const CMatrix f = ap_ris * psi.asDiagonal();
  return (f * b * f.adjoint()).trace().real();
}

PowerIterationResult constrained_power_iteration(const CMatrix& a,
                                                 const PowerIterationOptions& opts) {
  if (a.rows() != a.cols()) throw DimensionError("constrained_power_iteration: A must be square");
  if (opts.iterations < 1) throw ConfigError("power_iterations", "must be >= 1");
  PowerIterationResult res;
  res.phases = CVector::Ones(a.rows());
  double objective = quadratic_objective(a, res.phases);
  res.trajectory.push_back(objective);

  for (int it = 0; it < opts.iterations; ++it) {
    const CVector w = a * res.phases;
    const double norm = w.norm();
    if (norm == 0.0) break;
    CVector next(w.size());
    for (Index n = 0; n < w.size(); ++n) next(n) = std::polar(1.0, std::arg(w(n) / norm));
    const double next_objective = quadratic_objective(a, next);
    res.phases = std::move(next);
    res.trajectory.push_back(next_objective);
    ++res.iterations;
    const double scale = std::max(std::abs(objective), std::abs(next_objective));
    if (next_objective < objective - 1e-9 * scale) res.monotone = false;
    const bool converged = opts.tolerance > 0.0 &&
                           std::abs(next_objective - objective) <= opts.tolerance * scale;
    objective = next_objective;
    if (converged) break;
  }
  return res;
}

PhaseMode parse_phase_mode(std::string_view name) {
  if (name == "optimized") return PhaseMode::optimized;
  if (name == "random") return PhaseMode::random;
  if (name == "identity") return PhaseMode::identity;
  throw ConfigError("phase_mode", "unknown mode '" + std::string(name) + "'");
}

PhaseConfig select_long_term_config(const ChannelStats& stats, const Association& assoc,
                                    const SimConfig& cfg, PhaseMode mode, Rng& rng) {
  PhaseConfig out;
  out.reserve(static_cast<std::size_t>(stats.num_aps));
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int l = 0; l < stats.num_aps; ++l) {
    const Index n = stats.h(l).cols();
    switch (mode) {
      case PhaseMode::identity:
        out.push_back(CVector::Ones(n));
        break;
      case PhaseMode::random: {
        CVector psi(n);
        for (Index i = 0; i < n; ++i) psi(i) = std::polar(1.0, angle(rng));
        out.push_back(std::move(psi));
        break;
      }
      case PhaseMode::optimized: {
        std::vector<CMatrix> served;
        for (int k : assoc.served[l]) served.push_back(stats.r(k, l));
        const SignalStrengthObjective obj = build_objective(served, stats.h(l));
        if (obj.neutral) {
          out.push_back(CVector::Ones(n));
          break;
        }
        PowerIterationResult res = constrained_power_iteration(
            obj.a, {cfg.power_iterations, cfg.power_iteration_tolerance});
        if (!res.monotone) {
          std::clog << "warning: constrained power iteration objective decreased at AP " << l
                    << '\n';
        }
        out.push_back(std::move(res.phases));
        break;
      }
    }
  }
  return out;
}

}  // namespace cfris
