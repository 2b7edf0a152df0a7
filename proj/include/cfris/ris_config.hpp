// SPDX-License-Identifier: Apache-2.0
//
// Long-term RIS phase selection. The received signal strength at AP l,
//   tr(H diag(psi) B diag(psi)^H H^H),   B = sum_{k in D_l} R_kl,
// equals the quadratic form psi^H A psi with
//   A = sum_n lambda_n diag(u_n^*) H^H H diag(u_n)
// where (lambda_n, u_n) are the eigenpairs of B. It is maximized over
// unit-modulus psi by a power iteration that projects every iterate back
// onto the unit circle entry-wise.
#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "cfris/association.hpp"
#include "cfris/config.hpp"
#include "cfris/linalg.hpp"
#include "cfris/network.hpp"
#include "cfris/rng.hpp"

namespace cfris {

struct SignalStrengthObjective {
  CMatrix b;
  CMatrix a;
  /// True when the AP serves nobody; A is zero and identity phases are used.
  bool neutral = false;
};

/// Throws DimensionError when the correlation sizes do not match H's columns.
SignalStrengthObjective build_objective(std::span<const CMatrix> served_correlations,
                                        const CMatrix& ap_ris);

/// psi^H A psi (real part).
double quadratic_objective(const CMatrix& a, const CVector& psi);

/// tr(H diag(psi) B diag(psi)^H H^H), the direct form of the same objective.
double received_strength(const CMatrix& ap_ris, const CMatrix& b, const CVector& psi);

struct PowerIterationOptions {
  int iterations = 100;
  /// Stop once the relative objective gain of one step falls below this.
  /// Zero runs exactly `iterations` steps.
  double tolerance = 1e-8;
};

struct PowerIterationResult {
  CVector phases;
  /// Objective at psi^(0), psi^(1), ...
  std::vector<double> trajectory;
  int iterations = 0;
  /// False if any step decreased the objective by more than 1e-9 relative.
  bool monotone = true;
};

/// Starts from the all-ones vector. If A psi vanishes the current iterate
/// is returned unchanged.
PowerIterationResult constrained_power_iteration(const CMatrix& a,
                                                 const PowerIterationOptions& opts = {});

enum class PhaseMode { optimized, random, identity };

PhaseMode parse_phase_mode(std::string_view name);

/// One unit-modulus vector per AP, used as the diagonal of Psi_l.
using PhaseConfig = std::vector<CVector>;

/// Chooses the configuration of every RIS from long-term statistics only.
/// `rng` is consumed only in random mode.
PhaseConfig select_long_term_config(const ChannelStats& stats, const Association& assoc,
                                    const SimConfig& cfg, PhaseMode mode, Rng& rng);

}  // namespace cfris
