// SPDX-License-Identifier: Apache-2.0
//
// Pilot processing through a fixed RIS configuration: sufficient statistic,
// MMSE channel estimate and estimation-error covariance.
//
// A "front end" F_l is the matrix that maps the UE-to-array channel to the
// antenna ports of AP l: H_l diag(psi_l) behind an RIS, or the identity for
// a plain antenna array.
#pragma once

#include <span>
#include <vector>

#include "cfris/association.hpp"
#include "cfris/config.hpp"
#include "cfris/linalg.hpp"
#include "cfris/rng.hpp"

namespace cfris {

struct PilotParams {
  int tau_p = 1;
  double pilot_power = 1.0;  // rho_p, W
  double noise_power = 1.0;  // sigma^2, W

  static PilotParams from(const SimConfig& cfg);
  double processing_gain() const { return tau_p * pilot_power; }
};

/// H diag(psi)
CMatrix front_end(const CMatrix& ap_ris, const CVector& phases);

/// Q = F R F^H
CMatrix effective_covariance(const CMatrix& front, const CMatrix& r);

/// tau_p rho_p sum_{i in P_k} Q_i + sigma^2 I
CMatrix pilot_gram(std::span<const CMatrix> copilot_effective, const PilotParams& p);

/// Effective covariances Q_kl and pilot Gram matrices G_kl for all pairs.
/// Immutable once built.
class EffectiveStats {
 public:
  EffectiveStats(std::span<const CMatrix> front_ends, std::span<const CMatrix> correlations,
                 const Association& assoc, const PilotParams& p);

  const CMatrix& q(int k, int l) const { return q_[idx(k, l)]; }
  const CMatrix& gram(int k, int l) const { return gram_[idx(k, l)]; }
  int num_aps() const { return num_aps_; }

 private:
  std::size_t idx(int k, int l) const { return static_cast<std::size_t>(k) * num_aps_ + l; }
  int num_aps_;
  std::vector<CMatrix> q_;
  std::vector<CMatrix> gram_;
};

/// z_kl = sqrt(tau_p rho_p) sum_i F h_il + n with n ~ CN(0, sigma^2 I).
CVector received_pilot_statistic(std::span<const CVector> copilot_channels, const CMatrix& front,
                                 const PilotParams& p, Rng& rng);

/// h_hat = sqrt(tau_p rho_p) R F^H G^{-1} z
CVector mmse_estimate(const CVector& z, const CMatrix& gram, const CMatrix& r, const CMatrix& front,
                      const PilotParams& p);

/// C = R - tau_p rho_p R F^H G^{-1} F R
CMatrix error_covariance(const CMatrix& gram, const CMatrix& r, const CMatrix& front,
                         const PilotParams& p);

/// F C F^H evaluated as Q G^{-1} (G - tau_p rho_p Q), which avoids the
/// cancellation of the direct form at high SNR.
CMatrix effective_error_covariance(const CMatrix& q, const CMatrix& gram, const PilotParams& p);

/// Effective estimates g_hat_il = F_l h_hat_il for every UE i and AP l of
/// one coherence block.
struct BlockEstimates {
  int num_aps = 0;
  std::vector<CVector> g_hat;  // index i * L + l

  const CVector& at(int i, int l) const { return g_hat[static_cast<std::size_t>(i) * num_aps + l]; }
};

/// Effective error covariances F_l C_il F_l^H for every UE i and AP l.
struct ErrorCovariances {
  int num_aps = 0;
  std::vector<CMatrix> cov;  // index i * L + l

  const CMatrix& at(int i, int l) const { return cov[static_cast<std::size_t>(i) * num_aps + l]; }
};

/// Per-setup precomputation for drawing pilot statistics and estimates
/// directly in the antenna domain. F h_il is drawn as P w with P P^H = Q,
/// Q = F R F^H, the same distribution as forming h_il first.
class EstimatorBank {
 public:
  EstimatorBank(std::span<const CMatrix> front_ends, std::span<const CMatrix> correlations,
                const Association& assoc, const PilotParams& p);

  /// Draws one coherence block.
  BlockEstimates draw_block(Rng& rng) const;

  const ErrorCovariances& error_covariances() const { return error_cov_; }
  int num_aps() const { return num_aps_; }
  int num_ues() const { return num_ues_; }
  int antennas() const { return antennas_; }

 private:
  std::size_t idx(int k, int l) const { return static_cast<std::size_t>(k) * num_aps_ + l; }

  int num_ues_;
  int num_aps_;
  int antennas_;
  PilotParams params_;
  std::vector<int> pilot_of_;
  std::vector<std::vector<int>> pilot_groups_;
  std::vector<CMatrix> draw_factor_;  // P with P P^H = Q
  std::vector<CMatrix> estimator_;    // sqrt(tau_p rho_p) Q G^{-1}
  ErrorCovariances error_cov_;
};

}  // namespace cfris
