// SPDX-License-Identifier: Apache-2.0
//
// Centralized uplink reception. Combining vectors for UE k live on the
// serving subspace D_k and are stored in reduced form: the per-AP blocks for
// l in M_k, stacked in ascending AP order. `expand_to_collective` recovers
// the full L*M form.
#pragma once

#include <span>
#include <vector>

#include "cfris/association.hpp"
#include "cfris/config.hpp"
#include "cfris/estimation.hpp"
#include "cfris/linalg.hpp"

namespace cfris {

struct ReceiverParams {
  std::vector<double> data_power;  // eta_i, W
  double noise_power = 1.0;        // sigma^2, W

  static ReceiverParams from(const SimConfig& cfg);
};

/// D_k g_hat_i in reduced form.
CVector stack_serving(const Association& assoc, int k, const BlockEstimates& est, int i);

/// Zero-pads a reduced vector of UE k to length L * antennas.
CVector expand_to_collective(const Association& assoc, int k, const CVector& reduced,
                             int antennas);

/// eta_k (sum_{i in ues} eta_i D_k (g_i g_i^H + C_i) D_k + sigma^2 I)^{-1} D_k g_k
/// on the reduced subspace.
CVector combiner_over(int k, std::span<const int> ues, const BlockEstimates& est,
                      const ErrorCovariances& err, const Association& assoc,
                      const ReceiverParams& rx);

/// Centralized MMSE: interference statistics of all UEs.
CVector mmse_combiner(int k, const BlockEstimates& est, const ErrorCovariances& err,
                      const Association& assoc, const ReceiverParams& rx);

/// Partial MMSE: only UEs sharing a serving AP with k.
CVector pmmse_combiner(int k, const BlockEstimates& est, const ErrorCovariances& err,
                       const Association& assoc, const ReceiverParams& rx);

/// Effective SINR as a signal over a sum of interference, estimation-error
/// and noise terms, each evaluated separately.
double instantaneous_sinr(int k, const CVector& v, const BlockEstimates& est,
                          const ErrorCovariances& err, const Association& assoc,
                          const ReceiverParams& rx);

/// Same SINR as a generalized Rayleigh quotient with an explicitly formed
/// interference-plus-noise matrix.
double rayleigh_quotient_sinr(int k, const CVector& v, const BlockEstimates& est,
                              const ErrorCovariances& err, const Association& assoc,
                              const ReceiverParams& rx);

/// prelog * mean(log2(1 + SINR)). Throws DimensionError on an empty sample.
double spectral_efficiency(std::span<const double> sinr, int tau_c, int tau_p);

/// Per-setup combining engine. Exploits the block-diagonal structure of the
/// error and noise terms with the Woodbury identity:
///   v_k = Y (diag(eta)^{-1} + G^H Y)^{-1} e_k,   Y = Phi^{-1} G,
/// where G stacks D_k g_hat_i for the UEs in the interference set and Phi is
/// the block-diagonal error-plus-noise matrix. Matches `combiner_over`.
class CombiningEngine {
 public:
  CombiningEngine(const Association& assoc, const ErrorCovariances& err, ReceiverParams rx,
                  CombinerKind kind);

  /// Reduced combining vector of every UE for one block.
  std::vector<CVector> combiners(const BlockEstimates& est) const;

  /// SINR of every UE for one block.
  std::vector<double> sinrs(const BlockEstimates& est) const;

 private:
  struct Group {
    std::vector<int> ues;
    std::vector<int> members;
    std::vector<int> aps;
    std::vector<CMatrix> phi_factor;  // lower Cholesky factor by AP, empty when unused
  };

  double sinr_of(int k, const CVector& v, const BlockEstimates& est) const;

  const Association& assoc_;
  const ErrorCovariances& err_;
  ReceiverParams rx_;
  int antennas_;
  std::vector<Group> groups_;
  std::vector<int> group_of_;
  std::vector<CMatrix> total_error_;  // sum_i eta_i C_il per AP
};

}  // namespace cfris
