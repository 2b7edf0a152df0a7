// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "cfris/config.hpp"
#include "cfris/linalg.hpp"
#include "cfris/network.hpp"

namespace cfris {

/// Pilot assignment and user-centric serving clusters of one setup.
struct Association {
  int num_aps = 0;
  std::vector<int> pilot_of;                 // per UE, in [0, tau_p)
  std::vector<int> master_ap;                // per UE
  std::vector<std::vector<int>> copilot;     // P_k, ascending, contains k
  std::vector<std::vector<int>> serving;     // M_k, ascending AP indices
  std::vector<std::vector<int>> served;      // D_l, ascending UE indices
  std::vector<std::vector<char>> membership;  // [k][l] == 1 iff l in M_k

  int num_ues() const { return static_cast<int>(pilot_of.size()); }
  bool serves(int l, int k) const { return membership[k][l] != 0; }
};

/// Joint pilot assignment and cooperation clustering from the K x L gain
/// table:
///   1. UE k's master AP is argmax_l beta[k][l].
///   2. The first tau_p UEs get distinct pilots; each later UE takes the
///      pilot with the least summed gain at its master AP.
///   3. Every AP serves, on each pilot not already taken by a UE it masters,
///      the co-pilot UE with the largest gain to it.
/// Ties go to the lowest index.
Association assign_pilots_and_clusters(const RMatrix& beta, int pilot_count);
Association assign_pilots_and_clusters(const NetworkRealization& real, const SimConfig& cfg);

/// Builds the derived sets from explicit pilots and membership. Used for
/// synthetic topologies.
Association make_association(std::vector<int> pilot_of, std::vector<std::vector<char>> membership);

/// D_k x for a collective vector stacked AP by AP with `antennas` entries
/// per AP. Throws DimensionError on a length mismatch.
CVector selector_apply(const Association& assoc, int k, const CVector& x, int antennas);

/// S_k: UEs that share at least one serving AP with UE k (contains k when
/// M_k is non-empty).
std::vector<int> overlapping_ues(const Association& assoc, int k);

}  // namespace cfris
