// SPDX-License-Identifier: Apache-2.0
#include "cfris/association.hpp"

#include <string>

#include "cfris/errors.hpp"

namespace cfris {

namespace {

void fill_derived_sets(Association& a) {
  const int k_count = a.num_ues();
  a.copilot.assign(static_cast<std::size_t>(k_count), {});
  a.serving.assign(static_cast<std::size_t>(k_count), {});
  a.served.assign(static_cast<std::size_t>(a.num_aps), {});
  for (int k = 0; k < k_count; ++k) {
    for (int i = 0; i < k_count; ++i) {
      if (a.pilot_of[i] == a.pilot_of[k]) a.copilot[k].push_back(i);
    }
    for (int l = 0; l < a.num_aps; ++l) {
      if (a.membership[k][l]) {
        a.serving[k].push_back(l);
        a.served[l].push_back(k);
      }
    }
  }
}

}  // namespace

Association assign_pilots_and_clusters(const RMatrix& beta, int pilot_count) {
  if (pilot_count < 1) throw ConfigError("pilot_samples", "must be >= 1");
  const int k_count = static_cast<int>(beta.rows());
  const int l_count = static_cast<int>(beta.cols());

  Association a;
  a.num_aps = l_count;
  a.pilot_of.assign(static_cast<std::size_t>(k_count), -1);
  a.master_ap.assign(static_cast<std::size_t>(k_count), -1);
  a.membership.assign(static_cast<std::size_t>(k_count),
                      std::vector<char>(static_cast<std::size_t>(l_count), 0));

  for (int k = 0; k < k_count; ++k) {
    int master = 0;
    for (int l = 1; l < l_count; ++l) {
      if (beta(k, l) > beta(k, master)) master = l;
    }
    a.master_ap[k] = master;
    a.membership[k][master] = 1;

    if (k < pilot_count) {
      a.pilot_of[k] = k;
      continue;
    }
    int best = 0;
    double best_interference = 0.0;
    for (int t = 0; t < pilot_count; ++t) {
      double interference = 0.0;
      for (int i = 0; i < k; ++i) {
        if (a.pilot_of[i] == t) interference += beta(i, master);
      }
      if (t == 0 || interference < best_interference) {
        best = t;
        best_interference = interference;
      }
    }
    a.pilot_of[k] = best;
  }

  for (int l = 0; l < l_count; ++l) {
    for (int t = 0; t < pilot_count; ++t) {
      int strongest = -1;
      bool has_master_ue = false;
      for (int k = 0; k < k_count; ++k) {
        if (a.pilot_of[k] != t) continue;
        if (a.master_ap[k] == l) has_master_ue = true;
        if (strongest < 0 || beta(k, l) > beta(strongest, l)) strongest = k;
      }
      if (strongest >= 0 && !has_master_ue) a.membership[strongest][l] = 1;
    }
  }

  fill_derived_sets(a);
  return a;
}

Association assign_pilots_and_clusters(const NetworkRealization& real, const SimConfig& cfg) {
  return assign_pilots_and_clusters(real.beta, cfg.pilot_samples);
}

Association make_association(std::vector<int> pilot_of, std::vector<std::vector<char>> membership) {
  if (membership.size() != pilot_of.size()) {
    throw DimensionError("make_association: membership rows must match the UE count");
  }
  Association a;
  a.num_aps = membership.empty() ? 0 : static_cast<int>(membership.front().size());
  for (const auto& row : membership) {
    if (static_cast<int>(row.size()) != a.num_aps) {
      throw DimensionError("make_association: ragged membership matrix");
    }
  }
  a.pilot_of = std::move(pilot_of);
  a.membership = std::move(membership);
  a.master_ap.assign(a.pilot_of.size(), -1);
  for (std::size_t k = 0; k < a.membership.size(); ++k) {
    for (int l = 0; l < a.num_aps; ++l) {
      if (a.membership[k][l]) {
        a.master_ap[k] = l;
        break;
      }
    }
  }
  fill_derived_sets(a);
  return a;
}

CVector selector_apply(const Association& assoc, int k, const CVector& x, int antennas) {
  const Index expected = static_cast<Index>(assoc.num_aps) * antennas;
  if (x.size() != expected) {
    throw DimensionError("selector_apply: vector has length " + std::to_string(x.size()) +
                         ", expected " + std::to_string(expected));
  }
  CVector out = CVector::Zero(x.size());
  for (int l : assoc.serving[k]) {
    out.segment(static_cast<Index>(l) * antennas, antennas) =
        x.segment(static_cast<Index>(l) * antennas, antennas);
  }
  return out;
}

std::vector<int> overlapping_ues(const Association& assoc, int k) {
  std::vector<int> out;
  for (int i = 0; i < assoc.num_ues(); ++i) {
    for (int l : assoc.serving[k]) {
      if (assoc.serves(l, i)) {
        out.push_back(i);
        break;
      }
    }
  }
  return out;
}

}  // namespace cfris
