// SPDX-License-Identifier: Apache-2.0
#include "cfris/estimation.hpp"

#include <cmath>

#include "cfris/errors.hpp"

namespace cfris {

PilotParams PilotParams::from(const SimConfig& cfg) {
  return PilotParams{cfg.pilot_samples, cfg.pilot_power_w(), cfg.noise_power_w()};
}

CMatrix front_end(const CMatrix& ap_ris, const CVector& phases) {
  if (ap_ris.cols() != phases.size()) {
    throw DimensionError("front_end: phase vector length does not match RIS size");
  }
  return ap_ris * phases.asDiagonal();
}

CMatrix effective_covariance(const CMatrix& front, const CMatrix& r) {
  return hermitian_part(front * r * front.adjoint());
}

CMatrix pilot_gram(std::span<const CMatrix> copilot_effective, const PilotParams& p) {
  if (copilot_effective.empty()) throw DimensionError("pilot_gram: empty co-pilot set");
  const Index m = copilot_effective.front().rows();
  CMatrix g = CMatrix::Zero(m, m);
  for (const auto& q : copilot_effective) g += q;
  g *= p.processing_gain();
  g.diagonal().array() += p.noise_power;
  return g;
}

EffectiveStats::EffectiveStats(std::span<const CMatrix> front_ends,
                               std::span<const CMatrix> correlations, const Association& assoc,
                               const PilotParams& p)
    : num_aps_(assoc.num_aps) {
  const int k_count = assoc.num_ues();
  std::vector<char> plain(static_cast<std::size_t>(num_aps_));
  for (int l = 0; l < num_aps_; ++l) {
    const CMatrix& f = front_ends[l];
    plain[l] = f.rows() == f.cols() && f.isIdentity(0.0);
  }
  q_.reserve(static_cast<std::size_t>(k_count * num_aps_));
  for (int k = 0; k < k_count; ++k) {
    for (int l = 0; l < num_aps_; ++l) {
      const CMatrix& r = correlations[idx(k, l)];
      q_.push_back(plain[l] ? r : effective_covariance(front_ends[l], r));
    }
  }
  // Co-pilot UEs share one Gram matrix per AP.
  gram_.resize(q_.size());
  for (int k = 0; k < k_count; ++k) {
    const int first = assoc.copilot[k].front();
    for (int l = 0; l < num_aps_; ++l) {
      if (first < k) {
        gram_[idx(k, l)] = gram_[idx(first, l)];
        continue;
      }
      std::vector<CMatrix> group;
      for (int i : assoc.copilot[k]) group.push_back(q_[idx(i, l)]);
      gram_[idx(k, l)] = pilot_gram(group, p);
    }
  }
}

CVector received_pilot_statistic(std::span<const CVector> copilot_channels, const CMatrix& front,
                                 const PilotParams& p, Rng& rng) {
  CVector sum = CVector::Zero(front.cols());
  for (const auto& h : copilot_channels) sum += h;
  CVector z = std::sqrt(p.processing_gain()) * (front * sum);
  z += std::sqrt(p.noise_power) * standard_complex_gaussian(front.rows(), rng);
  return z;
}

CVector mmse_estimate(const CVector& z, const CMatrix& gram, const CMatrix& r, const CMatrix& front,
                      const PilotParams& p) {
  return std::sqrt(p.processing_gain()) * (r * (front.adjoint() * solve_pd(gram, z)));
}

CMatrix error_covariance(const CMatrix& gram, const CMatrix& r, const CMatrix& front,
                         const PilotParams& p) {
  const CMatrix fr = front * r;
  return hermitian_part(r - p.processing_gain() * fr.adjoint() * solve_pd(gram, fr));
}

CMatrix effective_error_covariance(const CMatrix& q, const CMatrix& gram, const PilotParams& p) {
  // Q G^{-1} (G - c Q) = (G^{-1} Q)^H (G - c Q) since Q and G are Hermitian.
  const CMatrix ginv_q = solve_pd(gram, q);
  return hermitian_part(ginv_q.adjoint() * (gram - p.processing_gain() * q));
}

EstimatorBank::EstimatorBank(std::span<const CMatrix> front_ends,
                             std::span<const CMatrix> correlations, const Association& assoc,
                             const PilotParams& p)
    : num_ues_(assoc.num_ues()),
      num_aps_(assoc.num_aps),
      antennas_(static_cast<int>(front_ends.front().rows())),
      params_(p),
      pilot_of_(assoc.pilot_of) {
  int pilots = 0;
  for (int t : pilot_of_) pilots = std::max(pilots, t + 1);
  pilot_groups_.assign(static_cast<std::size_t>(pilots), {});
  for (int k = 0; k < num_ues_; ++k) pilot_groups_[pilot_of_[k]].push_back(k);

  const EffectiveStats stats(front_ends, correlations, assoc, p);
  const std::size_t pairs = static_cast<std::size_t>(num_ues_) * num_aps_;
  draw_factor_.resize(pairs);
  estimator_.resize(pairs);
  error_cov_.num_aps = num_aps_;
  error_cov_.cov.resize(pairs);
  const double gain = std::sqrt(p.processing_gain());
  for (int l = 0; l < num_aps_; ++l) {
    for (const auto& group : pilot_groups_) {
      if (group.empty()) continue;
      const CMatrix& g = stats.gram(group.front(), l);
      const PdSolver solver(g);
      for (int k : group) {
        const std::size_t i = idx(k, l);
        const CMatrix& q = stats.q(k, l);
        draw_factor_[i] = psd_factor(q);
        // (G^{-1} Q)^H = Q G^{-1}; the error covariance reuses it in the
        // cancellation-free form Q G^{-1} (G - tau_p rho_p Q).
        const CMatrix q_ginv = solver.solve(q).adjoint();
        estimator_[i] = gain * q_ginv;
        error_cov_.cov[i] = hermitian_part(q_ginv * (g - p.processing_gain() * q));
      }
    }
  }
}

BlockEstimates EstimatorBank::draw_block(Rng& rng) const {
  BlockEstimates out;
  out.num_aps = num_aps_;
  out.g_hat.resize(static_cast<std::size_t>(num_ues_) * num_aps_);
  const double gain = std::sqrt(params_.processing_gain());
  const double noise = std::sqrt(params_.noise_power);
  CVector w(antennas_);
  CVector n(antennas_);
  CVector z(antennas_);
  for (int l = 0; l < num_aps_; ++l) {
    for (const auto& group : pilot_groups_) {
      if (group.empty()) continue;
      z.setZero();
      for (int i : group) {
        fill_standard_complex_gaussian(w, rng);
        z.noalias() += draw_factor_[idx(i, l)] * w;
      }
      fill_standard_complex_gaussian(n, rng);
      z = gain * z + noise * n;
      for (int i : group) out.g_hat[idx(i, l)].noalias() = estimator_[idx(i, l)] * z;
    }
  }
  return out;
}

}  // namespace cfris
