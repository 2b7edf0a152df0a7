// SPDX-License-Identifier: Apache-2.0
#include "cfris/receiver.hpp"

#include <cmath>
#include <numeric>

#include "cfris/errors.hpp"

namespace cfris {

namespace {

int antenna_count(const ErrorCovariances& err) {
  return err.cov.empty() ? 0 : static_cast<int>(err.cov.front().rows());
}

// blockdiag over l in M_k of sum_{i in ues} eta_i C_il
void add_error_blocks(CMatrix& a, int k, std::span<const int> ues, const ErrorCovariances& err,
                      const Association& assoc, const ReceiverParams& rx) {
  const int m = antenna_count(err);
  Index offset = 0;
  for (int l : assoc.serving[k]) {
    for (int i : ues) a.block(offset, offset, m, m) += rx.data_power[i] * err.at(i, l);
    offset += m;
  }
}

}  // namespace

ReceiverParams ReceiverParams::from(const SimConfig& cfg) {
  return ReceiverParams{std::vector<double>(static_cast<std::size_t>(cfg.num_ues), cfg.data_power_w()),
                        cfg.noise_power_w()};
}

CVector stack_serving(const Association& assoc, int k, const BlockEstimates& est, int i) {
  const auto& aps = assoc.serving[k];
  if (aps.empty()) return CVector(0);
  const Index m = est.at(i, aps.front()).size();
  CVector out(static_cast<Index>(aps.size()) * m);
  Index offset = 0;
  for (int l : aps) {
    out.segment(offset, m) = est.at(i, l);
    offset += m;
  }
  return out;
}

CVector expand_to_collective(const Association& assoc, int k, const CVector& reduced,
                             int antennas) {
  if (reduced.size() != static_cast<Index>(assoc.serving[k].size()) * antennas) {
    throw DimensionError("expand_to_collective: reduced vector has the wrong length");
  }
  CVector out = CVector::Zero(static_cast<Index>(assoc.num_aps) * antennas);
  Index offset = 0;
  for (int l : assoc.serving[k]) {
    out.segment(static_cast<Index>(l) * antennas, antennas) = reduced.segment(offset, antennas);
    offset += antennas;
  }
  return out;
}

CVector combiner_over(int k, std::span<const int> ues, const BlockEstimates& est,
                      const ErrorCovariances& err, const Association& assoc,
                      const ReceiverParams& rx) {
  const Index dim = static_cast<Index>(assoc.serving[k].size()) * antenna_count(err);
  if (dim == 0) return CVector(0);
  CMatrix a = CMatrix::Zero(dim, dim);
  for (int i : ues) {
    const CVector g = stack_serving(assoc, k, est, i);
    a.noalias() += rx.data_power[i] * g * g.adjoint();
  }
  add_error_blocks(a, k, ues, err, assoc, rx);
  a.diagonal().array() += rx.noise_power;
  return rx.data_power[k] * solve_pd(a, stack_serving(assoc, k, est, k));
}

CVector mmse_combiner(int k, const BlockEstimates& est, const ErrorCovariances& err,
                      const Association& assoc, const ReceiverParams& rx) {
  std::vector<int> all(static_cast<std::size_t>(assoc.num_ues()));
  std::iota(all.begin(), all.end(), 0);
  return combiner_over(k, all, est, err, assoc, rx);
}

CVector pmmse_combiner(int k, const BlockEstimates& est, const ErrorCovariances& err,
                       const Association& assoc, const ReceiverParams& rx) {
  return combiner_over(k, overlapping_ues(assoc, k), est, err, assoc, rx);
}

double instantaneous_sinr(int k, const CVector& v, const BlockEstimates& est,
                          const ErrorCovariances& err, const Association& assoc,
                          const ReceiverParams& rx) {
  const int m = antenna_count(err);
  if (v.size() != static_cast<Index>(assoc.serving[k].size()) * m) {
    throw DimensionError("instantaneous_sinr: combiner does not match the serving subspace");
  }
  if (v.size() == 0) return 0.0;
  const double signal = rx.data_power[k] * std::norm(v.dot(stack_serving(assoc, k, est, k)));
  double interference = 0.0;
  for (int i = 0; i < assoc.num_ues(); ++i) {
    if (i == k) continue;
    interference += rx.data_power[i] * std::norm(v.dot(stack_serving(assoc, k, est, i)));
  }
  double estimation_error = 0.0;
  Index offset = 0;
  for (int l : assoc.serving[k]) {
    const auto vl = v.segment(offset, m);
    for (int i = 0; i < assoc.num_ues(); ++i) {
      estimation_error += rx.data_power[i] * vl.dot(err.at(i, l) * vl).real();
    }
    offset += m;
  }
  const double noise = rx.noise_power * v.squaredNorm();
  return signal / (interference + estimation_error + noise);
}

double rayleigh_quotient_sinr(int k, const CVector& v, const BlockEstimates& est,
                              const ErrorCovariances& err, const Association& assoc,
                              const ReceiverParams& rx) {
  const Index dim = static_cast<Index>(assoc.serving[k].size()) * antenna_count(err);
  if (v.size() != dim) {
    throw DimensionError("rayleigh_quotient_sinr: combiner does not match the serving subspace");
  }
  if (dim == 0) return 0.0;
  std::vector<int> all(static_cast<std::size_t>(assoc.num_ues()));
  std::iota(all.begin(), all.end(), 0);
  CMatrix b = CMatrix::Zero(dim, dim);
  for (int i : all) {
    if (i == k) continue;
    const CVector g = stack_serving(assoc, k, est, i);
    b.noalias() += rx.data_power[i] * g * g.adjoint();
  }
  add_error_blocks(b, k, all, err, assoc, rx);
  b.diagonal().array() += rx.noise_power;
  const CVector gk = stack_serving(assoc, k, est, k);
  return rx.data_power[k] * std::norm(v.dot(gk)) / v.dot(b * v).real();
}

double spectral_efficiency(std::span<const double> sinr, int tau_c, int tau_p) {
  if (sinr.empty()) throw DimensionError("spectral_efficiency: no SINR samples");
  double acc = 0.0;
  for (double s : sinr) acc += std::log2(1.0 + s);
  const double prelog = static_cast<double>(tau_c - tau_p) / static_cast<double>(tau_c);
  return prelog * acc / static_cast<double>(sinr.size());
}

CombiningEngine::CombiningEngine(const Association& assoc, const ErrorCovariances& err,
                                 ReceiverParams rx, CombinerKind kind)
    : assoc_(assoc), err_(err), rx_(std::move(rx)), antennas_(antenna_count(err)) {
  const int k_count = assoc.num_ues();
  const int l_count = assoc.num_aps;
  std::vector<int> all(static_cast<std::size_t>(k_count));
  std::iota(all.begin(), all.end(), 0);

  group_of_.assign(static_cast<std::size_t>(k_count), -1);
  for (int k = 0; k < k_count; ++k) {
    std::vector<int> ues = kind == CombinerKind::mmse ? all : overlapping_ues(assoc, k);
    int g = 0;
    while (g < static_cast<int>(groups_.size()) && groups_[g].ues != ues) ++g;
    if (g == static_cast<int>(groups_.size())) groups_.push_back(Group{std::move(ues), {}, {}, {}});
    groups_[g].members.push_back(k);
    group_of_[k] = g;
  }

  const CMatrix eye = CMatrix::Identity(antennas_, antennas_);
  for (auto& group : groups_) {
    std::vector<char> used(static_cast<std::size_t>(l_count), 0);
    for (int k : group.members) {
      for (int l : assoc.serving[k]) used[l] = 1;
    }
    group.phi_factor.resize(static_cast<std::size_t>(l_count));
    for (int l = 0; l < l_count; ++l) {
      if (!used[l]) continue;
      group.aps.push_back(l);
      CMatrix phi = rx_.noise_power * eye;
      for (int i : group.ues) phi += rx_.data_power[i] * err.at(i, l);
      const Eigen::LLT<CMatrix> llt(hermitian_part(phi));
      if (llt.info() != Eigen::Success) {
        throw SingularityError("CombiningEngine: error-plus-noise matrix is not positive definite");
      }
      group.phi_factor[l] = llt.matrixL();
    }
  }

  total_error_.resize(static_cast<std::size_t>(l_count));
  for (int l = 0; l < l_count; ++l) {
    CMatrix z = CMatrix::Zero(antennas_, antennas_);
    for (int i = 0; i < k_count; ++i) z += rx_.data_power[i] * err.at(i, l);
    total_error_[l] = std::move(z);
  }
}

std::vector<CVector> CombiningEngine::combiners(const BlockEstimates& est) const {
  const int k_count = assoc_.num_ues();
  std::vector<CVector> out(static_cast<std::size_t>(k_count));
  const Index m = antennas_;
  for (const auto& group : groups_) {
    const Index u = static_cast<Index>(group.ues.size());
    // W_l = L_l^{-1} G_l with Phi_l = L_l L_l^H, and the per-AP Gram W_l^H W_l,
    // shared by the group.
    std::vector<CMatrix> w_blocks(static_cast<std::size_t>(assoc_.num_aps));
    std::vector<CMatrix> gram_blocks(static_cast<std::size_t>(assoc_.num_aps));
    CMatrix g(m, u);
    for (int l : group.aps) {
      for (Index c = 0; c < u; ++c) g.col(c) = est.at(group.ues[c], l);
      w_blocks[l] = group.phi_factor[l].triangularView<Eigen::Lower>().solve(g);
      gram_blocks[l].noalias() = w_blocks[l].adjoint() * w_blocks[l];
    }
    for (int k : group.members) {
      const auto& aps = assoc_.serving[k];
      if (aps.empty()) {
        out[k] = CVector(0);
        continue;
      }
      CMatrix s = CMatrix::Zero(u, u);
      Index pos = 0;
      for (Index c = 0; c < u; ++c) {
        s(c, c) = 1.0 / rx_.data_power[group.ues[c]];
        if (group.ues[c] == k) pos = c;
      }
      for (int l : aps) s += gram_blocks[l];
      CVector e = CVector::Zero(u);
      e(pos) = 1.0;
      const CVector x = solve_pd(s, e);
      CVector v(static_cast<Index>(aps.size()) * m);
      Index offset = 0;
      for (int l : aps) {
        v.segment(offset, m) =
            group.phi_factor[l].triangularView<Eigen::Lower>().adjoint().solve(w_blocks[l] * x);
        offset += m;
      }
      out[k] = std::move(v);
    }
  }
  return out;
}

double CombiningEngine::sinr_of(int k, const CVector& v, const BlockEstimates& est) const {
  if (v.size() == 0) return 0.0;
  const Index m = antennas_;
  const int k_count = assoc_.num_ues();
  std::vector<Complex> inner(static_cast<std::size_t>(k_count), Complex(0.0, 0.0));
  double estimation_error = 0.0;
  Index offset = 0;
  for (int l : assoc_.serving[k]) {
    const auto vl = v.segment(offset, m);
    for (int i = 0; i < k_count; ++i) inner[i] += vl.dot(est.at(i, l));
    estimation_error += vl.dot(total_error_[l] * vl).real();
    offset += m;
  }
  double interference = 0.0;
  for (int i = 0; i < k_count; ++i) {
    if (i != k) interference += rx_.data_power[i] * std::norm(inner[i]);
  }
  const double signal = rx_.data_power[k] * std::norm(inner[k]);
  return signal / (interference + estimation_error + rx_.noise_power * v.squaredNorm());
}

std::vector<double> CombiningEngine::sinrs(const BlockEstimates& est) const {
  const std::vector<CVector> v = combiners(est);
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = sinr_of(static_cast<int>(k), v[k], est);
  return out;
}

}  // namespace cfris
