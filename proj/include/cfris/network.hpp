// SPDX-License-Identifier: Apache-2.0
//
// Network geometry, large-scale fading, UE-to-array spatial correlation and
// the fixed RIS-to-antenna channel inside each access point.
//
// Coordinate conventions: the network is a square [0, area_side]^2 on the
// ground plane. Each RIS is a planar grid in its local y-z plane centred at
// the origin; the AP antennas sit behind it at x = -box_depth. UEs are
// ap_height_m below the AP.
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cfris/config.hpp"
#include "cfris/linalg.hpp"
#include "cfris/rng.hpp"

namespace cfris {

struct Position {
  double x = 0.0;
  double y = 0.0;
};

using ElementLayout = std::vector<Eigen::Vector3d>;

/// One Monte Carlo network setup.
struct NetworkRealization {
  std::vector<Position> ap_positions;
  std::vector<Position> ue_positions;
  RMatrix beta;          // K x L linear gains
  RMatrix shadowing_db;  // K x L

  int num_aps() const { return static_cast<int>(ap_positions.size()); }
  int num_ues() const { return static_cast<int>(ue_positions.size()); }
};

/// Long-term channel statistics shared by every coherence block of a setup.
struct ChannelStats {
  int num_ues = 0;
  int num_aps = 0;
  std::vector<CMatrix> correlation;  // index k * L + l, N x N
  std::vector<CMatrix> ap_ris;       // per AP, M x N, unit-norm columns

  const CMatrix& r(int k, int l) const { return correlation[static_cast<std::size_t>(k) * num_aps + l]; }
  const CMatrix& h(int l) const { return ap_ris[static_cast<std::size_t>(l)]; }
};

/// -30.5 - 36.7 log10(d) dB with d the 3D distance in metres.
double path_loss_db(double distance_3d_m);

/// 3D AP-UE distance with the 2D distance clamped to cfg.min_distance_m.
double distance_3d(const Position& ap, const Position& ue, const SimConfig& cfg);

/// Large-scale gains for fixed positions; shadowing is correlated across UEs
/// with covariance std^2 * 2^(-d / decorrelation) and independent across APs.
NetworkRealization compute_large_scale(std::vector<Position> aps, std::vector<Position> ues,
                                       const SimConfig& cfg, Rng& rng);

/// Drops APs and UEs uniformly at random and computes the large-scale gains.
NetworkRealization generate_realization(const SimConfig& cfg, Rng& rng);

/// RIS grid, ris_rows x ris_cols in the y-z plane at x = 0.
ElementLayout ris_layout(const SimConfig& cfg);

/// AP antenna array (linear along y, or square planar), centred at
/// x = x_offset.
ElementLayout antenna_layout(const SimConfig& cfg, double x_offset);

/// Rank-one steering vector exp(j 2 pi / lambda p_n . u) toward a UE.
CVector steering_vector(const ElementLayout& elements, double azimuth, double elevation,
                        double wavelength);

/// Spatial correlation of the UE-to-array channel, scaled so that every
/// diagonal entry equals beta. Gaussian local scattering in azimuth and
/// elevation around the geometric direction; an angular spread of zero gives
/// the rank-one LOS-like limit. Elements must share one x coordinate.
CMatrix build_spatial_correlation(const Position& ue, const Position& ap, double beta,
                                  const ElementLayout& elements, const SimConfig& cfg);

/// Free-space LOS matrix: entry (m, n) = lambda / (4 pi d) exp(-j 2 pi d / lambda).
CMatrix los_matrix(const ElementLayout& antennas, const ElementLayout& ris, double wavelength);

/// RIS-to-antenna channel of one AP. Each column carries exactly
/// rician_los_fraction of its unit power on the LOS direction and the rest on
/// an i.i.d. Gaussian component orthogonal to it.
CMatrix build_ap_ris_channel(const SimConfig& cfg, Rng& rng);

/// One RIS-to-antenna channel per AP; AP l draws from stream (seed, l) so the
/// box hardware is the same in every setup.
std::vector<CMatrix> build_ap_ris_channels(const SimConfig& cfg);

/// R_kl for every UE/AP pair for the given array layout.
std::vector<CMatrix> build_correlations(const NetworkRealization& real,
                                        const ElementLayout& elements, const SimConfig& cfg);

ChannelStats build_channel_stats(const NetworkRealization& real, const SimConfig& cfg);

}  // namespace cfris
