// SPDX-License-Identifier: Apache-2.0
#include "cfris/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "cfris/errors.hpp"

namespace cfris {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kHermiteNodes = 32;

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;  // sum to one
};

// Gauss-Hermite rule for a standard normal variable (Golub-Welsch).
const Quadrature& normal_quadrature() {
  static const Quadrature rule = [] {
    const int n = kHermiteNodes;
    CMatrix jacobi = CMatrix::Zero(n, n);
    for (int i = 1; i < n; ++i) {
      const double b = std::sqrt(i / 2.0);
      jacobi(i, i - 1) = b;
      jacobi(i - 1, i) = b;
    }
    const HermitianEig eig = hermitian_eig(jacobi);
    Quadrature q;
    for (int i = 0; i < n; ++i) {
      q.nodes.push_back(std::sqrt(2.0) * eig.eigenvalues(i));
      q.weights.push_back(std::norm(eig.eigenvectors(0, i)));
    }
    return q;
  }();
  return rule;
}

double elevation_to(const Position& ue, const Position& ap, const SimConfig& cfg) {
  const double d2 = std::max(std::hypot(ue.x - ap.x, ue.y - ap.y), cfg.min_distance_m);
  return -std::atan2(cfg.ap_height_m, d2);
}

double azimuth_to(const Position& ue, const Position& ap) {
  return std::atan2(ue.y - ap.y, ue.x - ap.x);
}

// Index of a coordinate difference after snapping to a 1e-9 m grid.
long long snap(double v) { return std::llround(v * 1e9); }

}  // namespace

double path_loss_db(double distance_3d_m) { return -30.5 - 36.7 * std::log10(distance_3d_m); }

double distance_3d(const Position& ap, const Position& ue, const SimConfig& cfg) {
  const double d2 = std::max(std::hypot(ue.x - ap.x, ue.y - ap.y), cfg.min_distance_m);
  return std::hypot(d2, cfg.ap_height_m);
}

NetworkRealization compute_large_scale(std::vector<Position> aps, std::vector<Position> ues,
                                       const SimConfig& cfg, Rng& rng) {
  NetworkRealization out;
  out.ap_positions = std::move(aps);
  out.ue_positions = std::move(ues);
  const int k_count = out.num_ues();
  const int l_count = out.num_aps();
  out.beta.resize(k_count, l_count);
  out.shadowing_db = RMatrix::Zero(k_count, l_count);

  if (cfg.shadowing_std_db > 0.0) {
    RMatrix cov(k_count, k_count);
    for (int a = 0; a < k_count; ++a) {
      for (int b = 0; b < k_count; ++b) {
        const double d = std::hypot(out.ue_positions[a].x - out.ue_positions[b].x,
                                    out.ue_positions[a].y - out.ue_positions[b].y);
        cov(a, b) = cfg.shadowing_std_db * cfg.shadowing_std_db *
                    std::pow(2.0, -d / cfg.shadowing_decorrelation_m);
      }
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> eig(cov);
    const RMatrix root = eig.eigenvectors() *
                         eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                         eig.eigenvectors().transpose();
    std::normal_distribution<double> normal(0.0, 1.0);
    RVector w(k_count);
    for (int l = 0; l < l_count; ++l) {
      for (int k = 0; k < k_count; ++k) w(k) = normal(rng);
      out.shadowing_db.col(l) = root * w;
    }
  }

  for (int k = 0; k < k_count; ++k) {
    for (int l = 0; l < l_count; ++l) {
      const double d = distance_3d(out.ap_positions[l], out.ue_positions[k], cfg);
      out.beta(k, l) = std::pow(10.0, (path_loss_db(d) + out.shadowing_db(k, l)) / 10.0);
    }
  }
  return out;
}

NetworkRealization generate_realization(const SimConfig& cfg, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  auto draw = [&](int count) {
    std::vector<Position> pts(static_cast<std::size_t>(count));
    for (auto& p : pts) {
      p.x = uniform(rng) * cfg.area_side_m;
      p.y = uniform(rng) * cfg.area_side_m;
    }
    return pts;
  };
  auto aps = draw(cfg.num_aps);
  auto ues = draw(cfg.num_ues);
  return compute_large_scale(std::move(aps), std::move(ues), cfg, rng);
}

ElementLayout ris_layout(const SimConfig& cfg) {
  const double s = cfg.element_spacing_m();
  ElementLayout out;
  out.reserve(static_cast<std::size_t>(cfg.ris_elements()));
  for (int r = 0; r < cfg.ris_rows; ++r) {
    for (int c = 0; c < cfg.ris_cols; ++c) {
      out.emplace_back(0.0, (c - (cfg.ris_cols - 1) / 2.0) * s, (r - (cfg.ris_rows - 1) / 2.0) * s);
    }
  }
  return out;
}

ElementLayout antenna_layout(const SimConfig& cfg, double x_offset) {
  const double s = cfg.element_spacing_m();
  const int m = cfg.antennas_per_ap;
  ElementLayout out;
  if (cfg.array_geometry == ArrayGeometry::linear) {
    for (int i = 0; i < m; ++i) out.emplace_back(x_offset, (i - (m - 1) / 2.0) * s, 0.0);
  } else {
    const int side = static_cast<int>(std::lround(std::sqrt(m)));
    for (int r = 0; r < side; ++r) {
      for (int c = 0; c < side; ++c) {
        out.emplace_back(x_offset, (c - (side - 1) / 2.0) * s, (r - (side - 1) / 2.0) * s);
      }
    }
  }
  return out;
}

CVector steering_vector(const ElementLayout& elements, double azimuth, double elevation,
                        double wavelength) {
  const Eigen::Vector3d u(std::cos(elevation) * std::cos(azimuth),
                          std::cos(elevation) * std::sin(azimuth), std::sin(elevation));
  const double k = 2.0 * kPi / wavelength;
  CVector a(static_cast<Index>(elements.size()));
  for (std::size_t n = 0; n < elements.size(); ++n) {
    a(static_cast<Index>(n)) = std::polar(1.0, k * elements[n].dot(u));
  }
  return a;
}

CMatrix build_spatial_correlation(const Position& ue, const Position& ap, double beta,
                                  const ElementLayout& elements, const SimConfig& cfg) {
  const Index n = static_cast<Index>(elements.size());
  if (cfg.correlation_model == CorrelationModel::uncorrelated) {
    return CMatrix::Identity(n, n) * beta;
  }
  const double azimuth = azimuth_to(ue, ap);
  const double elevation = elevation_to(ue, ap, cfg);
  const double lambda = cfg.wavelength_m();
  if (cfg.angular_std_deg == 0.0) {
    const CVector a = steering_vector(elements, azimuth, elevation, lambda);
    CMatrix r = beta * a * a.adjoint();
    r.diagonal().setConstant(beta);
    return r;
  }
  for (const auto& p : elements) {
    if (p.x() != elements.front().x()) {
      throw ModelError("build_spatial_correlation: elements must lie in one y-z plane");
    }
  }

  // The phase of entry (m, n) is k (dy cos(el) sin(az) + dz sin(el)), which
  // separates into an azimuth sum per elevation node followed by an
  // elevation sum. Only distinct coordinate differences are evaluated.
  const double k = 2.0 * kPi / lambda;
  const double sigma = cfg.angular_std_deg * kPi / 180.0;
  const Quadrature& q = normal_quadrature();
  const std::size_t nodes = q.nodes.size();

  std::map<long long, std::size_t> dy_index;
  std::map<long long, std::size_t> dz_index;
  std::vector<double> dy_values;
  std::vector<double> dz_values;
  std::vector<std::size_t> pair_dy(static_cast<std::size_t>(n * n));
  std::vector<std::size_t> pair_dz(static_cast<std::size_t>(n * n));
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      const double dy = elements[a].y() - elements[b].y();
      const double dz = elements[a].z() - elements[b].z();
      auto [iy, new_y] = dy_index.try_emplace(snap(dy), dy_values.size());
      if (new_y) dy_values.push_back(dy);
      auto [iz, new_z] = dz_index.try_emplace(snap(dz), dz_values.size());
      if (new_z) dz_values.push_back(dz);
      pair_dy[static_cast<std::size_t>(a * n + b)] = iy->second;
      pair_dz[static_cast<std::size_t>(a * n + b)] = iz->second;
    }
  }

  std::vector<std::size_t> dy_mirror(dy_values.size());
  for (std::size_t y = 0; y < dy_values.size(); ++y) {
    const auto it = dy_index.find(snap(-dy_values[y]));
    dy_mirror[y] = it == dy_index.end() ? y : it->second;
  }

  std::vector<double> sin_az(nodes);
  for (std::size_t i = 0; i < nodes; ++i) sin_az[i] = std::sin(azimuth + sigma * q.nodes[i]);

  // table(dy, dz) = sum_j w_j exp(j k dz sin(el_j)) sum_i v_i exp(j k dy cos(el_j) sin(az_i))
  std::vector<Complex> table(dy_values.size() * dz_values.size(), Complex(0.0, 0.0));
  std::vector<Complex> az_sum(dy_values.size());
  for (std::size_t j = 0; j < nodes; ++j) {
    const double el = elevation + sigma * q.nodes[j];
    const double cos_el = std::cos(el);
    const double sin_el = std::sin(el);
    for (std::size_t y = 0; y < dy_values.size(); ++y) {
      // The azimuth sum at -dy is the conjugate of the one at dy.
      if (dy_mirror[y] < y) {
        az_sum[y] = std::conj(az_sum[dy_mirror[y]]);
        continue;
      }
      Complex acc(0.0, 0.0);
      for (std::size_t i = 0; i < nodes; ++i) {
        acc += q.weights[i] * std::polar(1.0, k * dy_values[y] * cos_el * sin_az[i]);
      }
      az_sum[y] = acc;
    }
    for (std::size_t z = 0; z < dz_values.size(); ++z) {
      const Complex el_phase = q.weights[j] * std::polar(1.0, k * dz_values[z] * sin_el);
      for (std::size_t y = 0; y < dy_values.size(); ++y) {
        table[y * dz_values.size() + z] += el_phase * az_sum[y];
      }
    }
  }

  CMatrix r(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      const std::size_t idx = static_cast<std::size_t>(a * n + b);
      r(a, b) = beta * table[pair_dy[idx] * dz_values.size() + pair_dz[idx]];
    }
  }
  r = hermitian_part(r);
  r.diagonal().setConstant(beta);
  return r;
}

CMatrix los_matrix(const ElementLayout& antennas, const ElementLayout& ris, double wavelength) {
  CMatrix out(static_cast<Index>(antennas.size()), static_cast<Index>(ris.size()));
  for (std::size_t m = 0; m < antennas.size(); ++m) {
    for (std::size_t n = 0; n < ris.size(); ++n) {
      const double d = (antennas[m] - ris[n]).norm();
      out(static_cast<Index>(m), static_cast<Index>(n)) =
          std::polar(wavelength / (4.0 * kPi * d), -2.0 * kPi * d / wavelength);
    }
  }
  return out;
}

CMatrix build_ap_ris_channel(const SimConfig& cfg, Rng& rng) {
  if (!(cfg.box_depth_wavelengths > 0.0)) {
    throw ConfigError("box_depth_wavelengths", "must be > 0");
  }
  const CMatrix los =
      los_matrix(antenna_layout(cfg, -cfg.box_depth_m()), ris_layout(cfg), cfg.wavelength_m());
  const Index m = los.rows();
  const Index n = los.cols();
  const double f = cfg.rician_los_fraction;

  CMatrix out(m, n);
  for (Index c = 0; c < n; ++c) {
    const CVector los_dir = los.col(c).normalized();
    CVector nlos = standard_complex_gaussian(m, rng);
    nlos -= los_dir * los_dir.dot(nlos);
    CVector col;
    if (f >= 1.0 || nlos.norm() == 0.0 || m == 1) {
      // Nothing orthogonal to the LOS direction exists for a single antenna.
      col = los_dir;
    } else if (f <= 0.0) {
      col = nlos.normalized();
    } else {
      col = std::sqrt(f) * los_dir + std::sqrt(1.0 - f) * nlos.normalized();
    }
    out.col(c) = col / col.norm();
  }
  return out;
}

std::vector<CMatrix> build_ap_ris_channels(const SimConfig& cfg) {
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(cfg.num_aps));
  for (int l = 0; l < cfg.num_aps; ++l) {
    Rng rng = make_stream(cfg.seed, {stream::kBoxChannel, static_cast<std::uint64_t>(l)});
    out.push_back(build_ap_ris_channel(cfg, rng));
  }
  return out;
}

std::vector<CMatrix> build_correlations(const NetworkRealization& real,
                                        const ElementLayout& elements, const SimConfig& cfg) {
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(real.num_ues() * real.num_aps()));
  for (int k = 0; k < real.num_ues(); ++k) {
    for (int l = 0; l < real.num_aps(); ++l) {
      out.push_back(build_spatial_correlation(real.ue_positions[k], real.ap_positions[l],
                                              real.beta(k, l), elements, cfg));
    }
  }
  return out;
}

ChannelStats build_channel_stats(const NetworkRealization& real, const SimConfig& cfg) {
  ChannelStats stats;
  stats.num_ues = real.num_ues();
  stats.num_aps = real.num_aps();
  stats.correlation = build_correlations(real, ris_layout(cfg), cfg);
  stats.ap_ris = build_ap_ris_channels(cfg);
  return stats;
}

}  // namespace cfris
