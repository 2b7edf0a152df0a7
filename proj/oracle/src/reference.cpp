// SPDX-License-Identifier: Apache-2.0
#include "cfris_oracle/reference.hpp"

#include <cmath>
#include <numbers>

namespace cfris_oracle {

using cfris::Index;
using LComplex = std::complex<long double>;

namespace {

constexpr double kPi = std::numbers::pi;

// Number of eigenvalues of A strictly below x: negative pivots of an
// unpivoted LDL^H factorization of A - xI (Sylvester's law of inertia).
int count_below(const CMatrix& a, double x) {
  const Index n = a.rows();
  std::vector<std::vector<LComplex>> m(n, std::vector<LComplex>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) m[i][j] = LComplex(a(i, j).real(), a(i, j).imag());
    m[i][i] -= x;
  }
  long double scale = 0;
  for (Index i = 0; i < n; ++i) scale += std::abs(m[i][i]) + 1;
  int negatives = 0;
  for (Index p = 0; p < n; ++p) {
    long double d = m[p][p].real();
    if (d == 0) d = -1e-30L * scale;
    if (d < 0) ++negatives;
    for (Index i = p + 1; i < n; ++i) {
      const LComplex factor = m[i][p] / d;
      for (Index j = p + 1; j < n; ++j) m[i][j] -= factor * std::conj(m[j][p]);
    }
  }
  return negatives;
}

}  // namespace

std::vector<double> charpoly_eigenvalues(const CMatrix& a) {
  const Index n = a.rows();
  const CMatrix h = (a + a.adjoint()) * 0.5;
  const double bound = h.norm() + 1.0;
  std::vector<double> out;
  // The j-th smallest root is where count_below jumps from j to j + 1.
  for (Index j = n - 1; j >= 0; --j) {
    double lo = -bound;
    double hi = bound;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * bound; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (count_below(h, mid) > j) hi = mid;
      else lo = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

Complex determinant(const CMatrix& a) {
  const Index n = a.rows();
  std::vector<std::vector<LComplex>> m(n, std::vector<LComplex>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) m[i][j] = LComplex(a(i, j).real(), a(i, j).imag());
  }
  LComplex det = 1;
  for (Index p = 0; p < n; ++p) {
    Index best = p;
    for (Index i = p + 1; i < n; ++i) {
      if (std::abs(m[i][p]) > std::abs(m[best][p])) best = i;
    }
    if (std::abs(m[best][p]) == 0) return Complex(0.0, 0.0);
    if (best != p) {
      std::swap(m[best], m[p]);
      det = -det;
    }
    det *= m[p][p];
    for (Index i = p + 1; i < n; ++i) {
      const LComplex f = m[i][p] / m[p][p];
      for (Index j = p; j < n; ++j) m[i][j] -= f * m[p][j];
    }
  }
  return Complex(static_cast<double>(det.real()), static_cast<double>(det.imag()));
}

CMatrix adjugate_inverse(const CMatrix& a) {
  const Index n = a.rows();
  const Complex det = determinant(a);
  CMatrix inv(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      CMatrix minor(n - 1, n - 1);
      for (Index r = 0, mr = 0; r < n; ++r) {
        if (r == i) continue;
        for (Index c = 0, mc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(mr, mc++) = a(r, c);
        }
        ++mr;
      }
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      inv(j, i) = sign * determinant(minor) / det;
    }
  }
  return inv;
}

CMatrix local_scattering_direct(const std::vector<Eigen::Vector3d>& elements, double azimuth,
                                double elevation, double sigma_rad, double wavelength,
                                int points) {
  const Index n = static_cast<Index>(elements.size());
  const double k = 2.0 * kPi / wavelength;
  const double span = 8.0 * sigma_rad;
  const double step = 2.0 * span / (points - 1);
  std::vector<double> offsets(points), weights(points);
  double total = 0.0;
  for (int i = 0; i < points; ++i) {
    offsets[i] = -span + i * step;
    const double end = (i == 0 || i == points - 1) ? 0.5 : 1.0;
    weights[i] = end * std::exp(-0.5 * offsets[i] * offsets[i] / (sigma_rad * sigma_rad));
    total += weights[i];
  }
  for (auto& w : weights) w /= total;

  CMatrix r = CMatrix::Zero(n, n);
  for (int a = 0; a < points; ++a) {
    const double az = azimuth + offsets[a];
    for (int e = 0; e < points; ++e) {
      const double el = elevation + offsets[e];
      const double w = weights[a] * weights[e];
      const Eigen::Vector3d u(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az),
                              std::sin(el));
      CVector steer(n);
      for (Index m = 0; m < n; ++m) steer(m) = std::polar(1.0, k * elements[m].dot(u));
      r.noalias() += w * steer * steer.adjoint();
    }
  }
  return r;
}

CMatrix box_los_reference(const cfris::SimConfig& cfg) {
  const double lambda = 299792458.0 / cfg.carrier_frequency_hz;
  const double spacing = cfg.element_spacing_wavelengths * lambda;
  const double depth = cfg.box_depth_wavelengths * lambda;
  const int m_count = cfg.antennas_per_ap;
  const int n_count = cfg.ris_rows * cfg.ris_cols;
  CMatrix los(m_count, n_count);
  for (int m = 0; m < m_count; ++m) {
    const double ay = spacing * (m - 0.5 * (m_count - 1));
    for (int n = 0; n < n_count; ++n) {
      const int row = n / cfg.ris_cols;
      const int col = n % cfg.ris_cols;
      const double ry = spacing * (col - 0.5 * (cfg.ris_cols - 1));
      const double rz = spacing * (row - 0.5 * (cfg.ris_rows - 1));
      const double d = std::sqrt(depth * depth + (ay - ry) * (ay - ry) + rz * rz);
      const double amplitude = lambda / (4.0 * kPi * d);
      const double phase = -2.0 * kPi * d / lambda;
      los(m, n) = Complex(amplitude * std::cos(phase), amplitude * std::sin(phase));
    }
  }
  return los;
}

CVector pilot_statistic_via_matrix(const std::vector<CVector>& channels,
                                   const std::vector<int>& pilot_of, int k,
                                   const CMatrix& front, const cfris::PilotParams& p,
                                   const CMatrix& noise) {
  const int tau = p.tau_p;
  auto pilot = [&](int t) {
    CVector phi(tau);
    for (int s = 0; s < tau; ++s) phi(s) = std::polar(1.0, -2.0 * kPi * t * s / tau);
    return phi;
  };
  CMatrix z = noise;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    z += std::sqrt(p.pilot_power) * (front * channels[i]) * pilot(pilot_of[i]).transpose();
  }
  return z * pilot(pilot_of[k]).conjugate() / std::sqrt(static_cast<double>(tau));
}

double generalized_rayleigh_max(const CVector& g, double eta, const CMatrix& b) {
  const CMatrix numerator = eta * g * g.adjoint();
  Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> solver(numerator, b);
  return solver.eigenvalues().maxCoeff();
}

double phase_grid_maximum(const CMatrix& a, int levels) {
  const Index n = a.rows();
  CVector psi = CVector::Ones(n);
  std::vector<int> digit(static_cast<std::size_t>(n), 0);
  double best = -1.0;
  while (true) {
    for (Index i = 1; i < n; ++i) psi(i) = std::polar(1.0, 2.0 * kPi * digit[i] / levels);
    best = std::max(best, psi.dot(a * psi).real());
    Index pos = 1;
    while (pos < n && ++digit[pos] == levels) digit[pos++] = 0;
    if (pos >= n) break;
  }
  return best;
}

CMatrix selector_matrix(const cfris::Association& assoc, int k, int antennas) {
  const Index dim = static_cast<Index>(assoc.num_aps) * antennas;
  CMatrix d = CMatrix::Zero(dim, dim);
  for (int l = 0; l < assoc.num_aps; ++l) {
    if (!assoc.serves(l, k)) continue;
    for (int m = 0; m < antennas; ++m) d(l * antennas + m, l * antennas + m) = 1.0;
  }
  return d;
}

CVector collective_combiner(int k, const std::vector<int>& ues,
                            const cfris::BlockEstimates& est,
                            const cfris::ErrorCovariances& err,
                            const cfris::Association& assoc,
                            const std::vector<double>& eta, double noise) {
  const int m = static_cast<int>(err.at(0, 0).rows());
  const int l_count = assoc.num_aps;
  const Index dim = static_cast<Index>(l_count) * m;
  auto collective = [&](int i) {
    CVector g(dim);
    for (int l = 0; l < l_count; ++l) g.segment(l * m, m) = est.at(i, l);
    return g;
  };
  auto collective_error = [&](int i) {
    CMatrix c = CMatrix::Zero(dim, dim);
    for (int l = 0; l < l_count; ++l) c.block(l * m, l * m, m, m) = err.at(i, l);
    return c;
  };
  const CMatrix d = selector_matrix(assoc, k, m);
  CMatrix a = noise * CMatrix::Identity(dim, dim);
  for (int i : ues) {
    const CVector g = collective(i);
    a += eta[i] * d * (g * g.adjoint() + collective_error(i)) * d;
  }
  return eta[k] * a.fullPivLu().solve(d * collective(k));
}

CMatrix random_hermitian(int n, cfris::Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix x(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) x(i, j) = Complex(normal(rng), normal(rng));
  }
  return (x + x.adjoint()) * 0.5;
}

CMatrix random_psd(int n, int rank, cfris::Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix x(n, rank);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < rank; ++j) x(i, j) = Complex(normal(rng), normal(rng));
  }
  return x * x.adjoint();
}

CVector random_phases(int n, cfris::Rng& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  CVector psi(n);
  for (Index i = 0; i < n; ++i) psi(i) = std::polar(1.0, angle(rng));
  return psi;
}

}  // namespace cfris_oracle
