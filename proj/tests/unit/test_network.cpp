// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cfris/errors.hpp"
#include "cfris/network.hpp"
#include "cfris_oracle/reference.hpp"

using namespace cfris;

namespace {

SimConfig no_shadowing() {
  SimConfig cfg;
  cfg.shadowing_std_db = 0.0;
  return cfg;
}

double azimuth(const Position& ue, const Position& ap) { return std::atan2(ue.y - ap.y, ue.x - ap.x); }

double elevation(const Position& ue, const Position& ap, const SimConfig& cfg) {
  return -std::atan2(cfg.ap_height_m, std::hypot(ue.x - ap.x, ue.y - ap.y));
}

}  // namespace

TEST_CASE("path loss at 100 m 3D distance") {
  SimConfig cfg = no_shadowing();
  cfg.ap_height_m = 0.0;
  Rng rng(1);
  const NetworkRealization real = compute_large_scale({{500, 500}}, {{600, 500}}, cfg, rng);
  const double expected = std::pow(10.0, (-30.5 - 36.7 * 2.0) / 10.0);
  CHECK(real.beta(0, 0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("3D distance includes the AP height and the 2D clamp") {
  const SimConfig cfg;
  CHECK(distance_3d({0, 0}, {30, 40}, cfg) == doctest::Approx(std::hypot(50.0, 10.0)));
  CHECK(distance_3d({0, 0}, {0, 0}, cfg) == doctest::Approx(std::hypot(1.0, 10.0)));
}

TEST_CASE("zero area: all distances clamp and all gains are equal") {
  SimConfig cfg = no_shadowing();
  cfg.area_side_m = 0.0;
  cfg.num_aps = 5;
  cfg.num_ues = 4;
  Rng rng(2);
  const NetworkRealization real = generate_realization(cfg, rng);
  const double first = real.beta(0, 0);
  for (Index k = 0; k < real.beta.rows(); ++k) {
    for (Index l = 0; l < real.beta.cols(); ++l) CHECK(real.beta(k, l) == first);
  }
}

TEST_CASE("shadowing: mean of log10(beta) matches the intercept") {
  const SimConfig cfg;
  Rng rng = make_stream(3, {1});
  const double d3 = distance_3d({0, 0}, {100, 0}, cfg);
  double sum = 0.0;
  const int n = 10000;
  for (int t = 0; t < n; ++t) {
    const NetworkRealization real = compute_large_scale({{0, 0}}, {{100, 0}}, cfg, rng);
    sum += std::log10(real.beta(0, 0));
  }
  CHECK(std::abs(sum / n - path_loss_db(d3) / 10.0) <= 0.05);
}

TEST_CASE("shadowing is correlated across nearby UEs") {
  const SimConfig cfg;
  Rng rng = make_stream(3, {2});
  double cross = 0.0;
  const int n = 20000;
  for (int t = 0; t < n; ++t) {
    const NetworkRealization real =
        compute_large_scale({{0, 0}}, {{100, 0}, {109, 0}}, cfg, rng);
    cross += real.shadowing_db(0, 0) * real.shadowing_db(1, 0);
  }
  // 16 * 2^(-9/9) = 8
  CHECK(cross / n == doctest::Approx(8.0).epsilon(0.06));
}

TEST_CASE("generate_realization is deterministic") {
  const SimConfig cfg;
  Rng a = make_stream(9, {1});
  Rng b = make_stream(9, {1});
  const NetworkRealization x = generate_realization(cfg, a);
  const NetworkRealization y = generate_realization(cfg, b);
  CHECK(x.beta == y.beta);
  for (int l = 0; l < x.num_aps(); ++l) {
    CHECK(x.ap_positions[l].x == y.ap_positions[l].x);
    CHECK(x.ap_positions[l].y == y.ap_positions[l].y);
  }
  for (Index k = 0; k < x.beta.rows(); ++k) {
    for (Index l = 0; l < x.beta.cols(); ++l) CHECK(x.beta(k, l) > 0.0);
  }
}

TEST_CASE("spatial correlation: uncorrelated model") {
  SimConfig cfg;
  cfg.correlation_model = CorrelationModel::uncorrelated;
  const CMatrix r = build_spatial_correlation({100, 50}, {0, 0}, 2.5, ris_layout(cfg), cfg);
  CHECK((r - 2.5 * CMatrix::Identity(36, 36)).norm() == 0.0);
}

TEST_CASE("spatial correlation: zero spread is rank one along the steering vector") {
  SimConfig cfg;
  cfg.angular_std_deg = 0.0;
  const Position ue{120, -40};
  const Position ap{10, 20};
  const ElementLayout elems = ris_layout(cfg);
  const CMatrix r = build_spatial_correlation(ue, ap, 3.0, elems, cfg);
  const CVector a = steering_vector(elems, azimuth(ue, ap), elevation(ue, ap, cfg), cfg.wavelength_m());
  CHECK((r - 3.0 * a * a.adjoint()).norm() <= 1e-12 * r.norm());
  const HermitianEig eig = hermitian_eig(r);
  CHECK(eig.eigenvalues(1) <= 1e-10 * eig.eigenvalues(0));
}

TEST_CASE("spatial correlation: local scattering against direct integration") {
  const SimConfig cfg;
  const ElementLayout elems = ris_layout(cfg);
  const double sigma = cfg.angular_std_deg * std::numbers::pi / 180.0;
  for (const Position ue : {Position{150, 80}, Position{-30, 5}, Position{2, 300}}) {
    const Position ap{0, 0};
    const double beta = 1e-9;
    const CMatrix r = build_spatial_correlation(ue, ap, beta, elems, cfg);
    const CMatrix ref = cfris_oracle::local_scattering_direct(
        elems, azimuth(ue, ap), elevation(ue, ap, cfg), sigma, cfg.wavelength_m());
    CHECK((r / beta - ref).norm() <= 1e-6 * ref.norm());
    for (Index i = 0; i < r.rows(); ++i) {
      CHECK(std::abs(r(i, i) - beta) <= 1e-10 * beta);
      for (Index j = 0; j < r.cols(); ++j) CHECK(std::abs(r(i, j)) <= beta * (1.0 + 1e-12));
    }
    CHECK(std::abs(r.trace().real() - 36.0 * beta) <= 1e-12 * 36.0 * beta);
    CHECK(is_psd(r));
  }
}

TEST_CASE("spatial correlation: sampled channels reproduce R") {
  const SimConfig cfg;
  const CMatrix r = build_spatial_correlation({80, 60}, {0, 0}, 1.0, ris_layout(cfg), cfg);
  const CMatrix f = psd_factor(r);
  Rng rng = make_stream(4, {1});
  CMatrix acc = CMatrix::Zero(36, 36);
  const int n = 100000;
  CVector w(36);
  for (int t = 0; t < n; ++t) {
    fill_standard_complex_gaussian(w, rng);
    const CVector h = f * w;
    acc.noalias() += h * h.adjoint();
  }
  CHECK((acc / n - r).norm() <= 0.02 * r.norm());
}

TEST_CASE("LOS entries by hand") {
  const double lambda = 0.15;
  const ElementLayout ant{Eigen::Vector3d(-lambda, 0, 0)};
  const ElementLayout ris{Eigen::Vector3d(0, 0, 0)};
  const Complex one = los_matrix(ant, ris, lambda)(0, 0);
  CHECK(one.real() == doctest::Approx(1.0 / (4.0 * std::numbers::pi)).epsilon(1e-12));
  CHECK(std::abs(one.imag()) < 1e-14);
  const ElementLayout half{Eigen::Vector3d(-lambda / 2, 0, 0)};
  const Complex h = los_matrix(half, ris, lambda)(0, 0);
  CHECK(h.real() == doctest::Approx(-1.0 / (2.0 * std::numbers::pi)).epsilon(1e-12));
  CHECK(std::abs(h.imag()) < 1e-14);
}

TEST_CASE("box channel: single element at one wavelength normalizes to unit magnitude") {
  SimConfig cfg;
  cfg.antennas_per_ap = 1;
  cfg.ris_rows = 1;
  cfg.ris_cols = 1;
  cfg.box_depth_wavelengths = 1.0;
  cfg.rician_los_fraction = 1.0;
  Rng rng(5);
  const CMatrix h = build_ap_ris_channel(cfg, rng);
  CHECK(std::abs(h(0, 0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(h(0, 0) - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("box channel: unit columns and exact LOS fraction") {
  const SimConfig cfg;
  const std::vector<CMatrix> boxes = build_ap_ris_channels(cfg);
  CHECK(static_cast<int>(boxes.size()) == cfg.num_aps);
  const CMatrix los = cfris_oracle::box_los_reference(cfg);
  for (int l = 0; l < 3; ++l) {
    const CMatrix& h = boxes[l];
    REQUIRE(h.rows() == 4);
    REQUIRE(h.cols() == 36);
    for (Index c = 0; c < h.cols(); ++c) {
      CHECK(std::abs(h.col(c).norm() - 1.0) <= 1e-12);
      const CVector dir = los.col(c) / los.col(c).norm();
      CHECK(std::abs(std::norm(dir.dot(h.col(c))) - cfg.rician_los_fraction) <= 1e-10);
    }
  }
  CHECK(boxes[0] != boxes[1]);
  CHECK(build_ap_ris_channels(cfg)[2] == boxes[2]);
}

TEST_CASE("box channel: non-positive depth is a config error") {
  SimConfig cfg;
  cfg.box_depth_wavelengths = 0.0;
  Rng rng(1);
  CHECK_THROWS_AS(build_ap_ris_channel(cfg, rng), ConfigError);
}

TEST_CASE("array layouts") {
  SimConfig cfg;
  const ElementLayout ris = ris_layout(cfg);
  CHECK(ris.size() == 36);
  CHECK((ris[1] - ris[0]).norm() == doctest::Approx(cfg.wavelength_m() / 2));
  const ElementLayout ula = antenna_layout(cfg, -0.6);
  CHECK(ula.size() == 4);
  for (const auto& p : ula) CHECK(p.x() == -0.6);
  cfg.array_geometry = ArrayGeometry::planar;
  cfg.antennas_per_ap = 36;
  const ElementLayout upa = antenna_layout(cfg, 0.0);
  CHECK(upa.size() == 36);
}
