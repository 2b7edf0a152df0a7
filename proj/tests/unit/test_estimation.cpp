// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "cfris/errors.hpp"
#include "cfris/estimation.hpp"
#include "cfris_oracle/reference.hpp"

using namespace cfris;

namespace {

CMatrix scalar(double v) { return CMatrix::Constant(1, 1, Complex(v, 0.0)); }

struct Instance {
  CMatrix front;
  CMatrix r_k;
  CMatrix r_i;
};

// M=2 behind N=4.
Instance random_instance(Rng& rng) {
  Instance out;
  CMatrix h(2, 4);
  for (Index c = 0; c < 4; ++c) h.col(c) = standard_complex_gaussian(2, rng);
  out.front = front_end(h, cfris_oracle::random_phases(4, rng));
  out.r_k = cfris_oracle::random_psd(4, 4, rng) / 4.0;
  out.r_i = cfris_oracle::random_psd(4, 3, rng) / 4.0;
  return out;
}

}  // namespace

TEST_CASE("pilot statistic: zero pilot power leaves noise of variance sigma^2") {
  const PilotParams p{4, 0.0, 2.5};
  Rng rng = make_stream(31, {1});
  const CMatrix front = CMatrix::Identity(3, 3);
  const std::vector<CVector> chans{CVector::Ones(3)};
  double acc = 0.0;
  const int n = 10000;
  for (int t = 0; t < n; ++t) acc += received_pilot_statistic(chans, front, p, rng).squaredNorm();
  CHECK(acc / (3.0 * n) == doctest::Approx(2.5).epsilon(0.03));
}

TEST_CASE("pilot statistic: noiseless scalar chain") {
  const PilotParams p{3, 2.0, 0.0};
  Rng rng(1);
  const std::vector<CVector> chans{CVector::Constant(1, Complex(0.3, -0.7))};
  const CVector z = received_pilot_statistic(chans, CMatrix::Identity(1, 1), p, rng);
  CHECK(std::abs(z(0) - std::sqrt(6.0) * Complex(0.3, -0.7)) < 1e-15);
}

TEST_CASE("pilot statistic: two co-pilots match the full pilot-matrix construction") {
  Rng rng = make_stream(31, {2});
  const Instance inst = random_instance(rng);
  const PilotParams p{3, 0.7, 0.0};
  // UEs 0 and 2 share pilot 1; UE 1 is on pilot 0.
  const std::vector<int> pilot_of{1, 0, 1};
  std::vector<CVector> channels;
  for (int i = 0; i < 3; ++i) channels.push_back(standard_complex_gaussian(4, rng));
  const std::vector<CVector> copilots{channels[0], channels[2]};
  const CVector z = received_pilot_statistic(copilots, inst.front, p, rng);
  const CVector ref = cfris_oracle::pilot_statistic_via_matrix(channels, pilot_of, 0, inst.front,
                                                               p, CMatrix::Zero(2, 3));
  CHECK((z - ref).norm() <= 1e-12 * ref.norm());
}

TEST_CASE("scalar estimate and error") {
  const PilotParams p{1, 1.0, 1.0};
  const CMatrix g = pilot_gram(std::vector<CMatrix>{scalar(1.0)}, p);
  CHECK(g(0, 0).real() == doctest::Approx(2.0));
  const CVector z = CVector::Constant(1, Complex(0.8, 0.4));
  const CVector hat = mmse_estimate(z, g, scalar(1.0), scalar(1.0), p);
  CHECK(std::abs(hat(0) - z(0) / 2.0) < 1e-15);
  CHECK(error_covariance(g, scalar(1.0), scalar(1.0), p)(0, 0).real() == doctest::Approx(0.5));
}

TEST_CASE("noiseless limit drives the error to zero") {
  for (double noise : {1e-3, 1e-6, 1e-9}) {
    const PilotParams p{1, 1.0, noise};
    const CMatrix g = pilot_gram(std::vector<CMatrix>{scalar(1.0)}, p);
    const double c = error_covariance(g, scalar(1.0), scalar(1.0), p)(0, 0).real();
    CHECK(c <= 1.01 * noise);
    CHECK(c >= 0.0);
  }
}

TEST_CASE("zero correlation and zero pilot power") {
  Rng rng = make_stream(31, {3});
  const Instance inst = random_instance(rng);
  {
    const PilotParams p{2, 1.0, 1.0};
    const CMatrix zero = CMatrix::Zero(4, 4);
    const CMatrix g = pilot_gram(std::vector<CMatrix>{effective_covariance(inst.front, zero)}, p);
    CHECK(error_covariance(g, zero, inst.front, p).norm() == 0.0);
  }
  {
    const PilotParams p{2, 0.0, 1.0};
    const CMatrix q = effective_covariance(inst.front, inst.r_k);
    const CMatrix g = pilot_gram(std::vector<CMatrix>{q}, p);
    CHECK((error_covariance(g, inst.r_k, inst.front, p) - inst.r_k).norm() <= 1e-15 * inst.r_k.norm());
  }
}

TEST_CASE("error covariance invariants and the effective-domain form") {
  Rng rng = make_stream(31, {4});
  for (int t = 0; t < 20; ++t) {
    const Instance inst = random_instance(rng);
    const PilotParams p{5, 0.1 * (t + 1), 0.5};
    const CMatrix q_k = effective_covariance(inst.front, inst.r_k);
    const CMatrix q_i = effective_covariance(inst.front, inst.r_i);
    const CMatrix g = pilot_gram(std::vector<CMatrix>{q_k, q_i}, p);
    const CMatrix c = error_covariance(g, inst.r_k, inst.front, p);
    CHECK(is_psd(c));
    CHECK(is_psd(inst.r_k - c, 1e-9));
    CHECK(c.trace().real() <= inst.r_k.trace().real());
    const CMatrix ceff = effective_error_covariance(q_k, g, p);
    const CMatrix direct = inst.front * c * inst.front.adjoint();
    CHECK((ceff - direct).norm() <= 1e-10 * q_k.norm());
  }
}

TEST_CASE("pilot_gram rejects an empty co-pilot set") {
  CHECK_THROWS_AS(pilot_gram(std::vector<CMatrix>{}, PilotParams{}), DimensionError);
}

TEST_CASE("estimator bank: error covariances and co-pilot estimates") {
  Rng rng = make_stream(31, {5});
  const Instance a = random_instance(rng);
  const Instance b = random_instance(rng);
  // Two APs, three UEs; UEs 0 and 2 share pilot 0.
  const Association assoc = make_association({0, 1, 0}, {{1, 0}, {1, 1}, {0, 1}});
  const std::vector<CMatrix> fronts{a.front, b.front};
  std::vector<CMatrix> corr;
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 2; ++l) corr.push_back(cfris_oracle::random_psd(4, 4, rng) / 4.0);
  }
  const PilotParams p{2, 0.8, 0.3};
  const EstimatorBank bank(fronts, corr, assoc, p);
  const EffectiveStats stats(fronts, corr, assoc, p);
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 2; ++l) {
      const CMatrix& r = corr[static_cast<std::size_t>(k * 2 + l)];
      const CMatrix c = error_covariance(stats.gram(k, l), r, fronts[l], p);
      const CMatrix expect = fronts[l] * c * fronts[l].adjoint();
      CHECK((bank.error_covariances().at(k, l) - expect).norm() <= 1e-10 * expect.norm());
    }
  }
  // Co-pilot estimates are fixed transforms of one statistic:
  // g_hat_0 = Q_0 Q_2^{-1} g_hat_2.
  const BlockEstimates est = bank.draw_block(rng);
  for (int l = 0; l < 2; ++l) {
    const CVector mapped = stats.q(0, l) * solve_pd(stats.q(2, l), est.at(2, l));
    CHECK((mapped - est.at(0, l)).norm() <= 1e-8 * est.at(0, l).norm());
  }
}

TEST_CASE("estimator bank: sampled estimates have covariance Q - Ceff") {
  Rng rng = make_stream(31, {6});
  const Instance a = random_instance(rng);
  const Association assoc = make_association({0, 0}, {{1}, {1}});
  const std::vector<CMatrix> fronts{a.front};
  const std::vector<CMatrix> corr{a.r_k, a.r_i};
  const PilotParams p{1, 1.0, 0.5};
  const EstimatorBank bank(fronts, corr, assoc, p);
  const EffectiveStats stats(fronts, corr, assoc, p);
  CMatrix acc = CMatrix::Zero(2, 2);
  const int n = 100000;
  for (int t = 0; t < n; ++t) {
    const BlockEstimates est = bank.draw_block(rng);
    acc += est.at(0, 0) * est.at(0, 0).adjoint();
  }
  const CMatrix expect = stats.q(0, 0) - bank.error_covariances().at(0, 0);
  CHECK((acc / n - expect).norm() <= 0.03 * expect.norm());
}

TEST_CASE("plain arrays skip the front end") {
  Rng rng = make_stream(31, {7});
  const CMatrix r = cfris_oracle::random_psd(3, 3, rng);
  const Association assoc = make_association({0}, {{1}});
  const std::vector<CMatrix> fronts{CMatrix::Identity(3, 3)};
  const std::vector<CMatrix> corr{r};
  const EffectiveStats stats(fronts, corr, assoc, PilotParams{});
  CHECK(stats.q(0, 0) == r);
}
