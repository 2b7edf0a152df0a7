// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "cfris/errors.hpp"
#include "cfris/linalg.hpp"
#include "cfris_oracle/reference.hpp"

using namespace cfris;

namespace {

CMatrix diag3(double a, double b, double c) {
  CMatrix m = CMatrix::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

}  // namespace

TEST_CASE("hermitian_eig: identity and diagonal inputs") {
  const HermitianEig id = hermitian_eig(CMatrix::Identity(4, 4));
  for (Index i = 0; i < 4; ++i) CHECK(id.eigenvalues(i) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((id.eigenvectors.adjoint() * id.eigenvectors - CMatrix::Identity(4, 4)).norm() < 1e-12);

  const HermitianEig d = hermitian_eig(diag3(3, 1, 2));
  CHECK(d.eigenvalues(0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(d.eigenvalues(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(d.eigenvalues(2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((reconstruct(d) - diag3(3, 1, 2)).norm() < 1e-12);
}

TEST_CASE("hermitian_eig: random 8x8 against characteristic-polynomial roots") {
  Rng rng = make_stream(11, {1});
  for (int t = 0; t < 5; ++t) {
    const CMatrix a = cfris_oracle::random_hermitian(8, rng);
    const HermitianEig eig = hermitian_eig(a);
    const std::vector<double> ref = cfris_oracle::charpoly_eigenvalues(a);
    const double scale = a.norm();
    for (Index i = 0; i < 8; ++i) CHECK(std::abs(eig.eigenvalues(i) - ref[i]) <= 1e-8 * scale);
    for (Index i = 1; i < 8; ++i) CHECK(eig.eigenvalues(i - 1) >= eig.eigenvalues(i));
    CHECK((reconstruct(eig) - a).norm() <= 1e-10 * scale);
  }
}

TEST_CASE("hermitian_eig: non-square input throws") {
  CHECK_THROWS_AS(hermitian_eig(CMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("solve_pd: scaled identities") {
  CVector b(3);
  b << Complex(1, 2), Complex(-3, 0), Complex(0, 0.5);
  CHECK((solve_pd(CMatrix::Identity(3, 3), b) - b).norm() < 1e-15);
  CHECK((solve_pd(CMatrix(2.0 * CMatrix::Identity(3, 3)), b) - 0.5 * b).norm() < 1e-15);
}

TEST_CASE("solve_pd: random 6x6 against the adjugate inverse") {
  Rng rng = make_stream(11, {2});
  for (int t = 0; t < 5; ++t) {
    const CMatrix a =
        cfris_oracle::random_psd(6, 6, rng) + 0.1 * CMatrix::Identity(6, 6);
    const CVector b = standard_complex_gaussian(6, rng);
    const CVector ref = cfris_oracle::adjugate_inverse(a) * b;
    CHECK((solve_pd(a, b) - ref).norm() <= 1e-8 * ref.norm());
  }
}

TEST_CASE("solve_pd: singular and mismatched inputs throw") {
  CMatrix s = CMatrix::Zero(2, 2);
  s(0, 0) = 1.0;
  const CVector two = CVector::Ones(2);
  const CVector three = CVector::Ones(3);
  CHECK_THROWS_AS(solve_pd(s, two), SingularityError);
  CHECK_THROWS_AS(solve_pd(CMatrix(CMatrix::Identity(2, 2)), three), DimensionError);
  CHECK_THROWS_AS(solve_pd(CMatrix(CMatrix::Identity(2, 3)), two), DimensionError);
}

TEST_CASE("PdSolver reuses one factorization") {
  Rng rng = make_stream(11, {3});
  const CMatrix a = cfris_oracle::random_psd(5, 5, rng) + CMatrix::Identity(5, 5);
  const PdSolver solver(a);
  CMatrix b(5, 3);
  for (Index c = 0; c < 3; ++c) b.col(c) = standard_complex_gaussian(5, rng);
  CHECK((a * solver.solve(b) - b).norm() < 1e-10 * b.norm());
}

TEST_CASE("psd_sqrt and psd_factor reproduce the covariance") {
  Rng rng = make_stream(11, {4});
  for (int rank : {1, 3, 6}) {
    const CMatrix c = cfris_oracle::random_psd(6, rank, rng);
    const CMatrix s = psd_sqrt(c);
    CHECK((s - s.adjoint()).norm() < 1e-12 * c.norm());
    CHECK((s * s - c).norm() < 1e-9 * c.norm());
    const CMatrix f = psd_factor(c);
    CHECK((f * f.adjoint() - c).norm() < 1e-9 * c.norm());
  }
  CHECK(psd_sqrt(CMatrix::Zero(3, 3)).norm() == 0.0);
  CHECK(psd_factor(CMatrix::Zero(3, 3)).norm() == 0.0);
}

TEST_CASE("psd checks reject indefinite matrices") {
  const CMatrix bad = diag3(1, -1, 1);
  CHECK_FALSE(is_psd(bad));
  CHECK(is_psd(diag3(1, 0, 2)));
  CHECK_THROWS_AS(psd_sqrt(bad), ModelError);
  CHECK_THROWS_AS(psd_factor(bad), ModelError);
  Rng rng(1);
  CHECK_THROWS_AS(sample_complex_gaussian(bad, rng), ModelError);
}

TEST_CASE("sample_complex_gaussian: zero covariance gives zero") {
  Rng rng(3);
  CHECK(sample_complex_gaussian(CMatrix::Zero(3, 3), rng).norm() == 0.0);
}

TEST_CASE("sample_complex_gaussian: empirical covariance of I_2") {
  Rng rng = make_stream(11, {5});
  const GaussianSampler sampler(CMatrix::Identity(2, 2));
  CMatrix acc = CMatrix::Zero(2, 2);
  const int n = 100000;
  for (int t = 0; t < n; ++t) {
    const CVector x = sampler.draw(rng);
    acc += x * x.adjoint();
  }
  acc /= n;
  CHECK((acc - CMatrix::Identity(2, 2)).norm() / std::sqrt(2.0) <= 0.02);
}

TEST_CASE("sample_complex_gaussian: zero-variance entries stay exactly zero") {
  Rng rng = make_stream(11, {6});
  CMatrix c = CMatrix::Zero(2, 2);
  c(0, 0) = 4.0;
  for (int t = 0; t < 100; ++t) {
    const CVector x = sample_complex_gaussian(c, rng);
    CHECK(x(1) == Complex(0.0, 0.0));
  }
}

TEST_CASE("make_stream depends only on its arguments") {
  Rng a = make_stream(5, {1, 2});
  Rng b = make_stream(5, {1, 2});
  Rng c = make_stream(5, {2, 1});
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
}
