// SPDX-License-Identifier: Apache-2.0
#include "cfris/linalg.hpp"

#include <cmath>
#include <string>

#include "cfris/errors.hpp"

namespace cfris {

namespace {

void require_square(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw DimensionError(std::string(what) + ": matrix is " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + ", expected square");
  }
}

}  // namespace

CMatrix hermitian_part(const CMatrix& a) {
  return (a + a.adjoint()) * 0.5;
}

HermitianEig hermitian_eig(const CMatrix& a) {
  require_square(a, "hermitian_eig");
  HermitianEig out;
  const Index n = a.rows();
  if (n == 0) return out;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) throw ModelError("hermitian_eig: solver did not converge");
  // Eigen returns ascending order.
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

CMatrix reconstruct(const HermitianEig& eig) {
  return eig.eigenvectors * eig.eigenvalues.cast<Complex>().asDiagonal() *
         eig.eigenvectors.adjoint();
}

PdSolver::PdSolver(const CMatrix& a) : n_(a.rows()) {
  require_square(a, "solve_pd");
  const Index n = a.rows();
  if (n == 0) return;
  const double scale = a.diagonal().real().sum() / static_cast<double>(n);
  ldlt_.compute(hermitian_part(a));
  const double pivot = ldlt_.vectorD().real().minCoeff();
  if (ldlt_.info() != Eigen::Success || !(scale > 0.0) || pivot < 1e-14 * scale) {
    throw SingularityError("solve_pd: matrix is numerically singular (pivot " +
                           std::to_string(pivot) + ", mean diagonal " + std::to_string(scale) +
                           ")");
  }
}

CMatrix PdSolver::solve(const CMatrix& b) const {
  const Index n = n_;
  if (b.rows() != n) {
    throw DimensionError("solve_pd: right-hand side has " + std::to_string(b.rows()) +
                         " rows, expected " + std::to_string(n));
  }
  if (n == 0) return CMatrix(0, b.cols());
  return ldlt_.solve(b);
}

CMatrix solve_pd(const CMatrix& a, const CMatrix& b) {
  require_square(a, "solve_pd");
  if (b.rows() != a.rows()) {
    throw DimensionError("solve_pd: right-hand side has " + std::to_string(b.rows()) +
                         " rows, expected " + std::to_string(a.rows()));
  }
  return PdSolver(a).solve(b);
}

CVector solve_pd(const CMatrix& a, const CVector& b) {
  return solve_pd(a, CMatrix(b)).col(0);
}

double min_eigenvalue_ratio(const CMatrix& a) {
  require_square(a, "min_eigenvalue_ratio");
  if (a.rows() == 0) return 0.0;
  const double tr = a.diagonal().real().sum();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(a), Eigen::EigenvaluesOnly);
  const double lo = solver.eigenvalues()(0);
  if (tr == 0.0) return lo == 0.0 ? 0.0 : -1.0;
  return lo / std::abs(tr);
}

bool is_psd(const CMatrix& a, double tol) {
  return min_eigenvalue_ratio(a) >= -tol;
}

CMatrix psd_sqrt(const CMatrix& cov) {
  require_square(cov, "psd_sqrt");
  const Index n = cov.rows();
  if (n == 0) return cov;
  const double tr = cov.diagonal().real().sum();
  if (tr == 0.0 && cov.cwiseAbs().maxCoeff() == 0.0) return CMatrix::Zero(n, n);
  HermitianEig eig = hermitian_eig(cov);
  if (eig.eigenvalues(n - 1) < -kPsdTolerance * std::abs(tr)) {
    throw ModelError("psd_sqrt: covariance is not positive semidefinite (min eigenvalue " +
                     std::to_string(eig.eigenvalues(n - 1)) + ", trace " + std::to_string(tr) +
                     ")");
  }
  RVector root = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  CMatrix out = eig.eigenvectors * root.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
  // Diagonal covariances get a diagonal root; this keeps zero-variance entries exactly zero.
  if (cov.isDiagonal(0.0)) {
    out.setZero();
    for (Index i = 0; i < n; ++i) out(i, i) = std::sqrt(std::max(cov(i, i).real(), 0.0));
  }
  return out;
}

CMatrix psd_factor(const CMatrix& cov) {
  require_square(cov, "psd_factor");
  const Index n = cov.rows();
  if (n == 0) return cov;
  const double tr = cov.diagonal().real().sum();
  if (tr == 0.0 && cov.cwiseAbs().maxCoeff() == 0.0) return CMatrix::Zero(n, n);
  const Eigen::LDLT<CMatrix> ldlt(hermitian_part(cov));
  const RVector d = ldlt.vectorD().real();
  if (d.minCoeff() < -kPsdTolerance * std::abs(tr)) {
    throw ModelError("psd_factor: covariance is not positive semidefinite (pivot " +
                     std::to_string(d.minCoeff()) + ", trace " + std::to_string(tr) + ")");
  }
  // cov = P^T L D L^H P
  CMatrix lower = ldlt.matrixL();
  lower = lower * d.cwiseMax(0.0).cwiseSqrt().cast<Complex>().asDiagonal();
  return ldlt.transpositionsP().transpose() * lower;
}

void fill_standard_complex_gaussian(Eigen::Ref<CVector> out, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  for (Index i = 0; i < out.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    out(i) = Complex(re, im);
  }
}

CVector standard_complex_gaussian(Index n, Rng& rng) {
  CVector w(n);
  fill_standard_complex_gaussian(w, rng);
  return w;
}

GaussianSampler::GaussianSampler(const CMatrix& cov) : factor_(psd_sqrt(cov)) {}

CVector GaussianSampler::draw(Rng& rng) const {
  return factor_ * standard_complex_gaussian(factor_.cols(), rng);
}

CVector sample_complex_gaussian(const CMatrix& cov, Rng& rng) {
  return GaussianSampler(cov).draw(rng);
}

}  // namespace cfris
