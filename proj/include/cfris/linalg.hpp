// SPDX-License-Identifier: Apache-2.0
//
// Dense complex linear-algebra kernels shared by every stage of the
// simulator. All tolerances are relative to the trace or Frobenius norm of
// the operand since large-scale gains span many orders of magnitude.
#pragma once

#include <complex>

#include <Eigen/Dense>

#include "cfris/rng.hpp"

namespace cfris {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kPsdTolerance = 1e-10;

/// Eigenvalues sorted in descending order with matching orthonormal columns.
struct HermitianEig {
  RVector eigenvalues;
  CMatrix eigenvectors;
};

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized as
/// (A + A^H) / 2 before factorization. Throws DimensionError if not square.
HermitianEig hermitian_eig(const CMatrix& a);

/// U diag(lambda) U^H.
CMatrix reconstruct(const HermitianEig& eig);

/// Solves A x = b for Hermitian positive-definite A.
/// Throws SingularityError when an LDL^H pivot falls below
/// 1e-14 * trace(A) / dim.
CVector solve_pd(const CMatrix& a, const CVector& b);
CMatrix solve_pd(const CMatrix& a, const CMatrix& b);

/// Factors A once for repeated solve_pd calls. Same singularity rule.
class PdSolver {
 public:
  explicit PdSolver(const CMatrix& a);
  CMatrix solve(const CMatrix& b) const;

 private:
  Index n_ = 0;
  Eigen::LDLT<CMatrix> ldlt_;
};

/// Smallest eigenvalue divided by the trace (0 for the zero matrix).
double min_eigenvalue_ratio(const CMatrix& a);

/// True when the smallest eigenvalue is >= -tol * trace(A).
bool is_psd(const CMatrix& a, double tol = kPsdTolerance);

/// Hermitian square root with negative eigenvalues clamped to zero.
/// Throws ModelError if the matrix is not PSD within tolerance.
CMatrix psd_sqrt(const CMatrix& cov);

/// Some F with F F^H = cov, from a pivoted LDL^H factorization. Cheaper than
/// psd_sqrt; not Hermitian. Same PSD check on the pivots.
CMatrix psd_factor(const CMatrix& cov);

/// (A + A^H) / 2
CMatrix hermitian_part(const CMatrix& a);

/// Vector of i.i.d. CN(0, 1) entries.
CVector standard_complex_gaussian(Index n, Rng& rng);

/// Fills `out` with i.i.d. CN(0, 1) entries without allocating.
void fill_standard_complex_gaussian(Eigen::Ref<CVector> out, Rng& rng);

/// Draws cov^{1/2} w with w ~ CN(0, I).
CVector sample_complex_gaussian(const CMatrix& cov, Rng& rng);

/// Reusable sampler: the square root is factored once.
class GaussianSampler {
 public:
  explicit GaussianSampler(const CMatrix& cov);
  CVector draw(Rng& rng) const;
  const CMatrix& factor() const { return factor_; }

 private:
  CMatrix factor_;
};

}  // namespace cfris
