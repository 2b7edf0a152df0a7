// SPDX-License-Identifier: Apache-2.0
//
// Reference computations that share no code path with the library kernels
// they check. Slow by construction; used only by tests and the oracle
// subcommand.
#pragma once

#include <vector>

#include "cfris/association.hpp"
#include "cfris/config.hpp"
#include "cfris/estimation.hpp"
#include "cfris/linalg.hpp"
#include "cfris/rng.hpp"

namespace cfris_oracle {

using cfris::CMatrix;
using cfris::Complex;
using cfris::CVector;

/// Eigenvalues of a Hermitian matrix as roots of det(xI - A), isolated by
/// bisection on the inertia (negative LDL^H pivot count) of A - xI.
/// Descending order.
std::vector<double> charpoly_eigenvalues(const CMatrix& a);

/// Determinant by Gaussian elimination with partial pivoting.
Complex determinant(const CMatrix& a);

/// Inverse from the adjugate (cofactor) formula.
CMatrix adjugate_inverse(const CMatrix& a);

/// Local-scattering correlation by brute-force 2D trapezoid integration over
/// +-8 standard deviations in azimuth and elevation. Unit diagonal.
CMatrix local_scattering_direct(const std::vector<Eigen::Vector3d>& elements, double azimuth,
                                double elevation, double sigma_rad, double wavelength,
                                int points = 401);

/// LOS matrix of the access-point box recomputed from the geometry
/// description (RIS grid in front, ULA behind at box depth).
CMatrix box_los_reference(const cfris::SimConfig& cfg);

/// Pilot statistic of UE k formed literally: build the M x tau_p received
/// pilot matrix with DFT pilot sequences, then correlate with the pilot of
/// UE k and divide by sqrt(tau_p). `noise` is the M x tau_p noise matrix.
CVector pilot_statistic_via_matrix(const std::vector<CVector>& channels,
                                   const std::vector<int>& pilot_of, int k,
                                   const CMatrix& front, const cfris::PilotParams& p,
                                   const CMatrix& noise);

/// Largest value of eta |v^H g|^2 / (v^H B v) over v, from the principal
/// generalized eigenpair of (eta g g^H, B).
double generalized_rayleigh_max(const CVector& g, double eta, const CMatrix& b);

/// Maximum of psi^H A psi over a `levels`-point phase grid per entry, with
/// the first entry fixed (the objective ignores a common phase).
double phase_grid_maximum(const CMatrix& a, int levels);

/// Explicit L*M x L*M selector D_k.
CMatrix selector_matrix(const cfris::Association& assoc, int k, int antennas);

/// MMSE combiner of UE k evaluated in the full collective dimension with
/// explicit selector matrices, over the UE list `ues`.
CVector collective_combiner(int k, const std::vector<int>& ues,
                            const cfris::BlockEstimates& est,
                            const cfris::ErrorCovariances& err,
                            const cfris::Association& assoc,
                            const std::vector<double>& eta, double noise);

/// Random Hermitian matrix with entries of unit scale.
CMatrix random_hermitian(int n, cfris::Rng& rng);

/// Random PSD matrix X X^H with X n x rank.
CMatrix random_psd(int n, int rank, cfris::Rng& rng);

/// Random unit-modulus vector.
CVector random_phases(int n, cfris::Rng& rng);

}  // namespace cfris_oracle
