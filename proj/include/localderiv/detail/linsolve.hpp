#pragma once

// Least-squares and nullspace machinery shared by the twolocal and oracle
// modules. Everything here decomposes per block and per point of X, where
// the unknown is one n x n complex matrix (n^2 scalars).
//
// Two routes compute the minimum-norm least-squares solution of
//   min_b  sum_k || b p_k - p_k b - r_k ||_F^2
//
//  * cgls: matrix-free conjugate gradient on the normal equations, started
//    at zero so the iterates stay orthogonal to the nullspace and converge
//    to the minimum-norm minimizer. Used on the per-pair hot path.
//  * dense: explicit Gram operator assembled from the Kronecker identity
//    K_p^H K_p = (conj(p) p^T) (x) I + I (x) (p^H p)
//                - conj(p) (x) p - p^T (x) p^H,
//    followed by a Hermitian eigendecomposition. Used where the nullspace
//    dimension is reported, and as the fallback when cgls stalls.
//
// Rank accounting on the dense route applies the caller's tolerance to the
// Gram spectrum (eigenvalues at or below rank_tol * lambda_max count as
// null). The spectra arising here are sharply gapped, so this agrees with
// singular-value counting while staying above double-precision noise.

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "localderiv/algebra.hpp"

namespace localderiv::detail {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Copy of the (block, point) fiber of m as a column-major Eigen matrix.
CMatrix fiber(const BlockMatrix& m, std::size_t block, std::size_t point);

/// Write an Eigen matrix back into the (block, point) fiber of m.
void set_fiber(BlockMatrix& m, std::size_t block, std::size_t point,
               const CMatrix& f);

struct CglsResult {
  CMatrix solution;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Minimum-norm least squares for the stacked commutator constraints
/// [b, ops[k]] = rhs[k] on one fiber. Stops when the normal-equation
/// residual falls below rel_tol times its initial value.
CglsResult cgls_commutators(const std::vector<CMatrix>& ops,
                            const std::vector<CMatrix>& rhs,
                            double rel_tol = 1e-13);

struct DenseSolveResult {
  CMatrix solution;
  std::size_t null_dim = 0;
};

/// Dense route for the same problem; also reports the nullspace dimension
/// of the stacked constraint operator at the given rank tolerance.
DenseSolveResult dense_min_norm_commutators(const std::vector<CMatrix>& ops,
                                            const std::vector<CMatrix>& rhs,
                                            double rank_tol);

/// Orthonormal basis (as fiber matrices) of {z : [z, ops[k]] = 0 for all k}
/// on one fiber, via SVD of the stacked operator. Singular values at or
/// below rank_tol times the largest count as zero.
std::vector<CMatrix> commutant_nullspace_fiber(const std::vector<CMatrix>& ops,
                                               double rank_tol);

}  // namespace localderiv::detail
