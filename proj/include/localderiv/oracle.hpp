#pragma once

// Independent brute-force recovery of an implementing element by global
// least squares over an arbitrary probe set. Exists to cross-check the
// Peirce-coefficient pipeline, not to scale: the solve is O(n^6) per point
// per block and is meant for n <= 16.

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "localderiv/algebra.hpp"

namespace localderiv {

struct GlobalSolveResult {
  BlockMatrix element;             // minimum-norm least-squares solution
  double relative_residual = 0.0;
  /// Dimension of the ambiguity space of the stacked constraint operator;
  /// equals the center dimension (blocks x |X|) on a separating probe set
  /// such as all matrix units. Computed from the Gram spectrum: eigenvalues
  /// at or below rank_tol * lambda_max count as null.
  std::size_t rank_deficiency = 0;
  /// False when the relative residual exceeds tol: no global implementing
  /// element exists, evidence against 2-locality.
  bool ok = false;
};

GlobalSolveResult solve_global(const std::vector<BlockMatrix>& probes,
                               const std::vector<BlockMatrix>& values,
                               const AlgebraShape& shape, double tol,
                               double rank_tol = 1e-10);

nlohmann::json global_solve_to_json(const GlobalSolveResult& r);

struct CenterComparison {
  bool pass = false;
  double distance = 0.0;  // norm of (a-b) minus its central part
};

/// Equality modulo the center: passes when removing the central part of
/// a - b leaves norm at most tol * (1 + norm(a) + norm(b)).
CenterComparison equal_mod_center(const BlockMatrix& a, const BlockMatrix& b,
                                  double tol);

}  // namespace localderiv
