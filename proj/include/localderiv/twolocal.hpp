#pragma once

// Maps carrying (or deliberately violating) the 2-locality promise: for
// every pair of inputs some single element implements the map at both.
// Consumers of the promise may only call evaluate; the witness facet exists
// for tests and is not canonical.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "localderiv/algebra.hpp"
#include "localderiv/derivation.hpp"

namespace localderiv {

enum class Provenance {
  Honest,
  NoisyWitness,
  BrokenOffset,
  BrokenElementDependent,
  BrokenBlockmix,
};

std::string to_string(Provenance p);
bool is_broken(Provenance p);

struct TwoLocalMap {
  AlgebraShape shape;
  MapFn evaluate;
  /// For pair (x, y), an element a with evaluate(x) = [a,x] and
  /// evaluate(y) = [a,y]. Null when the generator offers none.
  std::function<BlockMatrix(const BlockMatrix&, const BlockMatrix&)> witness;
  Provenance provenance = Provenance::Honest;

  bool has_witness() const { return static_cast<bool>(witness); }
};

/// Orthonormal basis of the joint commutant {z : zu = uz, zv = vz}. Each
/// basis element is supported on a single block and point, so the dimension
/// is at least block count times |X| (the center).
struct CommutantBasis {
  BlockMatrix u;
  BlockMatrix v;
  std::vector<BlockMatrix> basis;

  std::size_t dimension() const { return basis.size(); }
};

CommutantBasis commutant_basis(const BlockMatrix& u, const BlockMatrix& v,
                               double rank_tol = 1e-10);

/// evaluate = [a, .], witness(x, y) = a.
TwoLocalMap make_honest(BlockMatrix a);

/// Same values as make_honest(a) (2-locality pins them), but the witness for
/// each pair is a plus a seeded combination of the pair's joint commutant,
/// with coefficients of unit scale. Witnesses depend only on (seed, x, y),
/// never on evaluation order.
TwoLocalMap make_noisy_witness(BlockMatrix a, std::uint64_t seed);

enum class BrokenKind { Offset, ElementDependent, Blockmix };

std::string to_string(BrokenKind k);

/// Maps that violate the promise.
///   offset:            adds a fixed unit-norm element to a commutator map.
///   element-dependent: switches the implementing element between inputs
///                      that look like single matrix units and everything
///                      else, so mixed pairs admit no common element.
///                      Requires a block of dimension >= 2.
///   blockmix:          leaks a coefficient of block 0 into block 1.
///                      Requires at least two blocks.
/// Throws std::invalid_argument when the shape cannot host the violation.
TwoLocalMap make_broken(BrokenKind kind, std::uint64_t seed,
                        const AlgebraShape& shape);

struct PairSolveResult {
  bool ok = false;
  BlockMatrix element;        // minimum-norm least-squares solution
  double relative_residual = 0.0;
  /// Absolute residual sqrt(|bu-ub-du|^2 + |bv-vb-dv|^2), summed over all
  /// blocks, points and entries.
  double residual = 0.0;
};

/// Least-squares inversion of the two implementing equations
///   b u - u b = du,  b v - v b = dv
/// over vectorized b, per block and per point. Returns the minimum-norm
/// minimizer; ok is false when the relative residual exceeds tol, which is
/// evidence that the source map is not 2-local.
PairSolveResult implementing_element_for_pair(const BlockMatrix& u,
                                              const BlockMatrix& v,
                                              const BlockMatrix& du,
                                              const BlockMatrix& dv,
                                              double tol);

}  // namespace localderiv
