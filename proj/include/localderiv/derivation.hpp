#pragma once

// Inner derivations x -> ax - xa and probe-based checkers for the algebraic
// identities of a derivation. The checkers sample, they do not prove: the
// identities are polynomial, so random probes detect violations with
// probability one.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "localderiv/algebra.hpp"
#include "localderiv/rng.hpp"

namespace localderiv {

/// A total map on the algebra. Shape-preserving by contract.
using MapFn = std::function<BlockMatrix(const BlockMatrix&)>;

/// x -> commutator(a, x). The element a is captured by value.
MapFn inner_derivation(BlockMatrix a);

struct ProbeReport {
  std::string check;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string worst_witness;  // probe attaining max_residual
};

nlohmann::json report_to_json(const ProbeReport& r);

/// max over pairs of norm(D(x+y) - D(x) - D(y)).
ProbeReport check_additive(
    const MapFn& map,
    const std::vector<std::pair<BlockMatrix, BlockMatrix>>& probes, double tol);

/// max over scalars x probes of norm(D(lambda x) - lambda D(x)).
ProbeReport check_homogeneous(const MapFn& map,
                              const std::vector<BlockMatrix>& probes,
                              const std::vector<Complex>& scalars, double tol);

/// max over probes of norm(D(x^2) - D(x)x - xD(x)).
ProbeReport check_jordan(const MapFn& map,
                         const std::vector<BlockMatrix>& probes, double tol);

/// max over pairs of norm(D(xy) - D(x)y - xD(y)).
ProbeReport check_leibniz(
    const MapFn& map,
    const std::vector<std::pair<BlockMatrix, BlockMatrix>>& probes, double tol);

// Default probe material. 100 probes and tol = 1e-9 * (1 + max norm)^2 are
// the conventional settings; callers override as needed.

std::vector<BlockMatrix> make_probes(const AlgebraShape& shape,
                                     std::size_t count, std::uint64_t seed);

std::vector<std::pair<BlockMatrix, BlockMatrix>> make_probe_pairs(
    const AlgebraShape& shape, std::size_t count, std::uint64_t seed);

/// Default homogeneity scalars: 0, 1, -1, i, 2+3i and a few seeded draws.
std::vector<Complex> make_scalars(std::size_t extra, std::uint64_t seed);

/// base * (1 + max probe norm)^2.
double scaled_tolerance(double base, const std::vector<BlockMatrix>& probes);
double scaled_tolerance(
    double base,
    const std::vector<std::pair<BlockMatrix, BlockMatrix>>& probes);

}  // namespace localderiv
