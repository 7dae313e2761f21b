#include "localderiv/derivation.hpp"

#include <algorithm>

namespace localderiv {

MapFn inner_derivation(BlockMatrix a) {
  return [a = std::move(a)](const BlockMatrix& x) { return commutator(a, x); };
}

nlohmann::json report_to_json(const ProbeReport& r) {
  nlohmann::json j;
  j["check"] = r.check;
  j["max_residual"] = r.max_residual;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["witness"] = r.worst_witness;
  return j;
}

namespace {

ProbeReport finish(std::string check, double residual, double tol,
                   std::string witness) {
  ProbeReport r;
  r.check = std::move(check);
  r.max_residual = residual;
  r.tolerance = tol;
  r.pass = residual <= tol;
  r.worst_witness = std::move(witness);
  return r;
}

}  // namespace

ProbeReport check_additive(
    const MapFn& map,
    const std::vector<std::pair<BlockMatrix, BlockMatrix>>& probes,
    double tol) {
  if (probes.empty()) throw ShapeError("check_additive: no probes");
  double worst = 0.0;
  std::size_t worst_idx = 0;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const auto& [x, y] = probes[k];
    const double r = norm(map(x + y) - map(x) - map(y));
    if (r > worst) {
      worst = r;
      worst_idx = k;
    }
  }
  return finish("additive", worst, tol, "pair " + std::to_string(worst_idx));
}

ProbeReport check_homogeneous(const MapFn& map,
                              const std::vector<BlockMatrix>& probes,
                              const std::vector<Complex>& scalars,
                              double tol) {
  if (probes.empty() || scalars.empty())
    throw ShapeError("check_homogeneous: no probes");
  double worst = 0.0;
  std::string witness;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const BlockMatrix value = map(probes[k]);
    for (const Complex& s : scalars) {
      const double r = norm(map(s * probes[k]) - s * value);
      if (r > worst) {
        worst = r;
        witness = "probe " + std::to_string(k) + ", lambda (" +
                  std::to_string(s.real()) + "," + std::to_string(s.imag()) +
                  ")";
      }
    }
  }
  return finish("homogeneous", worst, tol, std::move(witness));
}

ProbeReport check_jordan(const MapFn& map,
                         const std::vector<BlockMatrix>& probes, double tol) {
  if (probes.empty()) throw ShapeError("check_jordan: no probes");
  double worst = 0.0;
  std::size_t worst_idx = 0;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const BlockMatrix& x = probes[k];
    const BlockMatrix dx = map(x);
    const double r = norm(map(x * x) - dx * x - x * dx);
    if (r > worst) {
      worst = r;
      worst_idx = k;
    }
  }
  return finish("jordan", worst, tol, "probe " + std::to_string(worst_idx));
}

ProbeReport check_leibniz(
    const MapFn& map,
    const std::vector<std::pair<BlockMatrix, BlockMatrix>>& probes,
    double tol) {
  if (probes.empty()) throw ShapeError("check_leibniz: no probes");
  double worst = 0.0;
  std::size_t worst_idx = 0;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const auto& [x, y] = probes[k];
    const double r = norm(map(x * y) - map(x) * y - x * map(y));
    if (r > worst) {
      worst = r;
      worst_idx = k;
    }
  }
  return finish("leibniz", worst, tol, "pair " + std::to_string(worst_idx));
}

std::vector<BlockMatrix> make_probes(const AlgebraShape& shape,
                                     std::size_t count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<BlockMatrix> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
    out.push_back(random_element(shape, rng));
  return out;
}

std::vector<std::pair<BlockMatrix, BlockMatrix>> make_probe_pairs(
    const AlgebraShape& shape, std::size_t count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::pair<BlockMatrix, BlockMatrix>> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    BlockMatrix x = random_element(shape, rng);
    BlockMatrix y = random_element(shape, rng);
    out.emplace_back(std::move(x), std::move(y));
  }
  return out;
}

std::vector<Complex> make_scalars(std::size_t extra, std::uint64_t seed) {
  std::vector<Complex> out = {
      {0.0, 0.0}, {1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {2.0, 3.0}};
  SplitMix64 rng(seed);
  for (std::size_t k = 0; k < extra; ++k) out.push_back(rng.next_complex());
  return out;
}

double scaled_tolerance(double base, const std::vector<BlockMatrix>& probes) {
  double m = 0.0;
  for (const auto& p : probes) m = std::max(m, norm(p));
  return base * (1.0 + m) * (1.0 + m);
}

double scaled_tolerance(
    double base,
    const std::vector<std::pair<BlockMatrix, BlockMatrix>>& probes) {
  double m = 0.0;
  for (const auto& [x, y] : probes) m = std::max({m, norm(x), norm(y)});
  return base * (1.0 + m) * (1.0 + m);
}

}  // namespace localderiv
