#include "localderiv/twolocal.hpp"

#include <cmath>
#include <stdexcept>

#include "localderiv/detail/linsolve.hpp"
#include "localderiv/rng.hpp"

namespace localderiv {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Honest: return "honest";
    case Provenance::NoisyWitness: return "noisy-witness";
    case Provenance::BrokenOffset: return "broken:offset";
    case Provenance::BrokenElementDependent: return "broken:element-dependent";
    case Provenance::BrokenBlockmix: return "broken:blockmix";
  }
  return "unknown";
}

bool is_broken(Provenance p) {
  return p != Provenance::Honest && p != Provenance::NoisyWitness;
}

std::string to_string(BrokenKind k) {
  switch (k) {
    case BrokenKind::Offset: return "offset";
    case BrokenKind::ElementDependent: return "element-dependent";
    case BrokenKind::Blockmix: return "blockmix";
  }
  return "unknown";
}

CommutantBasis commutant_basis(const BlockMatrix& u, const BlockMatrix& v,
                               double rank_tol) {
  if (!(u.shape() == v.shape()))
    throw ShapeError("commutant_basis: shape mismatch");
  const AlgebraShape& shape = u.shape();
  CommutantBasis out;
  out.u = u;
  out.v = v;
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    for (std::size_t p = 0; p < shape.points; ++p) {
      const std::vector<detail::CMatrix> ops = {detail::fiber(u, b, p),
                                                detail::fiber(v, b, p)};
      for (const auto& z : detail::commutant_nullspace_fiber(ops, rank_tol)) {
        BlockMatrix elem = zero(shape);
        detail::set_fiber(elem, b, p, z);
        out.basis.push_back(std::move(elem));
      }
    }
  }
  return out;
}

TwoLocalMap make_honest(BlockMatrix a) {
  TwoLocalMap map;
  map.shape = a.shape();
  map.evaluate = inner_derivation(a);
  map.witness = [a](const BlockMatrix&, const BlockMatrix&) { return a; };
  map.provenance = Provenance::Honest;
  return map;
}

TwoLocalMap make_noisy_witness(BlockMatrix a, std::uint64_t seed) {
  TwoLocalMap map;
  map.shape = a.shape();
  map.evaluate = inner_derivation(a);
  map.witness = [a, seed](const BlockMatrix& x, const BlockMatrix& y) {
    const std::uint64_t h = content_hash(y, content_hash(x, seed ^ 0x77697473ULL));
    SplitMix64 rng(h);
    const CommutantBasis cb = commutant_basis(x, y);
    BlockMatrix w = a;
    for (const auto& z : cb.basis) w = w + rng.next_complex() * z;
    return w;
  };
  map.provenance = Provenance::NoisyWitness;
  return map;
}

namespace {

// True when x is supported on a single entry position (a scalar multiple of
// one matrix unit), the inputs the reconstruction pipeline probes with.
bool unit_like(const BlockMatrix& x) {
  std::size_t support = 0;
  const AlgebraShape& shape = x.shape();
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const std::size_t n = shape.dim(b);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (x.block(b).entry(i, j).max_abs() > 1e-12 && ++support > 1)
          return false;
      }
  }
  return support == 1;
}

std::size_t first_matrix_block(const AlgebraShape& shape) {
  for (std::size_t b = 0; b < shape.block_count(); ++b)
    if (shape.dim(b) >= 2) return b;
  return shape.block_count();
}

}  // namespace

TwoLocalMap make_broken(BrokenKind kind, std::uint64_t seed,
                        const AlgebraShape& shape) {
  shape.validate();
  SplitMix64 rng(seed);
  TwoLocalMap map;
  map.shape = shape;

  switch (kind) {
    case BrokenKind::Offset: {
      const BlockMatrix a = random_element(shape, rng);
      BlockMatrix offset = random_element(shape, rng);
      const double n = norm(offset);
      offset = scale(Complex{1.0 / n, 0.0}, offset);
      map.evaluate = [a, offset](const BlockMatrix& x) {
        return commutator(a, x) + offset;
      };
      map.provenance = Provenance::BrokenOffset;
      break;
    }
    case BrokenKind::ElementDependent: {
      const std::size_t blk = first_matrix_block(shape);
      if (blk == shape.block_count())
        throw std::invalid_argument(
            "element-dependent brokenness needs a block of dimension >= 2");
      const BlockMatrix a1 = random_element(shape, rng);
      BlockMatrix d = random_element(shape, rng);
      d = d - center_project(d);
      if (norm(d) < 0.3) d = d + matrix_unit(shape, blk, 0, 1);
      const BlockMatrix a2 = a1 + d;
      map.evaluate = [a1, a2](const BlockMatrix& x) {
        return commutator(unit_like(x) ? a1 : a2, x);
      };
      map.provenance = Provenance::BrokenElementDependent;
      break;
    }
    case BrokenKind::Blockmix: {
      if (shape.block_count() < 2)
        throw std::invalid_argument("blockmix brokenness needs >= 2 blocks");
      const BlockMatrix a = random_element(shape, rng);
      map.evaluate = [a, shape](const BlockMatrix& x) {
        FnMatrix leak(shape.dim(1), shape.points);
        leak.set_entry(0, 0, peirce(x, 0, 0, 0));
        return commutator(a, x) + embed(shape, 1, leak);
      };
      map.provenance = Provenance::BrokenBlockmix;
      break;
    }
  }
  return map;
}

PairSolveResult implementing_element_for_pair(const BlockMatrix& u,
                                              const BlockMatrix& v,
                                              const BlockMatrix& du,
                                              const BlockMatrix& dv,
                                              double tol) {
  if (!(u.shape() == v.shape()) || !(u.shape() == du.shape()) ||
      !(u.shape() == dv.shape()))
    throw ShapeError("implementing_element_for_pair: shape mismatch");
  const AlgebraShape& shape = u.shape();

  PairSolveResult out;
  out.element = zero(shape);
  double residual_sq = 0.0;
  double rhs_sq = 0.0;
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    for (std::size_t p = 0; p < shape.points; ++p) {
      const std::vector<detail::CMatrix> ops = {detail::fiber(u, b, p),
                                                detail::fiber(v, b, p)};
      const std::vector<detail::CMatrix> rhs = {detail::fiber(du, b, p),
                                                detail::fiber(dv, b, p)};
      detail::CglsResult solved = detail::cgls_commutators(ops, rhs);
      detail::CMatrix sol = std::move(solved.solution);
      if (!solved.converged)
        sol = detail::dense_min_norm_commutators(ops, rhs, 1e-12).solution;
      for (std::size_t k = 0; k < 2; ++k) {
        residual_sq += (sol * ops[k] - ops[k] * sol - rhs[k]).squaredNorm();
        rhs_sq += rhs[k].squaredNorm();
      }
      detail::set_fiber(out.element, b, p, sol);
    }
  }
  out.residual = std::sqrt(residual_sq);
  out.relative_residual = rhs_sq > 0.0 ? std::sqrt(residual_sq / rhs_sq) : 0.0;
  out.ok = out.relative_residual <= tol;
  return out;
}

}  // namespace localderiv
