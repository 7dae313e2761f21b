#include "localderiv/oracle.hpp"

#include <cmath>

#include "localderiv/detail/linsolve.hpp"

namespace localderiv {

GlobalSolveResult solve_global(const std::vector<BlockMatrix>& probes,
                               const std::vector<BlockMatrix>& values,
                               const AlgebraShape& shape, double tol,
                               double rank_tol) {
  shape.validate();
  if (probes.size() != values.size())
    throw ShapeError("solve_global: probes and values must align");
  for (const auto& p : probes)
    if (!(p.shape() == shape)) throw ShapeError("solve_global: probe shape");
  for (const auto& v : values)
    if (!(v.shape() == shape)) throw ShapeError("solve_global: value shape");

  GlobalSolveResult out;
  out.element = zero(shape);
  double residual_sq = 0.0;
  double rhs_sq = 0.0;
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    for (std::size_t pt = 0; pt < shape.points; ++pt) {
      std::vector<detail::CMatrix> ops(probes.size());
      std::vector<detail::CMatrix> rhs(values.size());
      for (std::size_t k = 0; k < probes.size(); ++k) {
        ops[k] = detail::fiber(probes[k], b, pt);
        rhs[k] = detail::fiber(values[k], b, pt);
      }
      const detail::DenseSolveResult solved =
          detail::dense_min_norm_commutators(ops, rhs, rank_tol);
      out.rank_deficiency += solved.null_dim;
      for (std::size_t k = 0; k < probes.size(); ++k) {
        residual_sq += (solved.solution * ops[k] - ops[k] * solved.solution -
                        rhs[k])
                           .squaredNorm();
        rhs_sq += rhs[k].squaredNorm();
      }
      detail::set_fiber(out.element, b, pt, solved.solution);
    }
  }
  out.relative_residual =
      rhs_sq > 0.0 ? std::sqrt(residual_sq / rhs_sq) : 0.0;
  out.ok = out.relative_residual <= tol;
  return out;
}

nlohmann::json global_solve_to_json(const GlobalSolveResult& r) {
  nlohmann::json j;
  j["relative_residual"] = r.relative_residual;
  j["rank_deficiency"] = r.rank_deficiency;
  j["ok"] = r.ok;
  return j;
}

CenterComparison equal_mod_center(const BlockMatrix& a, const BlockMatrix& b,
                                  double tol) {
  if (!(a.shape() == b.shape()))
    throw ShapeError("equal_mod_center: shape mismatch");
  const BlockMatrix diff = a - b;
  const BlockMatrix noncentral = diff - center_project(diff);
  CenterComparison out;
  out.distance = norm(noncentral);
  out.pass = out.distance <= tol * (1.0 + norm(a) + norm(b));
  return out;
}

}  // namespace localderiv
