#include "localderiv/detail/linsolve.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace localderiv::detail {

CMatrix fiber(const BlockMatrix& m, std::size_t block, std::size_t point) {
  const std::size_t n = m.shape().dim(block);
  CMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = m.block(block).at(i, j, point);
  return out;
}

void set_fiber(BlockMatrix& m, std::size_t block, std::size_t point,
               const CMatrix& f) {
  const std::size_t n = m.shape().dim(block);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.block(block).at(i, j, point) = f(i, j);
}

namespace {

inline CMatrix commutator_fiber(const CMatrix& a, const CMatrix& b) {
  return a * b - b * a;
}

// Applies the adjoint of z -> [z, p] to y, which is y -> [y, p^H].
inline CMatrix commutator_adjoint(const CMatrix& y, const CMatrix& p_adj) {
  return y * p_adj - p_adj * y;
}

// G += K_p^H K_p via the Kronecker identity; vec is column-stacking, so
// kron(S, T)[(a*n+b),(c*n+d)] = S(a,c) T(b,d).
void accumulate_gram(CMatrix& G, const CMatrix& p) {
  const Eigen::Index n = p.rows();
  const CMatrix pc = p.conjugate();
  const CMatrix left = pc * p.transpose();   // conj(p) p^T
  const CMatrix right = p.adjoint() * p;     // p^H p
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index c = 0; c < n; ++c) {
      const Complex s_left = left(a, c);
      const Complex s_conj = pc(a, c);
      const Complex s_tran = p(c, a);
      for (Eigen::Index b = 0; b < n; ++b)
        for (Eigen::Index d = 0; d < n; ++d) {
          Complex acc{0.0, 0.0};
          if (b == d) acc += s_left;
          if (a == c) acc += right(b, d);
          acc -= s_conj * p(b, d);
          acc -= s_tran * std::conj(p(d, b));
          if (acc != Complex{0.0, 0.0}) G(a * n + b, c * n + d) += acc;
        }
    }
}

}  // namespace

CglsResult cgls_commutators(const std::vector<CMatrix>& ops,
                            const std::vector<CMatrix>& rhs,
                            double rel_tol) {
  const Eigen::Index n = ops.empty() ? 0 : ops.front().rows();
  CglsResult out;
  out.solution = CMatrix::Zero(n, n);
  if (n == 0) {
    out.converged = true;
    return out;
  }

  const std::size_t m = ops.size();
  std::vector<CMatrix> adj(m);
  for (std::size_t k = 0; k < m; ++k) adj[k] = ops[k].adjoint();

  std::vector<CMatrix> resid(m);  // rhs - A b, blockwise
  CMatrix s = CMatrix::Zero(n, n);
  for (std::size_t k = 0; k < m; ++k) {
    resid[k] = rhs[k];
    s += commutator_adjoint(resid[k], adj[k]);
  }
  double gamma = s.squaredNorm();
  const double gamma0 = gamma;
  if (gamma0 == 0.0) {
    out.converged = true;
    return out;
  }
  const double target = gamma0 * rel_tol * rel_tol;

  CMatrix dir = s;
  std::vector<CMatrix> q(m);
  const std::size_t cap = 3 * static_cast<std::size_t>(n) * n + 100;
  double best_gamma = gamma;
  std::size_t since_improvement = 0;
  for (std::size_t iter = 0; iter < cap; ++iter) {
    double delta = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      q[k] = commutator_fiber(dir, ops[k]);
      delta += q[k].squaredNorm();
    }
    if (delta == 0.0) break;
    const double alpha = gamma / delta;
    out.solution += alpha * dir;
    const bool refresh = (iter + 1) % 64 == 0;
    s.setZero();
    for (std::size_t k = 0; k < m; ++k) {
      if (refresh)
        resid[k] = rhs[k] - commutator_fiber(out.solution, ops[k]);
      else
        resid[k] -= alpha * q[k];
      s += commutator_adjoint(resid[k], adj[k]);
    }
    const double gamma_next = s.squaredNorm();
    out.iterations = iter + 1;
    if (gamma_next <= target) {
      out.converged = true;
      break;
    }
    if (gamma_next < 0.99 * best_gamma) {
      best_gamma = gamma_next;
      since_improvement = 0;
    } else if (++since_improvement >= 40) {
      break;  // stagnated at the attainable floor
    }
    dir = s + (gamma_next / gamma) * dir;
    gamma = gamma_next;
  }
  // A stall above the strict target is still usable when the
  // normal-equation residual has dropped far below working precision.
  if (!out.converged && best_gamma <= gamma0 * 1e-22) out.converged = true;
  return out;
}

DenseSolveResult dense_min_norm_commutators(const std::vector<CMatrix>& ops,
                                            const std::vector<CMatrix>& rhs,
                                            double rank_tol) {
  const Eigen::Index n = ops.empty() ? 0 : ops.front().rows();
  const Eigen::Index nn = n * n;
  CMatrix G = CMatrix::Zero(nn, nn);
  CVector g = CVector::Zero(nn);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    accumulate_gram(G, ops[k]);
    const CMatrix gk = commutator_adjoint(rhs[k], ops[k].adjoint());
    g += Eigen::Map<const CVector>(gk.data(), nn);
  }

  Eigen::SelfAdjointEigenSolver<CMatrix> es(G);
  const Eigen::VectorXd evals = es.eigenvalues();
  const double lambda_max = evals.size() ? std::max(evals.maxCoeff(), 0.0) : 0.0;
  const double cut = lambda_max * rank_tol;

  DenseSolveResult out;
  CVector x = CVector::Zero(nn);
  std::size_t null_dim = 0;
  for (Eigen::Index k = 0; k < evals.size(); ++k) {
    if (evals(k) <= cut || lambda_max == 0.0) {
      ++null_dim;
      continue;
    }
    const Complex coeff = es.eigenvectors().col(k).dot(g) / evals(k);
    x += coeff * es.eigenvectors().col(k);
  }
  out.null_dim = null_dim;
  out.solution = Eigen::Map<const CMatrix>(x.data(), n, n);
  return out;
}

std::vector<CMatrix> commutant_nullspace_fiber(const std::vector<CMatrix>& ops,
                                               double rank_tol) {
  const Eigen::Index n = ops.empty() ? 0 : ops.front().rows();
  const Eigen::Index nn = n * n;
  // Stacked operator on vec(z): one n^2 x n^2 slab per constraint.
  CMatrix A = CMatrix::Zero(nn * static_cast<Eigen::Index>(ops.size()), nn);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const CMatrix& p = ops[k];
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) {
        CMatrix basis = CMatrix::Zero(n, n);
        basis(i, j) = Complex{1.0, 0.0};
        const CMatrix image = commutator_fiber(basis, p);
        A.block(static_cast<Eigen::Index>(k) * nn, j * n + i, nn, 1) =
            Eigen::Map<const CVector>(image.data(), nn);
      }
  }

  std::vector<CMatrix> basis;
  if (A.rows() == 0 || nn == 0) return basis;
  Eigen::JacobiSVD<CMatrix> svd;
  Eigen::BDCSVD<CMatrix> bdc;
  Eigen::VectorXd sv;
  CMatrix V;
  if (nn <= 64) {
    svd.compute(A, Eigen::ComputeThinV);
    sv = svd.singularValues();
    V = svd.matrixV();
  } else {
    bdc.compute(A, Eigen::ComputeThinV);
    sv = bdc.singularValues();
    V = bdc.matrixV();
  }
  const double smax = sv.size() ? sv(0) : 0.0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (smax > 0.0 && sv(k) > rank_tol * smax) continue;
    basis.push_back(Eigen::Map<const CMatrix>(V.col(k).data(), n, n));
  }
  return basis;
}

}  // namespace localderiv::detail
