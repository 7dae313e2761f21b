#pragma once

// Shared helpers for the test suites, including independent brute-force
// oracles that deliberately avoid the library's linear-algebra route.

#include <cmath>
#include <cstddef>
#include <memory>
#include <vector>

#include "localderiv/algebra.hpp"
#include "localderiv/derivation.hpp"

namespace testsupport {

using localderiv::BlockMatrix;
using localderiv::Complex;
using localderiv::MapFn;

/// Rank of a real matrix by Gaussian elimination with partial pivoting.
/// Rows with pivot below tol count as dependent.
inline std::size_t real_rank(std::vector<std::vector<double>> rows,
                             double tol) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    for (std::size_t r = rank + 1; r < rows.size(); ++r)
      if (std::abs(rows[r][c]) > std::abs(rows[pivot][c])) pivot = r;
    if (std::abs(rows[pivot][c]) <= tol) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank) continue;
      const double f = rows[r][c] / rows[rank][c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

/// Complex dimension of {z : [z,u] = 0 and [z,v] = 0} on one fiber, by
/// enumerating the real linear system and row-reducing it.
inline std::size_t brute_commutant_dim_fiber(const BlockMatrix& u,
                                             const BlockMatrix& v,
                                             std::size_t block,
                                             std::size_t point) {
  const std::size_t n = u.shape().dim(block);
  // Unknowns: x_ij, y_ij with z_ij = x_ij + i y_ij. Row layout: [x..., y...].
  std::vector<std::vector<double>> rows;
  auto add_constraints = [&](const BlockMatrix& op) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        std::vector<double> re_row(2 * n * n, 0.0);
        std::vector<double> im_row(2 * n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            Complex c{0.0, 0.0};
            if (a == i) c += op.block(block).at(j, b, point);
            if (j == b) c -= op.block(block).at(a, i, point);
            const std::size_t xi = i * n + j;
            const std::size_t yi = n * n + i * n + j;
            re_row[xi] += c.real();
            re_row[yi] -= c.imag();
            im_row[xi] += c.imag();
            im_row[yi] += c.real();
          }
        rows.push_back(std::move(re_row));
        rows.push_back(std::move(im_row));
      }
  };
  add_constraints(u);
  add_constraints(v);
  const std::size_t rank = real_rank(std::move(rows), 1e-9);
  return (2 * n * n - rank) / 2;
}

/// Complex commutant dimension over all fibers.
inline std::size_t brute_commutant_dim(const BlockMatrix& u,
                                       const BlockMatrix& v) {
  std::size_t total = 0;
  for (std::size_t b = 0; b < u.shape().block_count(); ++b)
    for (std::size_t p = 0; p < u.shape().points; ++p)
      total += brute_commutant_dim_fiber(u, v, b, p);
  return total;
}

/// Wraps a map, counting evaluations.
struct CountingMap {
  MapFn inner;
  std::shared_ptr<std::size_t> calls = std::make_shared<std::size_t>(0);

  MapFn fn() const {
    auto c = calls;
    auto f = inner;
    return [c, f](const BlockMatrix& x) {
      ++*c;
      return f(x);
    };
  }
};

}  // namespace testsupport
