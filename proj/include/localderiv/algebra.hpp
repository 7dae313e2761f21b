#pragma once

// Finite models of type I von Neumann algebras: direct sums of
// C(X) (x) M_n(C) with X a finite discrete point set. Every element is a
// block matrix whose entries are complex-valued functions on X; all
// operations act pointwise over X and blockwise over the direct sum.
//
// Values are immutable once built and every operation is a pure function,
// so concurrent evaluation needs no synchronization.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace localderiv {

using Complex = std::complex<double>;

/// Thrown on dimension or index mismatches. Numerical verdicts (a map
/// failing a certificate) are reported as values, never as exceptions.
class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// CFunction: an element of C(X) at finite X, one complex value per point.
// ---------------------------------------------------------------------------
class CFunction {
 public:
  CFunction() = default;
  explicit CFunction(std::size_t points, Complex fill = Complex{0.0, 0.0})
      : values_(points, fill) {}

  static CFunction constant(std::size_t points, Complex v) {
    return CFunction(points, v);
  }

  std::size_t points() const { return values_.size(); }

  Complex& operator[](std::size_t p) { return values_[p]; }
  const Complex& operator[](std::size_t p) const { return values_[p]; }

  CFunction& operator+=(const CFunction& o);
  CFunction& operator-=(const CFunction& o);
  CFunction& operator*=(Complex s);

  friend CFunction operator+(CFunction a, const CFunction& b) { return a += b; }
  friend CFunction operator-(CFunction a, const CFunction& b) { return a -= b; }
  friend CFunction operator*(Complex s, CFunction a) { return a *= s; }

  /// Pointwise product, the multiplication of C(X).
  CFunction pointwise(const CFunction& o) const;

  /// max_p |f(p)|
  double max_abs() const;

  bool is_finite() const;

 private:
  std::vector<Complex> values_;
};

// ---------------------------------------------------------------------------
// AlgebraShape: |X| and the block dimensions n_j of the direct sum.
// ---------------------------------------------------------------------------
struct AlgebraShape {
  std::size_t points = 1;
  std::vector<std::size_t> dims;

  std::size_t block_count() const { return dims.size(); }
  std::size_t dim(std::size_t block) const { return dims.at(block); }

  /// Total complex dimension per point, sum of n_j^2.
  std::size_t fiber_dimension() const;

  /// Dimension of the center: one scalar per block per point.
  std::size_t center_dimension() const { return dims.size() * points; }

  /// Throws ShapeError unless points >= 1 and every n_j >= 1.
  void validate() const;

  bool operator==(const AlgebraShape&) const = default;

  std::string describe() const;
};

// ---------------------------------------------------------------------------
// FnMatrix: one fiber C(X) (x) M_n, an n x n matrix of CFunction.
// Storage is point-major: each point of X holds a contiguous row-major
// n x n complex matrix.
// ---------------------------------------------------------------------------
class FnMatrix {
 public:
  FnMatrix() = default;
  FnMatrix(std::size_t dim, std::size_t points)
      : dim_(dim), points_(points), data_(dim * dim * points, Complex{}) {}

  static FnMatrix unit(std::size_t dim, std::size_t points, std::size_t i,
                       std::size_t j);
  static FnMatrix identity(std::size_t dim, std::size_t points);

  std::size_t dim() const { return dim_; }
  std::size_t points() const { return points_; }

  Complex& at(std::size_t i, std::size_t j, std::size_t p) {
    return data_[(p * dim_ + i) * dim_ + j];
  }
  const Complex& at(std::size_t i, std::size_t j, std::size_t p) const {
    return data_[(p * dim_ + i) * dim_ + j];
  }

  /// The (i, j) entry as a function on X.
  CFunction entry(std::size_t i, std::size_t j) const;
  void set_entry(std::size_t i, std::size_t j, const CFunction& f);

  /// Pointer to the contiguous row-major n x n matrix at point p.
  Complex* point_data(std::size_t p) { return data_.data() + p * dim_ * dim_; }
  const Complex* point_data(std::size_t p) const {
    return data_.data() + p * dim_ * dim_;
  }

  bool is_finite() const;

 private:
  std::size_t dim_ = 0;
  std::size_t points_ = 0;
  std::vector<Complex> data_;
};

// ---------------------------------------------------------------------------
// BlockMatrix: an element of the direct sum of the fibers.
// ---------------------------------------------------------------------------
class BlockMatrix {
 public:
  BlockMatrix() = default;
  explicit BlockMatrix(AlgebraShape shape);

  const AlgebraShape& shape() const { return shape_; }
  std::size_t block_count() const { return blocks_.size(); }

  FnMatrix& block(std::size_t b) { return blocks_.at(b); }
  const FnMatrix& block(std::size_t b) const { return blocks_.at(b); }

  bool is_finite() const;

 private:
  AlgebraShape shape_;
  std::vector<FnMatrix> blocks_;
};

// ---------------------------------------------------------------------------
// Operations. All binary operations require identical shapes and throw
// ShapeError otherwise.
// ---------------------------------------------------------------------------

BlockMatrix zero(const AlgebraShape& shape);
BlockMatrix identity(const AlgebraShape& shape);

/// The matrix unit e_ij of one block: constant-1 function at (i, j) of the
/// named block, zero elsewhere. Satisfies e_ab e_cd = delta_bc e_ad.
BlockMatrix matrix_unit(const AlgebraShape& shape, std::size_t block,
                        std::size_t i, std::size_t j);

/// The central projection z_j: identity on block j, zero elsewhere.
BlockMatrix block_unit(const AlgebraShape& shape, std::size_t j);

/// Places f as block `block` of an otherwise zero element.
BlockMatrix embed(const AlgebraShape& shape, std::size_t block,
                  const FnMatrix& f);

BlockMatrix add(const BlockMatrix& a, const BlockMatrix& b);
BlockMatrix sub(const BlockMatrix& a, const BlockMatrix& b);
BlockMatrix scale(Complex lambda, const BlockMatrix& a);

/// Per-point, per-block matrix product.
BlockMatrix multiply(const BlockMatrix& a, const BlockMatrix& b);

/// ax - xa.
BlockMatrix commutator(const BlockMatrix& a, const BlockMatrix& x);

/// The coefficient of e_ij in the Peirce component e_ii m e_jj, i.e. the
/// (i, j) entry of the named block as a function on X.
CFunction peirce(const BlockMatrix& m, std::size_t block, std::size_t i,
                 std::size_t j);

/// Projection onto the center: per block and per point, (trace/n) * identity.
/// Idempotent; the result commutes with everything.
BlockMatrix center_project(const BlockMatrix& m);

/// Max over points of X and over blocks of the per-point Frobenius norm.
/// Zero iff m = 0. Used for tolerances only, never inside formulas.
double norm(const BlockMatrix& m);

/// norm(a - b), without materialising the difference.
double distance(const BlockMatrix& a, const BlockMatrix& b);

/// Largest absolute entry difference across blocks, points and positions.
double max_abs_diff(const BlockMatrix& a, const BlockMatrix& b);

inline BlockMatrix operator+(const BlockMatrix& a, const BlockMatrix& b) {
  return add(a, b);
}
inline BlockMatrix operator-(const BlockMatrix& a, const BlockMatrix& b) {
  return sub(a, b);
}
inline BlockMatrix operator*(const BlockMatrix& a, const BlockMatrix& b) {
  return multiply(a, b);
}
inline BlockMatrix operator*(Complex s, const BlockMatrix& a) {
  return scale(s, a);
}

}  // namespace localderiv
