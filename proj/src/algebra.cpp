#include "localderiv/algebra.hpp"

#include <Eigen/Core>

#include <cmath>
#include <sstream>

namespace localderiv {

namespace {

using RowMajorMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMajorMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMajorMatrix>;

void require_same_shape(const BlockMatrix& a, const BlockMatrix& b,
                        const char* op) {
  if (!(a.shape() == b.shape())) {
    throw ShapeError(std::string(op) + ": shape mismatch, " +
                     a.shape().describe() + " vs " + b.shape().describe());
  }
}

void require_block(const AlgebraShape& shape, std::size_t block) {
  if (block >= shape.block_count()) {
    throw ShapeError("block index " + std::to_string(block) +
                     " out of range for " + shape.describe());
  }
}

void require_entry(const AlgebraShape& shape, std::size_t block, std::size_t i,
                   std::size_t j) {
  require_block(shape, block);
  const std::size_t n = shape.dim(block);
  if (i >= n || j >= n) {
    throw ShapeError("entry (" + std::to_string(i) + "," + std::to_string(j) +
                     ") out of range for block of dimension " +
                     std::to_string(n));
  }
}

}  // namespace

// --------------------------------------------------------------------------
// CFunction
// --------------------------------------------------------------------------

CFunction& CFunction::operator+=(const CFunction& o) {
  if (o.points() != points()) throw ShapeError("CFunction: point count mismatch");
  for (std::size_t p = 0; p < values_.size(); ++p) values_[p] += o.values_[p];
  return *this;
}

CFunction& CFunction::operator-=(const CFunction& o) {
  if (o.points() != points()) throw ShapeError("CFunction: point count mismatch");
  for (std::size_t p = 0; p < values_.size(); ++p) values_[p] -= o.values_[p];
  return *this;
}

CFunction& CFunction::operator*=(Complex s) {
  for (auto& v : values_) v *= s;
  return *this;
}

CFunction CFunction::pointwise(const CFunction& o) const {
  if (o.points() != points()) throw ShapeError("CFunction: point count mismatch");
  CFunction out(points());
  for (std::size_t p = 0; p < values_.size(); ++p)
    out.values_[p] = values_[p] * o.values_[p];
  return out;
}

double CFunction::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool CFunction::is_finite() const {
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

// --------------------------------------------------------------------------
// AlgebraShape
// --------------------------------------------------------------------------

std::size_t AlgebraShape::fiber_dimension() const {
  std::size_t total = 0;
  for (std::size_t n : dims) total += n * n;
  return total;
}

void AlgebraShape::validate() const {
  if (points < 1) throw ShapeError("shape: |X| must be at least 1");
  if (dims.empty()) throw ShapeError("shape: block list must be nonempty");
  for (std::size_t n : dims)
    if (n < 1) throw ShapeError("shape: every block dimension must be >= 1");
}

std::string AlgebraShape::describe() const {
  std::ostringstream os;
  os << "{points=" << points << ", dims=[";
  for (std::size_t b = 0; b < dims.size(); ++b) {
    if (b) os << ",";
    os << dims[b];
  }
  os << "]}";
  return os.str();
}

// --------------------------------------------------------------------------
// FnMatrix
// --------------------------------------------------------------------------

FnMatrix FnMatrix::unit(std::size_t dim, std::size_t points, std::size_t i,
                        std::size_t j) {
  FnMatrix m(dim, points);
  for (std::size_t p = 0; p < points; ++p) m.at(i, j, p) = Complex{1.0, 0.0};
  return m;
}

FnMatrix FnMatrix::identity(std::size_t dim, std::size_t points) {
  FnMatrix m(dim, points);
  for (std::size_t p = 0; p < points; ++p)
    for (std::size_t i = 0; i < dim; ++i) m.at(i, i, p) = Complex{1.0, 0.0};
  return m;
}

CFunction FnMatrix::entry(std::size_t i, std::size_t j) const {
  CFunction f(points_);
  for (std::size_t p = 0; p < points_; ++p) f[p] = at(i, j, p);
  return f;
}

void FnMatrix::set_entry(std::size_t i, std::size_t j, const CFunction& f) {
  if (f.points() != points_)
    throw ShapeError("set_entry: point count mismatch");
  for (std::size_t p = 0; p < points_; ++p) at(i, j, p) = f[p];
}

bool FnMatrix::is_finite() const {
  for (const auto& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

// --------------------------------------------------------------------------
// BlockMatrix
// --------------------------------------------------------------------------

BlockMatrix::BlockMatrix(AlgebraShape shape) : shape_(std::move(shape)) {
  shape_.validate();
  blocks_.reserve(shape_.block_count());
  for (std::size_t n : shape_.dims) blocks_.emplace_back(n, shape_.points);
}

bool BlockMatrix::is_finite() const {
  for (const auto& b : blocks_)
    if (!b.is_finite()) return false;
  return true;
}

// --------------------------------------------------------------------------
// Constructors of distinguished elements
// --------------------------------------------------------------------------

BlockMatrix zero(const AlgebraShape& shape) { return BlockMatrix(shape); }

BlockMatrix identity(const AlgebraShape& shape) {
  BlockMatrix m(shape);
  for (std::size_t b = 0; b < shape.block_count(); ++b)
    m.block(b) = FnMatrix::identity(shape.dim(b), shape.points);
  return m;
}

BlockMatrix matrix_unit(const AlgebraShape& shape, std::size_t block,
                        std::size_t i, std::size_t j) {
  require_entry(shape, block, i, j);
  BlockMatrix m(shape);
  m.block(block) = FnMatrix::unit(shape.dim(block), shape.points, i, j);
  return m;
}

BlockMatrix block_unit(const AlgebraShape& shape, std::size_t j) {
  require_block(shape, j);
  BlockMatrix m(shape);
  m.block(j) = FnMatrix::identity(shape.dim(j), shape.points);
  return m;
}

BlockMatrix embed(const AlgebraShape& shape, std::size_t block,
                  const FnMatrix& f) {
  require_block(shape, block);
  if (f.dim() != shape.dim(block) || f.points() != shape.points)
    throw ShapeError("embed: fiber does not match shape");
  BlockMatrix m(shape);
  m.block(block) = f;
  return m;
}

// --------------------------------------------------------------------------
// Arithmetic
// --------------------------------------------------------------------------

BlockMatrix add(const BlockMatrix& a, const BlockMatrix& b) {
  require_same_shape(a, b, "add");
  BlockMatrix out = a;
  const auto& shape = a.shape();
  for (std::size_t blk = 0; blk < shape.block_count(); ++blk) {
    const std::size_t n = shape.dim(blk);
    for (std::size_t p = 0; p < shape.points; ++p) {
      MatrixMap o(out.block(blk).point_data(p), n, n);
      ConstMatrixMap r(b.block(blk).point_data(p), n, n);
      o += r;
    }
  }
  return out;
}

BlockMatrix sub(const BlockMatrix& a, const BlockMatrix& b) {
  return add(a, scale(Complex{-1.0, 0.0}, b));
}

BlockMatrix scale(Complex lambda, const BlockMatrix& a) {
  BlockMatrix out = a;
  const auto& shape = a.shape();
  for (std::size_t blk = 0; blk < shape.block_count(); ++blk) {
    const std::size_t n = shape.dim(blk);
    for (std::size_t p = 0; p < shape.points; ++p) {
      MatrixMap o(out.block(blk).point_data(p), n, n);
      o *= lambda;
    }
  }
  return out;
}

BlockMatrix multiply(const BlockMatrix& a, const BlockMatrix& b) {
  require_same_shape(a, b, "multiply");
  const auto& shape = a.shape();
  BlockMatrix out(shape);
  for (std::size_t blk = 0; blk < shape.block_count(); ++blk) {
    const std::size_t n = shape.dim(blk);
    for (std::size_t p = 0; p < shape.points; ++p) {
      ConstMatrixMap l(a.block(blk).point_data(p), n, n);
      ConstMatrixMap r(b.block(blk).point_data(p), n, n);
      MatrixMap o(out.block(blk).point_data(p), n, n);
      o.noalias() = l * r;
    }
  }
  return out;
}

BlockMatrix commutator(const BlockMatrix& a, const BlockMatrix& x) {
  require_same_shape(a, x, "commutator");
  const auto& shape = a.shape();
  BlockMatrix out(shape);
  for (std::size_t blk = 0; blk < shape.block_count(); ++blk) {
    const std::size_t n = shape.dim(blk);
    for (std::size_t p = 0; p < shape.points; ++p) {
      ConstMatrixMap l(a.block(blk).point_data(p), n, n);
      ConstMatrixMap r(x.block(blk).point_data(p), n, n);
      MatrixMap o(out.block(blk).point_data(p), n, n);
      o.noalias() = l * r;
      o.noalias() -= r * l;
    }
  }
  return out;
}

CFunction peirce(const BlockMatrix& m, std::size_t block, std::size_t i,
                 std::size_t j) {
  require_entry(m.shape(), block, i, j);
  return m.block(block).entry(i, j);
}

BlockMatrix center_project(const BlockMatrix& m) {
  const auto& shape = m.shape();
  BlockMatrix out(shape);
  for (std::size_t blk = 0; blk < shape.block_count(); ++blk) {
    const std::size_t n = shape.dim(blk);
    for (std::size_t p = 0; p < shape.points; ++p) {
      Complex tr{0.0, 0.0};
      for (std::size_t i = 0; i < n; ++i) tr += m.block(blk).at(i, i, p);
      const Complex mean = tr / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) out.block(blk).at(i, i, p) = mean;
    }
  }
  return out;
}

double norm(const BlockMatrix& m) {
  const auto& shape = m.shape();
  double worst = 0.0;
  for (std::size_t blk = 0; blk < shape.block_count(); ++blk) {
    const std::size_t n = shape.dim(blk);
    for (std::size_t p = 0; p < shape.points; ++p) {
      double sq = 0.0;
      const Complex* d = m.block(blk).point_data(p);
      for (std::size_t k = 0; k < n * n; ++k) sq += std::norm(d[k]);
      worst = std::max(worst, sq);
    }
  }
  return std::sqrt(worst);
}

double distance(const BlockMatrix& a, const BlockMatrix& b) {
  require_same_shape(a, b, "distance");
  const auto& shape = a.shape();
  double worst = 0.0;
  for (std::size_t blk = 0; blk < shape.block_count(); ++blk) {
    const std::size_t n = shape.dim(blk);
    for (std::size_t p = 0; p < shape.points; ++p) {
      double sq = 0.0;
      const Complex* da = a.block(blk).point_data(p);
      const Complex* db = b.block(blk).point_data(p);
      for (std::size_t k = 0; k < n * n; ++k) sq += std::norm(da[k] - db[k]);
      worst = std::max(worst, sq);
    }
  }
  return std::sqrt(worst);
}

double max_abs_diff(const BlockMatrix& a, const BlockMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  const auto& shape = a.shape();
  double worst = 0.0;
  for (std::size_t blk = 0; blk < shape.block_count(); ++blk) {
    const std::size_t n = shape.dim(blk);
    for (std::size_t p = 0; p < shape.points; ++p) {
      const Complex* da = a.block(blk).point_data(p);
      const Complex* db = b.block(blk).point_data(p);
      for (std::size_t k = 0; k < n * n; ++k)
        worst = std::max(worst, std::abs(da[k] - db[k]));
    }
  }
  return worst;
}

}  // namespace localderiv
