#include "localderiv/rng.hpp"

#include <bit>
#include <cstring>

namespace localderiv {

BlockMatrix random_element(const AlgebraShape& shape, SplitMix64& rng) {
  BlockMatrix m(shape);
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const std::size_t n = shape.dim(b);
    for (std::size_t p = 0; p < shape.points; ++p)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          m.block(b).at(i, j, p) = rng.next_complex();
  }
  return m;
}

namespace {

inline void fnv_mix(std::uint64_t& h, std::uint64_t word) {
  for (int k = 0; k < 8; ++k) {
    h ^= (word >> (8 * k)) & 0xffULL;
    h *= 0x100000001b3ULL;
  }
}

inline std::uint64_t double_bits(double d) {
  // Collapse +0/-0 so arithmetically equal inputs hash equally.
  if (d == 0.0) d = 0.0;
  std::uint64_t u;
  std::memcpy(&u, &d, sizeof(u));
  return u;
}

}  // namespace

std::uint64_t content_hash(const BlockMatrix& m, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  fnv_mix(h, seed);
  const auto& shape = m.shape();
  fnv_mix(h, shape.points);
  for (std::size_t n : shape.dims) fnv_mix(h, n);
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const std::size_t n = shape.dim(b);
    for (std::size_t p = 0; p < shape.points; ++p)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const Complex v = m.block(b).at(i, j, p);
          fnv_mix(h, double_bits(v.real()));
          fnv_mix(h, double_bits(v.imag()));
        }
  }
  return h;
}

}  // namespace localderiv
