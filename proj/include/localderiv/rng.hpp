#pragma once

// Deterministic randomness. Every random value in the library flows from a
// 64-bit seed through SplitMix64, so runs are reproducible bit for bit.

#include <cstdint>

#include "localderiv/algebra.hpp"

namespace localderiv {

struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in the complex unit square [0,1) x [0,1).
  Complex next_complex() {
    const double re = next_double();
    const double im = next_double();
    return Complex{re, im};
  }
};

/// Random element with entries uniform in the complex unit square.
BlockMatrix random_element(const AlgebraShape& shape, SplitMix64& rng);

/// FNV-1a over the canonical byte serialization of an element (shape, then
/// entry bit patterns in block/point/row/column order). Used to derive
/// per-input randomness that is independent of evaluation order.
std::uint64_t content_hash(const BlockMatrix& m, std::uint64_t seed);

}  // namespace localderiv
