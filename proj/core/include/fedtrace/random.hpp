#pragma once

#include <cstdint>
#include <random>

#include "fedtrace/jet_poly.hpp"
#include "fedtrace/profile_ring.hpp"
#include "fedtrace/trig_poly.hpp"

namespace fedtrace {

/// Seeded source of small random ring elements.
///
/// Draws use explicit modulo reduction of the raw 64-bit engine output, so a
/// given seed produces the same sequence on every platform.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi);
  /// Nonzero rational from a fixed pool of small values.
  Rational rational();
  bool coin() { return integer(0, 1) == 1; }

  /// Polynomial in n variables with `terms` monomials of degree <= max_degree.
  JetPoly jet_poly(int n, int max_degree, int terms, int jet_order = JetPoly::kUnbounded);
  /// Trigonometric polynomial with `modes` random modes of |k_i| <= max_frequency.
  TrigPoly trig_poly(int n, int max_frequency, int modes);
  /// Polynomial in z of degree <= max_degree times cos/sin(h theta), |h| <= max_frequency.
  ProfileRing profile(int max_degree, int max_frequency, int modes);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fedtrace
