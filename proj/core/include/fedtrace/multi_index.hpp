#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>

namespace fedtrace {

/// Largest supported chart dimension n = 2m.
inline constexpr int kMaxDim = 6;

/// Nonnegative exponent vector (y or x monomials).
struct Exponents {
  std::array<std::uint8_t, kMaxDim> e{};

  std::uint8_t& operator[](int i) { return e[static_cast<std::size_t>(i)]; }
  std::uint8_t operator[](int i) const { return e[static_cast<std::size_t>(i)]; }

  int total() const {
    int s = 0;
    for (auto v : e) s += v;
    return s;
  }

  static Exponents unit(int i) {
    Exponents out;
    out[i] = 1;
    return out;
  }

  friend Exponents operator+(Exponents a, const Exponents& b) {
    for (int i = 0; i < kMaxDim; ++i) a[i] = static_cast<std::uint8_t>(a[i] + b[i]);
    return a;
  }

  friend auto operator<=>(const Exponents&, const Exponents&) = default;
};

/// Signed integer frequency vector for trigonometric monomials.
struct Frequency {
  std::array<std::int8_t, kMaxDim> k{};

  std::int8_t& operator[](int i) { return k[static_cast<std::size_t>(i)]; }
  std::int8_t operator[](int i) const { return k[static_cast<std::size_t>(i)]; }

  bool is_zero() const {
    for (auto v : k)
      if (v != 0) return false;
    return true;
  }

  /// A frequency is canonical when its first nonzero entry is positive.
  bool is_canonical() const {
    for (auto v : k) {
      if (v > 0) return true;
      if (v < 0) return false;
    }
    return true;
  }

  Frequency operator-() const {
    Frequency out;
    for (int i = 0; i < kMaxDim; ++i) out[i] = static_cast<std::int8_t>(-k[static_cast<std::size_t>(i)]);
    return out;
  }

  friend Frequency operator+(const Frequency& a, const Frequency& b) {
    Frequency out;
    for (int i = 0; i < kMaxDim; ++i) {
      const int v = a[i] + b[i];
      if (v > 127 || v < -127) throw std::overflow_error("trigonometric frequency overflow");
      out[i] = static_cast<std::int8_t>(v);
    }
    return out;
  }
  friend Frequency operator-(const Frequency& a, const Frequency& b) { return a + (-b); }

  friend auto operator<=>(const Frequency&, const Frequency&) = default;
};

/// Bitmask of strictly increasing dx indices; bit i set means dx^i present.
using FormMask = std::uint8_t;

inline int popcount(FormMask m) { return __builtin_popcount(m); }

/// Sign of dx^{a} ^ dx^{b} relative to the increasing ordering of a|b.
/// Returns 0 when the two index sets overlap.
inline int wedge_sign(FormMask a, FormMask b) {
  if (a & b) return 0;
  int swaps = 0;
  // each index in b must move past every larger index of a
  for (int i = 0; i < kMaxDim; ++i)
    if (b & (1u << i)) swaps += popcount(static_cast<FormMask>(a >> (i + 1)));
  return (swaps & 1) ? -1 : 1;
}

}  // namespace fedtrace
