#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <string_view>

namespace fedtrace {

/// Arbitrary-precision exact rational.
using Rational = mpq_class;

/// Parses "p", "p/q" or "-p/q". Throws std::invalid_argument on bad input.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when q == 1).
std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// Exact value of the form sum_k q_k * tau^k with tau = 2*pi kept symbolic.
///
/// tau is treated as a free transcendental, so two Scalars are equal exactly
/// when their coefficient maps agree. Negative powers are allowed (they come
/// from the (2 pi nu)^{-m} prefactor of the trace).
class Scalar {
 public:
  Scalar() = default;
  Scalar(const Rational& q, int tau_power = 0);  // NOLINT(google-explicit-constructor)
  Scalar(long value) : Scalar(Rational(value)) {}  // NOLINT(google-explicit-constructor)

  static Scalar tau_pow(int k) { return Scalar(Rational(1), k); }

  bool is_zero() const { return terms_.empty(); }
  const std::map<int, Rational>& terms() const { return terms_; }

  /// Coefficient of tau^k (zero when absent).
  Rational coefficient(int k) const;

  Scalar& operator+=(const Scalar& other);
  Scalar& operator-=(const Scalar& other);
  Scalar& operator*=(const Scalar& other);
  Scalar& operator*=(const Rational& q);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator*(Scalar a, const Rational& q) { return a *= q; }
  friend Scalar operator*(const Rational& q, Scalar a) { return a *= q; }
  Scalar operator-() const;

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.terms_ == b.terms_; }

  /// Numerical rendering with tau = 2 pi.
  double to_double() const;

  /// Exact rendering, e.g. "0", "3/2", "1/2*(2pi)^-1 + 4*(2pi)^2".
  std::string to_string() const;

  /// Inverse of to_string().
  static Scalar parse(std::string_view text);

 private:
  void set(int k, Rational q);
  std::map<int, Rational> terms_;
};

}  // namespace fedtrace
