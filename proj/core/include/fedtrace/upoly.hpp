#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fedtrace/scalar.hpp"

namespace fedtrace {

/// Dense univariate polynomial over the rationals, lowest degree first.
/// The zero polynomial has no coefficients; the leading coefficient of a
/// nonzero polynomial is nonzero.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coefficients);
  explicit UPoly(const Rational& c) : UPoly(std::vector<Rational>{c}) {}

  static UPoly variable() { return UPoly(std::vector<Rational>{Rational(0), Rational(1)}); }

  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coefficients() const { return c_; }
  Rational coefficient(int k) const;
  const Rational& leading() const { return c_.back(); }

  UPoly derivative() const;
  /// Antiderivative vanishing at 0.
  UPoly antiderivative() const;
  Rational evaluate(const Rational& z) const;
  double evaluate(double z) const;

  UPoly monic() const;

  UPoly& operator+=(const UPoly& b);
  UPoly& operator-=(const UPoly& b);
  friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
  friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend UPoly operator*(UPoly a, const Rational& q);
  UPoly operator-() const { return *this * Rational(-1); }

  friend bool operator==(const UPoly&, const UPoly&) = default;

  /// Euclidean division: a = q * b + r with deg r < deg b.
  static std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
  /// Monic greatest common divisor (zero when both are zero).
  static UPoly gcd(UPoly a, UPoly b);

  std::string to_string(const char* var = "z") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

}  // namespace fedtrace
