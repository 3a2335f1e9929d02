#pragma once

#include <string>

#include "fedtrace/ring.hpp"

namespace fedtrace {

/// Dual numbers a + eps b with eps^2 = 0 over a coefficient ring.
///
/// Running a computation over Dual<R> with inputs linear in eps yields the
/// exact first-order variation of the result in the eps slot.
template <CoefficientRing R>
class Dual {
 public:
  Dual() = default;
  explicit Dual(const Rational& q) : value_(q) {}
  explicit Dual(R value, R tangent = R{}) : value_(std::move(value)), tangent_(std::move(tangent)) {}

  const R& value() const { return value_; }
  const R& tangent() const { return tangent_; }

  bool is_zero() const { return value_.is_zero() && tangent_.is_zero(); }
  Dual derivative(int i) const { return Dual(value_.derivative(i), tangent_.derivative(i)); }

  Dual& operator+=(const Dual& b) {
    value_ += b.value_;
    tangent_ += b.tangent_;
    return *this;
  }
  Dual& operator-=(const Dual& b) {
    value_ -= b.value_;
    tangent_ -= b.tangent_;
    return *this;
  }
  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(const Dual& a, const Dual& b) {
    return Dual(a.value_ * b.value_, a.value_ * b.tangent_ + a.tangent_ * b.value_);
  }
  friend Dual operator*(const Dual& a, const Rational& q) { return Dual(a.value_ * q, a.tangent_ * q); }
  Dual operator-() const { return Dual(-value_, -tangent_); }

  friend bool operator==(const Dual&, const Dual&) = default;

  std::string to_string() const { return "(" + value_.to_string() + ") + eps*(" + tangent_.to_string() + ")"; }

 private:
  R value_;
  R tangent_;
};

}  // namespace fedtrace
