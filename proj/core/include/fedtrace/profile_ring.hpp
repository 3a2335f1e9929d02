#pragma once

#include <map>
#include <string>
#include <utility>

#include "fedtrace/scalar.hpp"
#include "fedtrace/upoly.hpp"

namespace fedtrace {

/// Functions on the toric S^2 chart with coordinates (z, theta), z in (-1, 1).
///
/// An element is a finite Fourier sum in theta whose coefficients are rational
/// functions of z sharing one denominator:
///   (sum_h  p_h(z) cos(h theta) + q_h(z) sin(h theta)) / den(z).
/// Circle-invariant quantities only use h = 0. The representation is canonical:
/// den is monic and coprime to the numerators as a family.
class ProfileRing {
 public:
  static constexpr int kZ = 0;
  static constexpr int kTheta = 1;

  ProfileRing() = default;
  explicit ProfileRing(const Rational& c);
  explicit ProfileRing(const UPoly& p);
  ProfileRing(const UPoly& num, const UPoly& den);

  static ProfileRing z() { return ProfileRing(UPoly::variable()); }
  static ProfileRing cos_theta(int h, const UPoly& coefficient);
  static ProfileRing sin_theta(int h, const UPoly& coefficient);

  bool is_zero() const { return modes_.empty(); }
  bool is_invariant() const;
  const UPoly& denominator() const { return den_; }
  /// theta-independent numerator (cos coefficient of h = 0).
  UPoly invariant_numerator() const;
  /// The theta-average as an invariant element.
  ProfileRing theta_average() const;

  ProfileRing derivative(int i) const;
  /// Exact value at z of a theta-independent element; throws on a pole or on
  /// theta dependence.
  Rational evaluate(const Rational& z) const;
  double evaluate(double z, double theta = 0.0) const;

  ProfileRing& operator+=(const ProfileRing& b);
  ProfileRing& operator-=(const ProfileRing& b);
  friend ProfileRing operator+(ProfileRing a, const ProfileRing& b) { return a += b; }
  friend ProfileRing operator-(ProfileRing a, const ProfileRing& b) { return a -= b; }
  friend ProfileRing operator*(const ProfileRing& a, const ProfileRing& b);
  friend ProfileRing operator*(ProfileRing a, const Rational& q);
  ProfileRing operator-() const { return *this * Rational(-1); }
  /// Division by a nonzero theta-independent element.
  friend ProfileRing operator/(const ProfileRing& a, const ProfileRing& b);

  friend bool operator==(const ProfileRing& a, const ProfileRing& b) {
    return a.modes_ == b.modes_ && a.den_ == b.den_;
  }

  std::string to_string() const;

 private:
  using ModeMap = std::map<int, std::pair<UPoly, UPoly>>;
  void normalize();
  static void add_scaled(ModeMap& into, const ModeMap& from, const UPoly& factor, bool negate);

  ModeMap modes_;
  UPoly den_{Rational(1)};
};

}  // namespace fedtrace
