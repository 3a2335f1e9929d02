#pragma once

#include <map>
#include <span>
#include <string>

#include "fedtrace/multi_index.hpp"
#include "fedtrace/scalar.hpp"

namespace fedtrace {

/// Real trigonometric polynomial on the torus T^n = (R / 2 pi Z)^n.
///
/// Each canonical frequency k (first nonzero entry positive, or k = 0)
/// carries a pair (a_k, b_k) meaning a_k cos(k.x) + b_k sin(k.x). The sine
/// coefficient of k = 0 is always zero.
class TrigPoly {
 public:
  struct Mode {
    Rational cos_coef;
    Rational sin_coef;
    bool operator==(const Mode&) const = default;
  };

  TrigPoly() = default;
  explicit TrigPoly(const Rational& c, int n = 0);

  static TrigPoly cos_mode(const Frequency& k, const Rational& c, int n);
  static TrigPoly sin_mode(const Frequency& k, const Rational& c, int n);

  int dimension() const { return n_; }
  bool is_zero() const { return modes_.empty(); }
  const std::map<Frequency, Mode>& modes() const { return modes_; }

  /// Constant Fourier coefficient.
  Rational mean() const;
  /// Largest |k_i| over the support.
  int max_frequency() const;

  TrigPoly derivative(int i) const;
  double evaluate(std::span<const double> x) const;

  TrigPoly& operator+=(const TrigPoly& b);
  TrigPoly& operator-=(const TrigPoly& b);
  friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
  friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
  friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b);
  friend TrigPoly operator*(TrigPoly a, const Rational& q);
  TrigPoly operator-() const;

  friend bool operator==(const TrigPoly& a, const TrigPoly& b) { return a.modes_ == b.modes_; }

  std::string to_string() const;

 private:
  /// Adds c cos(k.x) (is_sin = false) or c sin(k.x) for any k.
  void add(const Frequency& k, bool is_sin, const Rational& c);

  int n_ = 0;
  std::map<Frequency, Mode> modes_;
};

/// Exact integral over T^n: mean * tau^n with tau = 2 pi.
Scalar integrate_torus(const TrigPoly& f, int n);
inline Scalar integrate_torus(const TrigPoly& f) { return integrate_torus(f, f.dimension()); }

}  // namespace fedtrace
