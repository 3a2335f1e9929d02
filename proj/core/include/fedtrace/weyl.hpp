#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fedtrace/multi_index.hpp"
#include "fedtrace/nu_series.hpp"
#include "fedtrace/ring.hpp"
#include "fedtrace/scalar.hpp"

namespace fedtrace {

/// One contraction pattern of the Weyl rule: y^a o y^b contains
/// nu^t * coefficient * y^result.
struct Contraction {
  int t = 0;
  Exponents result;
  Rational coefficient;
};

/// Constant symplectic matrix omega_ij on the fiber and its inverse Lambda.
///
/// Copies share a cache of Weyl-rule structure constants.
class FiberMetric {
 public:
  /// omega given row-major, n x n; must be antisymmetric and invertible.
  FiberMetric(int n, std::vector<Rational> omega);
  /// omega = sum_i dx^i ^ dx^{i+m}.
  static FiberMetric darboux(int m);

  int dimension() const { return n_; }
  const Rational& omega(int i, int j) const { return omega_[index(i, j)]; }
  const Rational& lambda(int i, int j) const { return lambda_[index(i, j)]; }

  /// All nonzero terms of y^a o y^b (t = 0 included).
  const std::vector<Contraction>& contractions(const Exponents& a, const Exponents& b) const;

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i * n_ + j); }
  struct Cache;

  int n_ = 0;
  std::vector<Rational> omega_;
  std::vector<Rational> lambda_;
  std::shared_ptr<Cache> cache_;
};

/// Term key: nu^k y^alpha dx^beta.
struct WeylKey {
  int k = 0;
  Exponents alpha;
  FormMask beta = 0;

  int weyl_degree() const { return 2 * k + alpha.total(); }
  int form_degree() const { return popcount(beta); }
  friend auto operator<=>(const WeylKey&, const WeylKey&) = default;
};

/// Truncated section of the Weyl bundle tensored with forms on an n-chart.
///
/// Caps record how far a value is exact: every term of nu-power <= nu_cap and
/// Weyl degree <= degree_cap is correct, and no term beyond either cap is
/// stored. A value built from finitely many exact terms carries kExact caps.
template <CoefficientRing R>
class WeylSection {
 public:
  static constexpr int kExact = 1 << 20;
  using Terms = std::map<WeylKey, R>;

  WeylSection() = default;
  explicit WeylSection(int n, int nu_cap = kExact, int degree_cap = kExact)
      : n_(n), nu_cap_(nu_cap), degree_cap_(degree_cap) {}

  /// c(x) nu^k y^alpha dx^beta.
  static WeylSection monomial(int n, int k, const Exponents& alpha, FormMask beta, const R& c);
  static WeylSection function(int n, const R& c) { return monomial(n, 0, Exponents{}, 0, c); }
  static WeylSection y(int n, int i) { return monomial(n, 0, Exponents::unit(i), 0, R(Rational(1))); }
  /// nu^k-series of functions as a y-free 0-form.
  static WeylSection from_series(int n, const NuSeries<R>& f);

  int dimension() const { return n_; }
  int nu_cap() const { return nu_cap_; }
  int degree_cap() const { return degree_cap_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  R coefficient(const WeylKey& key) const;

  /// Lowest Weyl degree present (kExact + 1 when zero).
  int min_degree() const;
  /// Lowest Weyl degree among terms with nonzero y-degree.
  int min_y_degree() const;
  int min_nu() const;
  int min_nu_y() const;
  /// -1 when zero, the common form degree when pure, -2 when mixed.
  int form_degree() const;
  bool is_central() const;

  /// Adds c to the coefficient of key (dropped when beyond caps).
  void add(const WeylKey& key, const R& c);
  /// Lowers the caps to (nu_cap, degree_cap), dropping terms beyond them.
  WeylSection truncated(int nu_cap, int degree_cap) const;
  /// Terms of the given Weyl degree only.
  WeylSection degree_part(int degree) const;
  /// Terms of the given form degree only.
  WeylSection form_part(int q) const;
  /// Multiplies every term by nu^k.
  WeylSection nu_shift(int k) const;
  /// Applies f to every coefficient (keys and caps unchanged).
  template <CoefficientRing S>
  WeylSection<S> map(const std::function<S(const R&)>& f) const;

  WeylSection& operator+=(const WeylSection& b);
  WeylSection& operator-=(const WeylSection& b);
  friend WeylSection operator+(WeylSection a, const WeylSection& b) { return a += b; }
  friend WeylSection operator-(WeylSection a, const WeylSection& b) { return a -= b; }
  friend WeylSection operator*(WeylSection a, const Rational& q) {
    a.scale(q);
    return a;
  }
  WeylSection operator-() const { return *this * Rational(-1); }
  /// Pointwise product with a function of x.
  WeylSection times(const R& f) const;

  /// Exact equality of terms (caps ignored).
  friend bool operator==(const WeylSection& a, const WeylSection& b) { return a.terms_ == b.terms_; }

  std::string to_string() const;

 private:
  template <CoefficientRing>
  friend class WeylSection;
  void scale(const Rational& q);
  bool within_caps(const WeylKey& key) const { return key.k <= nu_cap_ && key.weyl_degree() <= degree_cap_; }

  int n_ = 0;
  int nu_cap_ = kExact;
  int degree_cap_ = kExact;
  Terms terms_;
};

/// Weyl-rule product extended to forms by wedging. Terms beyond the optional
/// limits are never formed; the result caps are lowered to match.
template <CoefficientRing R>
WeylSection<R> fiber_product(const WeylSection<R>& a, const WeylSection<R>& b, const FiberMetric& metric,
                             int nu_limit = WeylSection<R>::kExact, int degree_limit = WeylSection<R>::kExact);

/// [a, b] = a o b - (-1)^{q1 q2} b o a for pure form degrees q1, q2.
template <CoefficientRing R>
WeylSection<R> graded_commutator(const WeylSection<R>& a, const WeylSection<R>& b, const FiberMetric& metric);

/// (1/nu)[a, b], extended bilinearly over form degrees. Only odd contraction
/// counts survive, so the division is exact.
template <CoefficientRing R>
WeylSection<R> commutator_nu(const WeylSection<R>& a, const WeylSection<R>& b, const FiberMetric& metric,
                             int nu_limit = WeylSection<R>::kExact, int degree_limit = WeylSection<R>::kExact);

/// delta = dx^l ^ d/dy^l.
template <CoefficientRing R>
WeylSection<R> delta(const WeylSection<R>& a);

/// delta^{-1} = (1/(p+q)) y^k i(d/dx^k) on bidegree (p, q), zero on (0, 0).
template <CoefficientRing R>
WeylSection<R> delta_inv(const WeylSection<R>& a);

/// Exterior derivative of the coefficients, y held constant.
template <CoefficientRing R>
WeylSection<R> d_exterior(const WeylSection<R>& a);

/// Removes one power of nu from every term; throws std::domain_error when a
/// term has nu-power zero.
template <CoefficientRing R>
WeylSection<R> nu_divide(const WeylSection<R>& a);

/// The y-free part of a 0-form as a nu-series (through the nu cap, or the
/// highest stored order for exact values).
template <CoefficientRing R>
NuSeries<R> eval_y0(const WeylSection<R>& a);

/// Interior product i(X) with X = X^k d/dx^k.
template <CoefficientRing R>
WeylSection<R> interior(const std::vector<R>& X, const WeylSection<R>& a);

// ---- template member definitions ----

template <CoefficientRing R>
WeylSection<R> WeylSection<R>::monomial(int n, int k, const Exponents& alpha, FormMask beta, const R& c) {
  WeylSection out(n);
  out.add(WeylKey{k, alpha, beta}, c);
  return out;
}

template <CoefficientRing R>
WeylSection<R> WeylSection<R>::from_series(int n, const NuSeries<R>& f) {
  WeylSection out(n);
  for (int k = 0; k <= f.order(); ++k) out.add(WeylKey{k, Exponents{}, 0}, f[k]);
  return out;
}

template <CoefficientRing R>
R WeylSection<R>::coefficient(const WeylKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? R{} : it->second;
}

template <CoefficientRing R>
void WeylSection<R>::add(const WeylKey& key, const R& c) {
  if (c.is_zero() || !within_caps(key)) return;
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

template <CoefficientRing R>
template <CoefficientRing S>
WeylSection<S> WeylSection<R>::map(const std::function<S(const R&)>& f) const {
  WeylSection<S> out(n_, nu_cap_, degree_cap_);
  for (const auto& [key, c] : terms_) out.add(key, f(c));
  return out;
}

}  // namespace fedtrace
