#pragma once

#include <vector>

#include "fedtrace/geometry.hpp"
#include "fedtrace/nu_series.hpp"
#include "fedtrace/weyl.hpp"

namespace fedtrace {

/// Abelian Fedosov connection D = d - delta + (1/nu)[Gamma_bar + r, .] of a
/// chart, truncated at nu-order N and Weyl degree D_cap.
///
/// r is the solution of delta r = R_bar + d r + (1/nu)[Gamma_bar, r] + (1/nu) r o r - Omega
/// with delta^{-1} r = 0, built one Weyl degree at a time.
template <CoefficientRing R>
class FedosovConnection {
 public:
  /// weyl_cap < 0 selects 2 * nu_order + 2.
  FedosovConnection(ChartGeometry<R> geometry, int nu_order, int weyl_cap = -1);

  const ChartGeometry<R>& geometry() const { return geometry_; }
  const FiberMetric& metric() const { return geometry_.metric(); }
  int nu_order() const { return nu_order_; }
  int weyl_cap() const { return weyl_cap_; }
  const WeylSection<R>& r() const { return r_; }
  const WeylSection<R>& gamma_bar() const { return gamma_bar_; }
  const WeylSection<R>& r_bar() const { return r_bar_; }
  const WeylSection<R>& omega() const { return omega_; }

  /// d a + (1/nu)[Gamma_bar, a].
  WeylSection<R> nabla(const WeylSection<R>& a) const;
  /// D a.
  WeylSection<R> apply(const WeylSection<R>& a) const;
  /// delta^{-1}(nabla a + (1/nu)[r, a]).
  WeylSection<R> step(const WeylSection<R>& a) const;
  /// Flat section with symbol f.
  WeylSection<R> quantize(const NuSeries<R>& f) const;
  WeylSection<R> quantize(const R& f) const { return quantize(NuSeries<R>{{f}}); }
  /// Solution a of D a = b with a|_{y=0} = 0; throws std::invalid_argument
  /// when check is set and D b != 0 within caps.
  WeylSection<R> d_inverse(const WeylSection<R>& b, bool check = true) const;
  /// f * g through the certified nu-order.
  NuSeries<R> star(const NuSeries<R>& f, const NuSeries<R>& g) const;
  NuSeries<R> star(const R& f, const R& g) const { return star(NuSeries<R>{{f}}, NuSeries<R>{{g}}); }

  /// R_bar + nabla r - delta r + (1/nu) r o r - Omega; zero within caps.
  WeylSection<R> abelian_residual() const;
  /// Theta with D^2 = (1/nu)[Theta, .]; equals -omega + Omega within caps.
  WeylSection<R> weyl_curvature() const;
  /// L_X a - D i(X) a - i(X) D a - (1/nu)[Q(mu), a]; zero within caps when
  /// X preserves the connection and Omega and d mu = i(X)(omega - Omega).
  WeylSection<R> lie_residual(const std::vector<R>& X, const NuSeries<R>& mu, const WeylSection<R>& a) const;

 private:
  WeylSection<R> step_to(const WeylSection<R>& a, int degree) const;
  /// Sum of the iterates of step_to, truncated at Weyl degree `degree`.
  WeylSection<R> series_sum(WeylSection<R> first, int degree) const;

  ChartGeometry<R> geometry_;
  int nu_order_;
  int weyl_cap_;
  WeylSection<R> gamma_bar_;
  WeylSection<R> r_bar_;
  WeylSection<R> omega_;
  WeylSection<R> r_;
};

/// omega as a central 2-form: sum_{i<j} omega_ij dx^i ^ dx^j.
template <CoefficientRing R>
WeylSection<R> symplectic_form_section(const FiberMetric& metric);

// ---- closed forms for the low-order coefficients ----

/// Moyal product sum_t (nu/2)^t / t! Lambda^{i1 j1} ... Lambda^{it jt}
/// d_{i1..it} f d_{j1..jt} h in Darboux coordinates, through nu^order.
template <CoefficientRing R>
NuSeries<R> moyal_product(const FiberMetric& metric, const R& f, const R& h, int order);

/// f * g = f g + (nu/2){f, g} + nu^2 C2 + nu^3 C3 + ...
template <CoefficientRing R>
R poisson_bracket(const ChartGeometry<R>& g, const R& f, const R& h);
template <CoefficientRing R>
R c2_closed_form(const ChartGeometry<R>& g, const R& f, const R& h);
/// Uncombined pieces of C3: S^3, (i_Xf alpha_1) Lambda (i_Xh alpha_1),
/// alpha_2(X_f, X_h), and the two sums inside B^3 without their prefactors.
template <CoefficientRing R>
struct C3Terms {
  R s3;
  R alpha_cross;
  R alpha2;
  R hessian_alpha;
  R nabla_alpha;
};
template <CoefficientRing R>
C3Terms<R> c3_terms(const ChartGeometry<R>& g, const R& f, const R& h);
/// S^3/48 + (1/2) alpha_cross - (1/2) alpha2 + w B^3 with
/// B^3 = hessian_alpha/32 + nabla_alpha/48. The computed star product needs
/// w = 2; w = 1 reproduces only the antisymmetric part.
template <CoefficientRing R>
R c3_closed_form(const ChartGeometry<R>& g, const R& f, const R& h, Rational b3_weight = Rational(2));

}  // namespace fedtrace
