#pragma once

#include <vector>

#include "fedtrace/dual.hpp"
#include "fedtrace/fedosov.hpp"
#include "fedtrace/geometry.hpp"
#include "fedtrace/quadrature.hpp"
#include "fedtrace/scalar.hpp"

namespace fedtrace {

/// (2 pi nu)^m rho = 1 + nu rho1 + nu^2 rho2 + O(nu^3).
template <CoefficientRing R>
struct TraceDensity {
  int m = 0;
  R rho1;
  R rho2;
  NuSeries<R> series() const;
};

/// rho1 = -m alpha_1 ^ omega^{m-1} / omega^m,
/// rho2 = -mu/24 - m alpha_2 ^ omega^{m-1} / omega^m
///        + m(m-1)/2 alpha_1 ^ alpha_1 ^ omega^{m-2} / omega^m.
template <CoefficientRing R>
TraceDensity<R> trace_density(const ChartGeometry<R>& g);

/// beta_1 ^ ... ^ beta_p ^ omega^{m-p} / omega^m for 2-forms given as
/// component matrices.
template <CoefficientRing R>
R top_form_ratio(const FiberMetric& metric, const std::vector<std::vector<R>>& forms);

/// Coefficient of dx^1 ^ ... ^ dx^n in omega^m / m!, in absolute value.
Rational liouville_factor(const FiberMetric& metric);

/// Tr F = sum_k coefficients[k] nu^{k - m}, known through k = 2.
struct TraceSeries {
  int m = 0;
  std::vector<Scalar> coefficients;
};

/// Exact trace on the standard torus.
TraceSeries trace_torus(const ChartGeometry<TrigPoly>& g, const NuSeries<TrigPoly>& F);
TraceSeries trace_torus(const ChartGeometry<TrigPoly>& g, const TraceDensity<TrigPoly>& rho,
                        const NuSeries<TrigPoly>& F);

/// Trace on S^2 by quadrature in z; coefficients of nu^{k-1}.
std::vector<double> trace_s2(const ChartGeometry<ProfileRing>& g, const NuSeries<ProfileRing>& F,
                             const QuadratureOptions& options = {});

/// Residuals of the trace property: the nu^1, nu^2, nu^3 coefficients of
/// int [f, h]_* (1 + nu rho1 + nu^2 rho2) omega^m / m!.
struct TracePropertyReport {
  std::vector<Scalar> residuals;
  std::vector<TrigPoly> integrands;
  bool ok() const;
};
TracePropertyReport verify_trace_property(const FedosovConnection<TrigPoly>& conn, const TrigPoly& f,
                                          const TrigPoly& h);

/// Linear path on the torus: Gamma_t from T0 + t T1, Omega_t = Omega_0 + t d beta
/// with beta = sum_r nu^r beta_r (beta_r a 1-form given by components).
struct TorusPath {
  int m = 1;
  SymmetricTensor3 T0;
  SymmetricTensor3 T1;
  std::vector<std::vector<TrigPoly>> omega0;
  std::vector<std::vector<TrigPoly>> beta;

  ChartGeometry<TrigPoly> at(const Rational& t) const;
  /// Value and t-derivative at t in one geometry over dual numbers.
  ChartGeometry<Dual<TrigPoly>> tangent_at(const Rational& t) const;
  /// beta as a central Weyl 1-form.
  WeylSection<TrigPoly> beta_section() const;
};

/// d beta_r component matrix.
std::vector<TrigPoly> exterior_derivative_1form(const std::vector<TrigPoly>& beta, int n);

struct VariationOrder {
  double lhs = 0;
  double rhs = 0;
  double rel_err = 0;
  /// |lhs - rhs| at dt and dt / 2.
  double err_dt = 0;
  double err_half = 0;
  /// rel_err within tolerance and error ratio at least 3 under halving.
  bool ok(double tolerance) const;
};

struct VariationReport {
  std::vector<VariationOrder> orders;  // relative nu-orders 0..2
  double tolerance = 1e-6;
  bool ok() const;
};

/// Central difference of Tr(F) along the path against
/// (2 pi nu)^{-m} int (1/nu)[D^{-1}(Gamma_bar' - beta'), Q F]|_{y=0} rho omega^m / m!.
VariationReport variation_check(const TorusPath& path, const TrigPoly& F, const Rational& t0, const Rational& dt,
                                int nu_order = 3, double tolerance = 1e-6);

}  // namespace fedtrace
