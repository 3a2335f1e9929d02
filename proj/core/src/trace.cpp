#include "fedtrace/trace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "fedtrace/jet_poly.hpp"

namespace fedtrace {

namespace {

template <CoefficientRing R>
using FormMap = std::map<FormMask, R>;

template <CoefficientRing R>
FormMap<R> two_form(const std::vector<R>& comps, int n) {
  FormMap<R> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const R& c = comps[static_cast<std::size_t>(i * n + j)];
      if (!c.is_zero()) out[static_cast<FormMask>((1u << i) | (1u << j))] = c;
    }
  return out;
}

template <CoefficientRing R>
FormMap<R> wedge(const FormMap<R>& a, const FormMap<R>& b) {
  FormMap<R> out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      const int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      out[ma | mb] += ca * cb * Rational(s);
    }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

template <CoefficientRing R>
std::vector<R> omega_components(const FiberMetric& metric) {
  const int n = metric.dimension();
  std::vector<R> out(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (metric.omega(i, j) != 0) out[static_cast<std::size_t>(i * n + j)] = R(metric.omega(i, j));
  return out;
}

template <CoefficientRing R>
R top_coefficient(const FormMap<R>& f, int n) {
  auto it = f.find(static_cast<FormMask>((1u << n) - 1u));
  return it == f.end() ? R{} : it->second;
}

Rational omega_power_top(const FiberMetric& metric) {
  const int n = metric.dimension();
  const auto w = two_form(omega_components<JetPoly>(metric), n);
  FormMap<JetPoly> acc{{0, JetPoly(Rational(1))}};
  for (int k = 0; k < n / 2; ++k) acc = wedge(acc, w);
  const JetPoly top = top_coefficient(acc, n);
  if (top.is_zero()) throw std::logic_error("omega^m vanishes");
  return top.coefficient(Exponents{});
}

template <CoefficientRing R>
std::vector<R> alpha_components(const ChartGeometry<R>& g, int r) {
  const int n = g.n();
  std::vector<R> out(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i * n + j)] = g.alpha(r, i, j);
  return out;
}

double scalar_value(const Scalar& s) { return s.to_double(); }

}  // namespace

template <CoefficientRing R>
NuSeries<R> TraceDensity<R>::series() const {
  NuSeries<R> out;
  out.set(0, R(Rational(1)));
  out.set(1, rho1);
  out.set(2, rho2);
  return out;
}

template <CoefficientRing R>
R top_form_ratio(const FiberMetric& metric, const std::vector<std::vector<R>>& forms) {
  const int n = metric.dimension();
  const int m = n / 2;
  const int p = static_cast<int>(forms.size());
  if (p > m) return R{};
  FormMap<R> acc{{0, R(Rational(1))}};
  for (const auto& f : forms) acc = wedge(acc, two_form(f, n));
  const auto w = two_form(omega_components<R>(metric), n);
  for (int k = p; k < m; ++k) acc = wedge(acc, w);
  return top_coefficient(acc, n) * (Rational(1) / omega_power_top(metric));
}

Rational liouville_factor(const FiberMetric& metric) {
  Rational top = omega_power_top(metric);
  if (top < 0) top = -top;
  Rational fact = 1;
  for (int k = 2; k <= metric.dimension() / 2; ++k) fact *= k;
  return top / fact;
}

template <CoefficientRing R>
TraceDensity<R> trace_density(const ChartGeometry<R>& g) {
  const int m = g.m();
  const auto a1 = alpha_components(g, 1);
  const auto a2 = alpha_components(g, 2);
  TraceDensity<R> out;
  out.m = m;
  out.rho1 = top_form_ratio<R>(g.metric(), {a1}) * Rational(-m);
  out.rho2 = cahen_gutt_momentum(g) * Rational(-1, 24) - top_form_ratio<R>(g.metric(), {a2}) * Rational(m);
  if (m >= 2) out.rho2 += top_form_ratio<R>(g.metric(), {a1, a1}) * (Rational(m * (m - 1)) / 2);
  return out;
}

TraceSeries trace_torus(const ChartGeometry<TrigPoly>& g, const TraceDensity<TrigPoly>& rho,
                        const NuSeries<TrigPoly>& F) {
  const int n = g.n();
  const auto density = rho.series();
  const Scalar prefactor = Scalar(liouville_factor(g.metric()), -g.m());
  TraceSeries out;
  out.m = g.m();
  for (int k = 0; k <= 2; ++k) {
    TrigPoly integrand;
    for (int j = 0; j <= k; ++j) {
      const TrigPoly& f = F[k - j];
      if (!f.is_zero() && !density[j].is_zero()) integrand += f * density[j];
    }
    out.coefficients.push_back(integrate_torus(integrand, n) * prefactor);
  }
  return out;
}

TraceSeries trace_torus(const ChartGeometry<TrigPoly>& g, const NuSeries<TrigPoly>& F) {
  return trace_torus(g, trace_density(g), F);
}

std::vector<double> trace_s2(const ChartGeometry<ProfileRing>& g, const NuSeries<ProfileRing>& F,
                             const QuadratureOptions& options) {
  if (g.n() != 2) throw std::invalid_argument("trace_s2 needs a 2-dimensional chart");
  const auto density = trace_density(g).series();
  const double factor = to_double(liouville_factor(g.metric())) / (2.0 * std::numbers::pi);
  std::vector<double> out;
  for (int k = 0; k <= 2; ++k) {
    ProfileRing integrand;
    for (int j = 0; j <= k; ++j)
      if (!F[k - j].is_zero() && !density[j].is_zero()) integrand += F[k - j] * density[j];
    out.push_back(integrand.is_zero() ? 0.0 : integrate_s2(integrand, options) * factor);
  }
  return out;
}

bool TracePropertyReport::ok() const {
  for (const auto& r : residuals)
    if (!r.is_zero()) return false;
  return true;
}

TracePropertyReport verify_trace_property(const FedosovConnection<TrigPoly>& conn, const TrigPoly& f,
                                          const TrigPoly& h) {
  if (conn.nu_order() < 3) throw std::invalid_argument("trace property check needs nu order >= 3");
  const auto& g = conn.geometry();
  const auto density = trace_density(g).series();
  const auto fh = conn.star(f, h);
  const auto hf = conn.star(h, f);
  if (fh.order() < 3 || hf.order() < 3) throw std::runtime_error("star product not certified through nu^3");
  TracePropertyReport out;
  for (int k = 1; k <= 3; ++k) {
    TrigPoly integrand;
    for (int j = 0; j <= std::min(k, 2); ++j) {
      const TrigPoly bracket = fh[k - j] - hf[k - j];
      if (!bracket.is_zero() && !density[j].is_zero()) integrand += bracket * density[j];
    }
    out.residuals.push_back(integrate_torus(integrand, g.n()) * liouville_factor(g.metric()));
    out.integrands.push_back(std::move(integrand));
  }
  return out;
}

// ---- variation along a path ----

std::vector<TrigPoly> exterior_derivative_1form(const std::vector<TrigPoly>& beta, int n) {
  if (static_cast<int>(beta.size()) != n) throw std::invalid_argument("1-form needs n components");
  std::vector<TrigPoly> out(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[static_cast<std::size_t>(i * n + j)] =
          beta[static_cast<std::size_t>(j)].derivative(i) - beta[static_cast<std::size_t>(i)].derivative(j);
  return out;
}

namespace {

SymmetricTensor3 combine(const SymmetricTensor3& a, const SymmetricTensor3& b, const Rational& t) {
  SymmetricTensor3 out = a;
  for (const auto& [key, v] : b) {
    out[key] += v * t;
    if (out[key].is_zero()) out.erase(key);
  }
  return out;
}

std::size_t omega_length(const TorusPath& p) { return std::max(p.omega0.size(), p.beta.size()); }

std::vector<TrigPoly> omega0_at(const TorusPath& p, std::size_t r, int n) {
  return r < p.omega0.size() ? p.omega0[r] : std::vector<TrigPoly>(static_cast<std::size_t>(n * n));
}

std::vector<TrigPoly> dbeta_at(const TorusPath& p, std::size_t r, int n) {
  return r < p.beta.size() ? exterior_derivative_1form(p.beta[r], n)
                           : std::vector<TrigPoly>(static_cast<std::size_t>(n * n));
}

}  // namespace

ChartGeometry<TrigPoly> TorusPath::at(const Rational& t) const {
  const int n = 2 * m;
  std::vector<std::vector<TrigPoly>> alphas;
  for (std::size_t r = 0; r < omega_length(*this); ++r) {
    auto a = omega0_at(*this, r, n);
    const auto d = dbeta_at(*this, r, n);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += d[i] * t;
    alphas.push_back(std::move(a));
  }
  return build_torus(m, combine(T0, T1, t), alphas);
}

ChartGeometry<Dual<TrigPoly>> TorusPath::tangent_at(const Rational& t) const {
  const int n = 2 * m;
  const ChartGeometry<TrigPoly> base = at(t);
  const auto gamma_dot = christoffel_from_tensor(base.metric(), T1);
  std::vector<Dual<TrigPoly>> gamma;
  for (std::size_t i = 0; i < gamma_dot.size(); ++i) gamma.emplace_back(base.christoffel()[i], gamma_dot[i]);
  std::vector<std::vector<Dual<TrigPoly>>> alphas;
  for (std::size_t r = 0; r < base.omega_series().size(); ++r) {
    const auto d = dbeta_at(*this, r, n);
    std::vector<Dual<TrigPoly>> a;
    for (std::size_t i = 0; i < d.size(); ++i) a.emplace_back(base.omega_series()[r][i], d[i]);
    alphas.push_back(std::move(a));
  }
  return ChartGeometry<Dual<TrigPoly>>(base.metric(), std::move(gamma), std::move(alphas));
}

WeylSection<TrigPoly> TorusPath::beta_section() const {
  const int n = 2 * m;
  WeylSection<TrigPoly> out(n);
  for (std::size_t r = 0; r < beta.size(); ++r)
    for (int i = 0; i < n; ++i)
      out.add(WeylKey{static_cast<int>(r) + 1, Exponents{}, static_cast<FormMask>(1u << i)},
              beta[r][static_cast<std::size_t>(i)]);
  return out;
}

bool VariationOrder::ok(double tolerance) const {
  if (rel_err > tolerance) return false;
  // second-order convergence, unless the difference quotient is already exact
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return err_dt <= 1e-13 * scale || err_half <= err_dt / 3.0;
}

bool VariationReport::ok() const {
  return std::all_of(orders.begin(), orders.end(), [this](const VariationOrder& o) { return o.ok(tolerance); });
}

VariationReport variation_check(const TorusPath& path, const TrigPoly& F, const Rational& t0, const Rational& dt,
                                int nu_order, double tolerance) {
  const NuSeries<TrigPoly> Fs{{F}};
  auto difference = [&](const Rational& h) {
    const auto plus = trace_torus(path.at(t0 + h), Fs);
    const auto minus = trace_torus(path.at(t0 - h), Fs);
    std::vector<double> out;
    for (int k = 0; k <= 2; ++k) {
      const Scalar diff = (plus.coefficients[static_cast<std::size_t>(k)] - minus.coefficients[static_cast<std::size_t>(k)]) *
                          (Rational(1) / (h * 2));
      out.push_back(scalar_value(diff));
    }
    return out;
  };
  const auto lhs = difference(dt);
  const auto lhs_half = difference(dt / 2);

  const ChartGeometry<TrigPoly> geo = path.at(t0);
  const FedosovConnection<TrigPoly> conn(geo, nu_order);
  const FedosovConnection<Dual<TrigPoly>> tangent(path.tangent_at(t0), nu_order);
  const std::function<TrigPoly(const Dual<TrigPoly>&)> value = [](const Dual<TrigPoly>& d) { return d.value(); };
  const std::function<TrigPoly(const Dual<TrigPoly>&)> slope = [](const Dual<TrigPoly>& d) { return d.tangent(); };
  if (!(tangent.r().map(value) == conn.r())) throw std::logic_error("dual Fedosov connection disagrees with its value");
  const WeylSection<TrigPoly> r_dot = tangent.r().map(slope);
  const WeylSection<TrigPoly> gamma_dot = tangent.gamma_bar().map(slope);
  const WeylSection<TrigPoly> beta_dot = path.beta_section().truncated(nu_order, WeylSection<TrigPoly>::kExact);

  // D(Gamma_bar' + r' - beta') = 0; delta^{-1} r' = 0 so r' drops out of D^{-1}
  const WeylSection<TrigPoly> a = conn.d_inverse(gamma_dot + r_dot - beta_dot);
  const auto bracket = eval_y0(commutator_nu(a, conn.quantize(F), conn.metric()));
  if (bracket.order() < 2) throw std::runtime_error("variation bracket not certified through relative order 2");

  const auto density = trace_density(geo).series();
  const Scalar prefactor = Scalar(liouville_factor(geo.metric()), -geo.m());
  VariationReport report;
  report.tolerance = tolerance;
  for (int k = 0; k <= 2; ++k) {
    TrigPoly integrand;
    for (int j = 0; j <= k; ++j)
      if (!bracket[k - j].is_zero() && !density[j].is_zero()) integrand += bracket[k - j] * density[j];
    const double rhs = scalar_value(integrate_torus(integrand, geo.n()) * prefactor);
    VariationOrder o;
    o.lhs = lhs[static_cast<std::size_t>(k)];
    o.rhs = rhs;
    const double scale = std::max(std::abs(o.lhs), std::abs(o.rhs));
    o.err_dt = std::abs(o.lhs - rhs);
    o.err_half = std::abs(lhs_half[static_cast<std::size_t>(k)] - rhs);
    o.rel_err = scale == 0 ? 0.0 : o.err_dt / scale;
    report.orders.push_back(o);
  }
  return report;
}

#define FEDTRACE_INSTANTIATE_TRACE(R)                                                        \
  template struct TraceDensity<R>;                                                         \
  template TraceDensity<R> trace_density(const ChartGeometry<R>&);                         \
  template R top_form_ratio(const FiberMetric&, const std::vector<std::vector<R>>&);

FEDTRACE_INSTANTIATE_TRACE(JetPoly)
FEDTRACE_INSTANTIATE_TRACE(TrigPoly)
FEDTRACE_INSTANTIATE_TRACE(ProfileRing)
FEDTRACE_INSTANTIATE_TRACE(Dual<TrigPoly>)

}  // namespace fedtrace
