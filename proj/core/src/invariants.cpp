#include "fedtrace/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <type_traits>

namespace fedtrace {

std::string to_string(Normalization mode) {
  switch (mode) {
    case Normalization::none:
      return "none";
    case Normalization::paper_c:
      return "paper_c";
    case Normalization::integral:
      return "integral";
  }
  return "none";
}

Normalization parse_normalization(const std::string& text) {
  if (text == "none") return Normalization::none;
  if (text == "paper_c") return Normalization::paper_c;
  if (text == "integral") return Normalization::integral;
  throw std::invalid_argument("unknown normalization: " + text);
}

NotQuantumHamiltonian::NotQuantumHamiltonian(int order, std::vector<Rational> periods)
    : std::invalid_argument([&] {
        std::string s = "i(X)(omega - Omega) is not exact at nu^" + std::to_string(order) + "; periods (";
        for (std::size_t i = 0; i < periods.size(); ++i) s += (i ? ", " : "") + fedtrace::to_string(periods[i]);
        return s + ")";
      }()),
      order_(order),
      periods_(std::move(periods)) {}

// ---- integrals ----

std::string ModelIntegral::to_string() const {
  return exact ? exact->to_string() : std::to_string(value);
}

ModelIntegral operator+(const ModelIntegral& a, const ModelIntegral& b) {
  ModelIntegral out;
  if (a.exact && b.exact) out.exact = *a.exact + *b.exact;
  out.value = out.exact ? out.exact->to_double() : a.value + b.value;
  return out;
}

ModelIntegral operator-(const ModelIntegral& a, const ModelIntegral& b) {
  return a + b * Scalar(Rational(-1));
}

ModelIntegral operator*(const ModelIntegral& a, const Scalar& s) {
  ModelIntegral out;
  if (a.exact) out.exact = *a.exact * s;
  out.value = out.exact ? out.exact->to_double() : a.value * s.to_double();
  return out;
}

ModelIntegral integrate_density(const ChartGeometry<TrigPoly>& g, const TrigPoly& f) {
  ModelIntegral out;
  out.exact = integrate_torus(f, g.n()) * liouville_factor(g.metric());
  out.value = out.exact->to_double();
  return out;
}

ModelIntegral integrate_density(const ChartGeometry<ProfileRing>& g, const ProfileRing& f,
                                const QuadratureOptions& options) {
  ModelIntegral out;
  const Rational liouville = liouville_factor(g.metric());
  const ProfileRing average = f.theta_average();
  if (average.denominator().degree() == 0) {
    const UPoly primitive = average.invariant_numerator().antiderivative();
    const Rational q = (primitive.evaluate(Rational(1)) - primitive.evaluate(Rational(-1))) /
                       average.denominator().coefficient(0);
    out.exact = Scalar(q * liouville, 1);
    out.value = out.exact->to_double();
  } else {
    out.value = integrate_s2(f, options) * to_double(liouville);
  }
  return out;
}

namespace {

Scalar divide_monomial(const Scalar& a, const Scalar& b) {
  if (b.terms().size() != 1) throw std::domain_error("division by a non-monomial scalar");
  const auto& [power, coefficient] = *b.terms().begin();
  Scalar out;
  for (const auto& [k, q] : a.terms()) out += Scalar(q / coefficient, k - power);
  return out;
}

Rational as_rational(const Scalar& s) {
  for (const auto& [k, q] : s.terms())
    if (k != 0) throw std::domain_error("scalar is not rational: " + s.to_string());
  return s.coefficient(0);
}

const Scalar& require_exact(const ModelIntegral& v) {
  if (!v.exact) throw std::runtime_error("normalization needs exact model integrals");
  return *v.exact;
}

long binomial(int n, int k) {
  long out = 1;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

template <CoefficientRing R>
std::vector<R> alpha_matrix(const ChartGeometry<R>& g, int r) {
  const int n = g.n();
  std::vector<R> out(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i * n + j)] = g.alpha(r, i, j);
  return out;
}

// ---- per-model primitives ----

void check_field(const ChartGeometry<TrigPoly>& g, const std::vector<TrigPoly>& X) {
  if (static_cast<int>(X.size()) != g.n()) throw std::invalid_argument("vector field has the wrong dimension");
  for (const auto& c : X)
    if (!(c == TrigPoly(c.mean(), g.n())) && !(c.is_zero()))
      throw std::invalid_argument("only constant fields are torus symmetries");
}

void check_field(const ChartGeometry<ProfileRing>& g, const std::vector<ProfileRing>& X) {
  if (g.n() != 2 || X.size() != 2) throw std::invalid_argument("S^2 fields have two components");
  if (!X[ProfileRing::kZ].is_zero() || X[ProfileRing::kTheta].derivative(0) != ProfileRing() ||
      X[ProfileRing::kTheta].derivative(1) != ProfileRing())
    throw std::invalid_argument("only multiples of d/dtheta are S^2 symmetries");
}

TrigPoly primitive(const ChartGeometry<TrigPoly>& g, const std::vector<TrigPoly>& beta, int order) {
  const int n = g.n();
  std::vector<Rational> periods;
  bool exact = true;
  for (const auto& b : beta) {
    periods.push_back(b.mean());
    if (b.mean() != 0) exact = false;
  }
  if (!exact) throw NotQuantumHamiltonian(order, periods);
  TrigPoly F(Rational(0), n);
  std::map<Frequency, bool> seen;
  for (const auto& b : beta)
    for (const auto& [k, mode] : b.modes()) seen[k] = true;
  for (const auto& [k, unused] : seen) {
    int j0 = 0;
    while (j0 < n && k[j0] == 0) ++j0;
    if (j0 == n) continue;
    const auto& modes = beta[static_cast<std::size_t>(j0)].modes();
    const auto it = modes.find(k);
    if (it == modes.end()) continue;
    const Rational kj(k[j0]);
    F += TrigPoly::sin_mode(k, it->second.cos_coef / kj, n);
    F -= TrigPoly::cos_mode(k, it->second.sin_coef / kj, n);
  }
  for (int j = 0; j < n; ++j)
    if (!(F.derivative(j) == beta[static_cast<std::size_t>(j)]))
      throw std::invalid_argument("i(X)(omega - Omega) is not closed at nu^" + std::to_string(order));
  return F;
}

ProfileRing primitive(const ChartGeometry<ProfileRing>&, const std::vector<ProfileRing>& beta, int order) {
  const ProfileRing& bz = beta[ProfileRing::kZ];
  const ProfileRing& bt = beta[ProfileRing::kTheta];
  if (!bt.is_zero()) {
    if (bt.is_invariant() && bt.derivative(0).is_zero())
      throw NotQuantumHamiltonian(order, {Rational(0), bt.evaluate(Rational(0))});
    throw std::invalid_argument("i(X)(omega - Omega) is not closed at nu^" + std::to_string(order));
  }
  if (bz.is_zero()) return ProfileRing();
  if (!bz.is_invariant()) throw std::invalid_argument("i(X)(omega - Omega) depends on theta");
  if (bz.denominator().degree() != 0) throw std::runtime_error("contraction is not polynomial in z");
  const UPoly p = bz.invariant_numerator() * (Rational(1) / bz.denominator().coefficient(0));
  return ProfileRing(p.antiderivative());
}

template <CoefficientRing R>
R constant(const Rational& c, int n) {
  if constexpr (std::is_same_v<R, TrigPoly>) {
    return TrigPoly(c, n);
  } else {
    return R(c);
  }
}

}  // namespace

// ---- moment maps ----

template <CoefficientRing R>
NuSeries<R> liouville_ratio_series(const ChartGeometry<R>& g, int order) {
  const int m = g.m();
  NuSeries<R> out;
  out.set(0, constant<R>(Rational(1), g.n()));
  for (int q = 1; q <= order; ++q) {
    R acc;
    for (int j = 1; j <= m && j <= q; ++j) {
      const Rational weight = Rational(binomial(m, j)) * (j % 2 == 0 ? 1 : -1);
      // compositions of q into j positive parts
      std::vector<int> parts;
      std::function<void(int)> visit = [&](int remaining) {
        if (static_cast<int>(parts.size()) == j) {
          if (remaining != 0) return;
          std::vector<std::vector<R>> forms;
          for (int r : parts) forms.push_back(alpha_matrix(g, r));
          acc += top_form_ratio<R>(g.metric(), forms) * weight;
          return;
        }
        for (int r = 1; r <= remaining; ++r) {
          parts.push_back(r);
          visit(remaining - r);
          parts.pop_back();
        }
      };
      visit(q);
    }
    out.set(q, acc);
  }
  return out;
}

template <CoefficientRing R>
std::vector<std::vector<R>> moment_contraction(const ChartGeometry<R>& g, const std::vector<R>& X, int order) {
  const int n = g.n();
  std::vector<std::vector<R>> out;
  for (int r = 0; r <= order; ++r) {
    std::vector<R> beta(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const R& x = X[static_cast<std::size_t>(i)];
        if (x.is_zero()) continue;
        if (r == 0) {
          if (g.metric().omega(i, j) != 0) beta[static_cast<std::size_t>(j)] += x * g.metric().omega(i, j);
        } else {
          const R a = g.alpha(r, i, j);
          if (!a.is_zero()) beta[static_cast<std::size_t>(j)] -= x * a;
        }
      }
    out.push_back(std::move(beta));
  }
  return out;
}

template <CoefficientRing R>
QuantumMomentMap<R> solve_moment(const ChartGeometry<R>& g, const std::vector<R>& X, int order,
                                 Normalization mode) {
  check_field(g, X);
  QuantumMomentMap<R> out;
  out.X = X;
  const auto beta = moment_contraction(g, X, order);
  for (int r = 0; r <= order; ++r) out.mu.set(r, primitive(g, beta[static_cast<std::size_t>(r)], r));
  return normalize(std::move(out), g, mode);
}

template <CoefficientRing R>
QuantumMomentMap<R> normalize(QuantumMomentMap<R> mu, const ChartGeometry<R>& g, Normalization mode) {
  if (mode == Normalization::none) {
    mu.normalization = mode;
    return mu;
  }
  const int order = mu.mu.order();
  const NuSeries<R> weight =
      mode == Normalization::paper_c ? liouville_ratio_series(g, order) : NuSeries<R>{{constant<R>(Rational(1), g.n())}};
  const Scalar volume = require_exact(integrate_density(g, constant<R>(Rational(1), g.n())));
  for (int p = 0; p <= order; ++p) {
    R integrand;
    for (int j = 0; j <= p; ++j)
      if (!weight[j].is_zero() && !mu.mu[p - j].is_zero()) integrand += mu.mu[p - j] * weight[j];
    const Scalar I = require_exact(integrate_density(g, integrand));
    const Rational c = as_rational(divide_monomial(I, volume));
    if (c != 0) mu.mu.set(p, mu.mu[p] - constant<R>(c, g.n()));
  }
  mu.normalization = mode;
  return mu;
}

QuantumMomentMap<ProfileRing> kahler_shift(const QuantumMomentMap<ProfileRing>& mu, const KahlerModelS2& model) {
  QuantumMomentMap<ProfileRing> out = mu;
  const Rational half_k = model.k() / 2;
  for (int p = 1; p <= mu.mu.order(); ++p) out.mu.set(p, mu.mu[p] - model.laplacian(mu.mu[p - 1]) * half_k);
  out.normalization =
      mu.normalization == Normalization::none ? Normalization::none : Normalization::integral;
  return out;
}

ModelIntegral futaki_c1p(const KahlerModelS2& model, const ProfileRing& f, int p, const QuadratureOptions& options) {
  const auto& g = model.geometry();
  const int m = g.m();
  if (p < 1 || p > m + 1) throw std::invalid_argument("futaki_c1p needs 1 <= p <= m + 1");
  Rational m_factorial = 1;
  for (int i = 2; i <= m; ++i) m_factorial *= i;
  auto ric_power_ratio = [&](int a) {
    return top_form_ratio<ProfileRing>(g.metric(), std::vector<std::vector<ProfileRing>>(
                                                       static_cast<std::size_t>(a), model.ricci_form()));
  };
  ProfileRing integrand;
  if (m - p + 1 != 0) integrand -= f * ric_power_ratio(p) * Rational(m - p + 1);
  integrand -= model.laplacian(f) * ric_power_ratio(p - 1) * (Rational(p) / 2);
  return integrate_density(g, integrand * m_factorial, options) * Scalar(Rational(1), -p);
}

// ---- invariants ----

namespace {

template <CoefficientRing R>
std::vector<ModelIntegral> trace_of(const ChartGeometry<R>& g, const NuSeries<R>& F) {
  const auto density = trace_density(g).series();
  const Scalar prefactor(Rational(1), -g.m());
  std::vector<ModelIntegral> out;
  for (int q = 0; q <= 2; ++q) {
    R integrand;
    for (int j = 0; j <= q; ++j)
      if (!F[q - j].is_zero() && !density[j].is_zero()) integrand += F[q - j] * density[j];
    out.push_back(integrate_density(g, integrand) * prefactor);
  }
  return out;
}

std::string model_name(const ChartGeometry<TrigPoly>& g) { return "torus m=" + std::to_string(g.m()); }
std::string model_name(const ChartGeometry<ProfileRing>&) { return "s2"; }

bool agree(const ModelIntegral& a, const ModelIntegral& b, double tolerance) {
  if (a.exact && b.exact) return *a.exact == *b.exact;
  const double scale = std::max({1.0, std::abs(a.value), std::abs(b.value)});
  return std::abs(a.value - b.value) <= tolerance * scale;
}

}  // namespace

template <CoefficientRing R>
InvariantReport invariant_leading(const ChartGeometry<R>& g, const QuantumMomentMap<R>& mu) {
  if (mu.normalization != Normalization::paper_c)
    throw std::invalid_argument("invariant_leading needs the paper_c normalization");
  if (mu.mu.order() < 2) throw std::invalid_argument("invariant_leading needs mu through nu^2");
  InvariantReport out;
  out.model = model_name(g);
  out.m = g.m();
  out.values = trace_of(g, mu.mu);
  out.provenance.assign(3, "trace density");
  ModelIntegral zero;
  zero.exact = Scalar();
  out.cross_check = {zero, zero,
                     integrate_density(g, mu.mu[0] * cahen_gutt_momentum(g)) *
                         Scalar(Rational(-1, 24), -g.m())};
  return out;
}

InvariantReport kahler_invariant(const KahlerModelS2& model, double tolerance, const QuadratureOptions& options) {
  const auto& g = model.geometry();
  const int m = g.m();
  if (m != 1) throw std::invalid_argument("kahler_invariant needs m = 1 (c2 term)");
  const auto X = model.rotation_field();
  const auto mu = solve_moment(g.with_omega({}), X, 2, Normalization::paper_c);
  const auto shifted = kahler_shift(mu, model);

  InvariantReport out;
  out.model = "s2";
  out.k = model.k();
  out.m = m;
  out.values = trace_of(g, shifted.mu);
  out.provenance.assign(3, "trace density");

  const ModelIntegral f1 = futaki_c1p(model, mu.mu[0], 1, options);
  const ModelIntegral f2 = futaki_c1p(model, mu.mu[0], 2, options);
  const Rational k = model.k();
  ModelIntegral zero;
  zero.exact = Scalar();
  // (2 pi nu)^{-m} [(2 pi nu)/m! F_{k c1} + (2 pi nu)^2/(m-1)! F_{-(1 + 12 k^2)/24 c1^2}]
  out.cross_check = {zero, f1 * Scalar(k, 1 - m),
                     f2 * Scalar(-(Rational(1) + 12 * k * k) / 24, 2 - m)};
  for (int q = 0; q <= 2; ++q)
    if (!agree(out.values[static_cast<std::size_t>(q)], out.cross_check[static_cast<std::size_t>(q)], tolerance))
      throw std::runtime_error("kahler_invariant: routes disagree at relative order " + std::to_string(q) + ": " +
                               out.values[static_cast<std::size_t>(q)].to_string() + " vs " +
                               out.cross_check[static_cast<std::size_t>(q)].to_string());
  return out;
}

NormalizationBridge normalization_bridge(const KahlerModelS2& model, int order) {
  const auto& g = model.geometry();
  const auto X = model.rotation_field();
  const auto shifted = kahler_shift(solve_moment(g.with_omega({}), X, order, Normalization::paper_c), model);
  const auto paper = solve_moment(g, X, order, Normalization::paper_c);
  const auto weight = liouville_ratio_series(g, order);

  NormalizationBridge out;
  for (int p = 0; p <= order; ++p) {
    const ProfileRing d = shifted.mu[p] - paper.mu[p];
    if (!d.derivative(0).is_zero() || !d.derivative(1).is_zero())
      throw std::logic_error("normalizations differ by a nonconstant function");
    out.difference.push_back(d.is_zero() ? Rational(0) : d.evaluate(Rational(0)));
  }
  std::vector<Scalar> A;
  std::vector<Scalar> V;
  for (int p = 0; p <= order; ++p) {
    ProfileRing integrand;
    for (int j = 0; j <= p; ++j)
      if (!weight[j].is_zero() && !shifted.mu[p - j].is_zero()) integrand += shifted.mu[p - j] * weight[j];
    A.push_back(require_exact(integrate_density(g, integrand)));
    V.push_back(require_exact(integrate_density(g, weight[p])));
  }
  for (int p = 0; p <= order; ++p) {
    Scalar num = A[static_cast<std::size_t>(p)];
    for (int j = 1; j <= p; ++j) num -= V[static_cast<std::size_t>(j)] * out.quotient[static_cast<std::size_t>(p - j)];
    out.quotient.push_back(divide_monomial(num, V[0]));
  }
  return out;
}

template NuSeries<TrigPoly> liouville_ratio_series(const ChartGeometry<TrigPoly>&, int);
template NuSeries<ProfileRing> liouville_ratio_series(const ChartGeometry<ProfileRing>&, int);
template std::vector<std::vector<TrigPoly>> moment_contraction(const ChartGeometry<TrigPoly>&,
                                                               const std::vector<TrigPoly>&, int);
template std::vector<std::vector<ProfileRing>> moment_contraction(const ChartGeometry<ProfileRing>&,
                                                                  const std::vector<ProfileRing>&, int);
template QuantumMomentMap<TrigPoly> solve_moment(const ChartGeometry<TrigPoly>&, const std::vector<TrigPoly>&, int,
                                                 Normalization);
template QuantumMomentMap<ProfileRing> solve_moment(const ChartGeometry<ProfileRing>&, const std::vector<ProfileRing>&,
                                                    int, Normalization);
template QuantumMomentMap<TrigPoly> normalize(QuantumMomentMap<TrigPoly>, const ChartGeometry<TrigPoly>&,
                                              Normalization);
template QuantumMomentMap<ProfileRing> normalize(QuantumMomentMap<ProfileRing>, const ChartGeometry<ProfileRing>&,
                                                 Normalization);
template InvariantReport invariant_leading(const ChartGeometry<TrigPoly>&, const QuantumMomentMap<TrigPoly>&);
template InvariantReport invariant_leading(const ChartGeometry<ProfileRing>&, const QuantumMomentMap<ProfileRing>&);

}  // namespace fedtrace
