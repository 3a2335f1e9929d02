#include "fedtrace/fedosov.hpp"

#include <algorithm>
#include <stdexcept>

#include "fedtrace/dual.hpp"
#include "fedtrace/jet_poly.hpp"
#include "fedtrace/profile_ring.hpp"
#include "fedtrace/trig_poly.hpp"

namespace fedtrace {

template <CoefficientRing R>
WeylSection<R> symplectic_form_section(const FiberMetric& metric) {
  const int n = metric.dimension();
  WeylSection<R> out(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (metric.omega(i, j) != 0)
        out.add(WeylKey{0, Exponents{}, static_cast<FormMask>((1u << i) | (1u << j))}, R(metric.omega(i, j)));
  return out;
}

namespace {

/// Same terms with the nu cap raised by one.
template <CoefficientRing R>
WeylSection<R> lift_nu_cap(const WeylSection<R>& a) {
  WeylSection<R> out(a.dimension(), a.nu_cap() >= WeylSection<R>::kExact ? a.nu_cap() : a.nu_cap() + 1,
                     a.degree_cap());
  for (const auto& [key, c] : a.terms()) out.add(key, c);
  return out;
}

/// (1/nu) a o b for 1-forms entering a symmetric square, as the literal fiber
/// product. The nu^0 contraction of such a square vanishes identically, so the
/// unknown nu^{N+1} terms of the inputs only reach nu^{N+1} of the product
/// through it, and the inputs may be lifted by one nu order before multiplying.
template <CoefficientRing R>
WeylSection<R> square_over_nu(const WeylSection<R>& a, const WeylSection<R>& b, const FiberMetric& metric) {
  return nu_divide(fiber_product(lift_nu_cap(a), lift_nu_cap(b), metric));
}

}  // namespace

template <CoefficientRing R>
FedosovConnection<R>::FedosovConnection(ChartGeometry<R> geometry, int nu_order, int weyl_cap)
    : geometry_(std::move(geometry)), nu_order_(nu_order), weyl_cap_(weyl_cap < 0 ? 2 * nu_order + 2 : weyl_cap) {
  if (nu_order_ < 0) throw std::invalid_argument("nu order must be non-negative");
  if (weyl_cap_ < 2 * nu_order_) throw std::invalid_argument("Weyl cap below twice the nu order");
  const int n = geometry_.n();
  gamma_bar_ = fedtrace::gamma_bar(geometry_);
  r_bar_ = fedtrace::r_bar(geometry_);
  omega_ = omega_section(geometry_);

  // parts[d] is the Weyl-degree-d piece of r; each only needs lower pieces.
  const WeylSection<R> source = (r_bar_ - omega_).truncated(nu_order_, WeylSection<R>::kExact);
  std::vector<WeylSection<R>> parts(static_cast<std::size_t>(weyl_cap_ + 1), WeylSection<R>(n));
  WeylSection<R> r(n, nu_order_, weyl_cap_);
  for (int d = 3; d <= weyl_cap_; ++d) {
    WeylSection<R> rhs = source.degree_part(d - 1);
    rhs += nabla(parts[static_cast<std::size_t>(d - 1)]);
    // degree-(d - 1) part of (1/nu) r o r
    WeylSection<R> quadratic(n);
    for (int d1 = 3; d1 <= d - 2; ++d1) {
      const int d2 = d + 1 - d1;
      if (d2 < 3) continue;
      quadratic += fiber_product(lift_nu_cap(parts[static_cast<std::size_t>(d1)]),
                                 lift_nu_cap(parts[static_cast<std::size_t>(d2)]), metric());
    }
    rhs += nu_divide(quadratic);
    auto part = delta_inv(rhs.truncated(nu_order_, WeylSection<R>::kExact));
    parts[static_cast<std::size_t>(d)] = part;
    r += part;
  }
  r_ = std::move(r);
}

template <CoefficientRing R>
WeylSection<R> FedosovConnection<R>::nabla(const WeylSection<R>& a) const {
  return d_exterior(a) + commutator_nu(gamma_bar_, a, metric());
}

template <CoefficientRing R>
WeylSection<R> FedosovConnection<R>::apply(const WeylSection<R>& a) const {
  return nabla(a) - delta(a) + commutator_nu(r_, a, metric());
}

template <CoefficientRing R>
WeylSection<R> FedosovConnection<R>::step(const WeylSection<R>& a) const {
  return step_to(a, weyl_cap_);
}

template <CoefficientRing R>
WeylSection<R> FedosovConnection<R>::step_to(const WeylSection<R>& a, int degree) const {
  // delta^{-1} raises the Weyl degree by one
  return delta_inv(nabla(a) + commutator_nu(r_, a, metric(), nu_order_, degree - 1)).truncated(nu_order_, degree);
}

template <CoefficientRing R>
WeylSection<R> FedosovConnection<R>::series_sum(WeylSection<R> term, int degree) const {
  term = term.truncated(nu_order_, degree);
  WeylSection<R> sum = term;
  for (int k = 0; k <= degree + 1; ++k) {
    if (term.is_zero()) return sum;
    term = step_to(term, degree);
    sum += term;
  }
  throw std::runtime_error("Fedosov iteration did not stabilize within the Weyl cap");
}

template <CoefficientRing R>
WeylSection<R> FedosovConnection<R>::quantize(const NuSeries<R>& f) const {
  return series_sum(WeylSection<R>::from_series(geometry_.n(), f), weyl_cap_);
}

template <CoefficientRing R>
WeylSection<R> FedosovConnection<R>::d_inverse(const WeylSection<R>& b, bool check) const {
  if (check) {
    const WeylSection<R> Db = apply(b);
    if (!Db.is_zero())
      throw std::invalid_argument("D^{-1}: D b != 0, residual has " + std::to_string(Db.size()) +
                                  " terms, lowest Weyl degree " + std::to_string(Db.min_degree()));
  }
  return series_sum(-delta_inv(b), weyl_cap_);
}

template <CoefficientRing R>
NuSeries<R> FedosovConnection<R>::star(const NuSeries<R>& f, const NuSeries<R>& g) const {
  // the y = 0 part through nu^N only sees fiber terms of Weyl degree <= 2N
  const int degree = std::min(weyl_cap_, 2 * nu_order_);
  const int n = geometry_.n();
  return eval_y0(fiber_product(series_sum(WeylSection<R>::from_series(n, f), degree),
                               series_sum(WeylSection<R>::from_series(n, g), degree), metric()));
}

template <CoefficientRing R>
WeylSection<R> FedosovConnection<R>::abelian_residual() const {
  WeylSection<R> out = r_bar_ + nabla(r_) - delta(r_) + square_over_nu(r_, r_, metric()) - omega_;
  return out.truncated(out.nu_cap(), out.degree_cap());
}

template <CoefficientRing R>
WeylSection<R> FedosovConnection<R>::weyl_curvature() const {
  const int n = geometry_.n();
  WeylSection<R> theta(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (metric().omega(i, j) != 0)
        theta.add(WeylKey{0, Exponents::unit(i), static_cast<FormMask>(1u << j)}, R(metric().omega(i, j)));
  // -delta = (1/nu)[theta, .], so D = d + (1/nu)[theta + Gamma_bar + r, .]
  const WeylSection<R> A = theta + gamma_bar_ + r_;
  return d_exterior(A) + square_over_nu(A, A, metric());
}

template <CoefficientRing R>
WeylSection<R> FedosovConnection<R>::lie_residual(const std::vector<R>& X, const NuSeries<R>& mu,
                                                  const WeylSection<R>& a) const {
  return lie_derivative(X, a) - apply(interior(X, a)) - interior(X, apply(a)) -
         commutator_nu(quantize(mu), a, metric());
}

// ---- closed forms ----

template <CoefficientRing R>
R poisson_bracket(const ChartGeometry<R>& g, const R& f, const R& h) {
  const int n = g.n();
  R out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (g.metric().lambda(i, j) != 0) out += f.derivative(i) * h.derivative(j) * g.metric().lambda(i, j);
  return out;
}

namespace {

template <CoefficientRing R>
std::vector<R> alpha_matrix(const ChartGeometry<R>& g, int r) {
  const int n = g.n();
  std::vector<R> out(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i * n + j)] = g.alpha(r, i, j);
  return out;
}

/// Lambda^{ij} Lambda^{kl} A_{ik} B_{jl}
template <CoefficientRing R>
R double_contraction(const FiberMetric& w, const std::vector<R>& A, const std::vector<R>& B) {
  const int n = w.dimension();
  R out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (w.lambda(i, j) == 0) continue;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const Rational c = w.lambda(i, j) * w.lambda(k, l);
          if (c == 0) continue;
          const R& a = A[static_cast<std::size_t>(i * n + k)];
          const R& b = B[static_cast<std::size_t>(j * n + l)];
          if (!a.is_zero() && !b.is_zero()) out += a * b * c;
        }
    }
  return out;
}

}  // namespace

template <CoefficientRing R>
R c2_closed_form(const ChartGeometry<R>& g, const R& f, const R& h) {
  const int n = g.n();
  const R hess = double_contraction(g.metric(), hessian(g, f), hessian(g, h));
  const R alpha = pair_form(alpha_matrix(g, 1), hamiltonian_field(g, f), hamiltonian_field(g, h), n);
  return hess * Rational(1, 8) - alpha * Rational(1, 2);
}

template <CoefficientRing R>
C3Terms<R> c3_terms(const ChartGeometry<R>& g, const R& f, const R& h) {
  const int n = g.n();
  const FiberMetric& w = g.metric();
  const Indexer ix{n};
  const auto Xf = hamiltonian_field(g, f);
  const auto Xh = hamiltonian_field(g, h);
  const auto alpha1 = alpha_matrix(g, 1);
  const auto alpha2 = alpha_matrix(g, 2);

  // S^3 from the lowered Lie derivatives of the connection
  auto lowered = [&](const std::vector<R>& X) {
    const auto L = lie_derivative_connection(g, X);
    std::vector<R> out(L.size());
    for (int m = 0; m < n; ++m)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          R v;
          for (int k = 0; k < n; ++k)
            if (w.omega(m, k) != 0) v += L[ix(k, i, j)] * w.omega(m, k);
          out[ix(m, i, j)] = std::move(v);
        }
    return out;
  };
  const auto Lf = lowered(Xf);
  const auto Lh = lowered(Xh);
  R s3;
  for (int i1 = 0; i1 < n; ++i1)
    for (int j1 = 0; j1 < n; ++j1) {
      if (w.lambda(i1, j1) == 0) continue;
      for (int i2 = 0; i2 < n; ++i2)
        for (int j2 = 0; j2 < n; ++j2) {
          if (w.lambda(i2, j2) == 0) continue;
          for (int i3 = 0; i3 < n; ++i3)
            for (int j3 = 0; j3 < n; ++j3) {
              const Rational c = w.lambda(i1, j1) * w.lambda(i2, j2) * w.lambda(i3, j3);
              if (c == 0) continue;
              const R& a = Lf[ix(i1, i2, i3)];
              const R& b = Lh[ix(j1, j2, j3)];
              if (!a.is_zero() && !b.is_zero()) s3 += a * b * c;
            }
        }
    }

  // (i_X alpha)_i = X^a alpha_ai
  auto contract = [&](const std::vector<R>& X, const std::vector<R>& alpha) {
    std::vector<R> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < n; ++a) {
        const R& al = alpha[ix(a, i)];
        if (!al.is_zero()) out[static_cast<std::size_t>(i)] += X[static_cast<std::size_t>(a)] * al;
      }
    return out;
  };
  const auto af = contract(Xf, alpha1);
  const auto ah = contract(Xh, alpha1);
  R cross;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      if (w.lambda(i, k) != 0) cross += af[static_cast<std::size_t>(i)] * ah[static_cast<std::size_t>(k)] * w.lambda(i, k);

  const R a2 = pair_form(alpha2, Xf, Xh, n);

  // B^3
  const auto Hf = hessian(g, f);
  const auto Hh = hessian(g, h);
  std::vector<R> M(static_cast<std::size_t>(n * n));  // M^t_u = Lambda^{ta} alpha_au
  for (int t = 0; t < n; ++t)
    for (int u = 0; u < n; ++u)
      for (int a = 0; a < n; ++a)
        if (w.lambda(t, a) != 0 && !alpha1[ix(a, u)].is_zero()) M[ix(t, u)] += alpha1[ix(a, u)] * w.lambda(t, a);
  auto sym_lambda = [&](int u, int i, int k, int j) -> Rational { return w.lambda(u, i) * w.lambda(k, j) + w.lambda(u, j) * w.lambda(k, i); };
  R b_first;
  for (int t = 0; t < n; ++t)
    for (int u = 0; u < n; ++u) {
      if (M[ix(t, u)].is_zero()) continue;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            const Rational c = sym_lambda(u, i, k, j);
            if (c == 0) continue;
            b_first += M[ix(t, u)] * (Hf[ix(t, k)] * Hh[ix(i, j)] + Hh[ix(t, k)] * Hf[ix(i, j)]) * c;
          }
    }
  const auto nabla_alpha = covariant_derivative(g, alpha1, 2);  // index (k, a, u)
  auto contract_nabla = [&](const std::vector<R>& X) {
    std::vector<R> out(static_cast<std::size_t>(n * n));  // P_{ku} = X^a (nabla_k alpha)_{au}
    for (int k = 0; k < n; ++k)
      for (int u = 0; u < n; ++u)
        for (int a = 0; a < n; ++a) {
          const R& na = nabla_alpha[ix(k, a, u)];
          if (!na.is_zero()) out[ix(k, u)] += X[static_cast<std::size_t>(a)] * na;
        }
    return out;
  };
  const auto Pf = contract_nabla(Xf);
  const auto Ph = contract_nabla(Xh);
  R b_second;
  for (int u = 0; u < n; ++u)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const Rational c = sym_lambda(u, i, k, j);
          if (c == 0) continue;
          b_second += (Pf[ix(k, u)] * Hh[ix(i, j)] + Hf[ix(i, j)] * Ph[ix(k, u)]) * c;
        }
  return C3Terms<R>{s3, cross, a2, b_first, b_second};
}

template <CoefficientRing R>
R c3_closed_form(const ChartGeometry<R>& g, const R& f, const R& h, Rational b3_weight) {
  const auto t = c3_terms(g, f, h);
  const R b3 = t.hessian_alpha * Rational(1, 32) + t.nabla_alpha * Rational(1, 48);
  return t.s3 * Rational(1, 48) + t.alpha_cross * Rational(1, 2) - t.alpha2 * Rational(1, 2) + b3 * b3_weight;
}

template <CoefficientRing R>
NuSeries<R> moyal_product(const FiberMetric& metric, const R& f, const R& h, int order) {
  const int n = metric.dimension();
  NuSeries<R> out;
  std::vector<std::pair<R, R>> level{{f, h}};
  Rational weight(1);
  for (int t = 0; t <= order; ++t) {
    if (t > 0) weight /= 2 * t;
    R sum;
    for (const auto& [a, b] : level) sum += a * b;
    out.set(t, sum * weight);
    if (t == order) break;
    std::vector<std::pair<R, R>> next;
    for (const auto& [a, b] : level)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (metric.lambda(i, j) != 0) next.emplace_back(a.derivative(i), b.derivative(j) * metric.lambda(i, j));
    level = std::move(next);
  }
  return out;
}

#define FEDTRACE_INSTANTIATE_FEDOSOV(R)                                         \
  template class FedosovConnection<R>;                                         \
  template WeylSection<R> symplectic_form_section(const FiberMetric&);          \
  template R poisson_bracket(const ChartGeometry<R>&, const R&, const R&);      \
  template R c2_closed_form(const ChartGeometry<R>&, const R&, const R&);       \
  template R c3_closed_form(const ChartGeometry<R>&, const R&, const R&, Rational);       \
  template NuSeries<R> moyal_product(const FiberMetric&, const R&, const R&, int);       \
  template C3Terms<R> c3_terms(const ChartGeometry<R>&, const R&, const R&);

FEDTRACE_INSTANTIATE_FEDOSOV(JetPoly)
FEDTRACE_INSTANTIATE_FEDOSOV(TrigPoly)
FEDTRACE_INSTANTIATE_FEDOSOV(ProfileRing)
FEDTRACE_INSTANTIATE_FEDOSOV(Dual<TrigPoly>)

}  // namespace fedtrace
