#include "fedtrace/geometry.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "fedtrace/dual.hpp"
#include "fedtrace/jet_poly.hpp"

namespace fedtrace {

std::string ValidationReport::to_string() const {
  if (failures.empty()) return "ok";
  std::string out;
  for (const auto& f : failures) {
    if (!out.empty()) out += "; ";
    out += f;
  }
  return out;
}

namespace {

std::size_t power(int n, int r) {
  std::size_t out = 1;
  for (int i = 0; i < r; ++i) out *= static_cast<std::size_t>(n);
  return out;
}

std::string index_name(std::initializer_list<int> idx) {
  std::ostringstream s;
  for (int i : idx) s << i;
  return s.str();
}

}  // namespace

template <CoefficientRing R>
std::pair<std::vector<R>, std::vector<R>> curvature_from_christoffel(int n, const std::vector<R>& G) {
  const Indexer ix{n};
  if (G.size() != power(n, 3)) throw std::invalid_argument("christoffel symbols need n^3 entries");
  std::vector<R> riemann(power(n, 4));
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          R v = G[ix(r, l, j)].derivative(k) - G[ix(r, k, j)].derivative(l);
          for (int p = 0; p < n; ++p) {
            v += G[ix(r, k, p)] * G[ix(p, l, j)];
            v -= G[ix(r, l, p)] * G[ix(p, k, j)];
          }
          riemann[ix(r, j, k, l)] = std::move(v);
        }
  std::vector<R> ricci(power(n, 2));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      R v;
      for (int k = 0; k < n; ++k) v += riemann[ix(k, b, k, a)];
      ricci[ix(a, b)] = std::move(v);
    }
  return {std::move(riemann), std::move(ricci)};
}

template <CoefficientRing R>
ChartGeometry<R>::ChartGeometry(FiberMetric metric, std::vector<R> christoffel,
                                std::vector<std::vector<R>> omega_series)
    : metric_(std::move(metric)), ix_{metric_.dimension()}, gamma_(std::move(christoffel)),
      alphas_(std::move(omega_series)) {
  const int nn = n();
  for (const auto& a : alphas_)
    if (a.size() != power(nn, 2)) throw std::invalid_argument("Omega coefficients need n^2 components");
  auto [riem, ric] = curvature_from_christoffel(nn, gamma_);
  riemann_ = std::move(riem);
  ricci_ = std::move(ric);
}

template <CoefficientRing R>
R ChartGeometry<R>::alpha(int r, int i, int j) const {
  if (r < 1 || r > static_cast<int>(alphas_.size())) return R{};
  return alphas_[static_cast<std::size_t>(r - 1)][ix_(i, j)];
}

template <CoefficientRing R>
ChartGeometry<R> ChartGeometry<R>::with_omega(std::vector<std::vector<R>> omega_series) const {
  ChartGeometry out = *this;
  for (const auto& a : omega_series)
    if (a.size() != power(n(), 2)) throw std::invalid_argument("Omega coefficients need n^2 components");
  out.alphas_ = std::move(omega_series);
  return out;
}

template <CoefficientRing R>
ValidationReport ChartGeometry<R>::validate() const {
  ValidationReport report;
  const int nn = n();
  for (int k = 0; k < nn; ++k)
    for (int i = 0; i < nn; ++i)
      for (int j = i + 1; j < nn; ++j)
        if (!(gamma_[ix_(k, i, j)] == gamma_[ix_(k, j, i)]))
          report.failures.push_back("torsion: Gamma^" + index_name({k}) + "_" + index_name({i, j}) + " not symmetric");
  // nabla omega = 0 iff omega_{il} Gamma^l_{jk} is symmetric in (i, j)
  auto lowered = [&](int i, int j, int k) {
    R v;
    for (int l = 0; l < nn; ++l)
      if (metric_.omega(i, l) != 0) v += gamma_[ix_(l, j, k)] * metric_.omega(i, l);
    return v;
  };
  for (int i = 0; i < nn; ++i)
    for (int j = i + 1; j < nn; ++j)
      for (int k = 0; k < nn; ++k)
        if (!(lowered(i, j, k) == lowered(j, i, k)))
          report.failures.push_back("symplectic: omega Gamma not symmetric at " + index_name({i, j, k}));
  for (std::size_t r = 0; r < alphas_.size(); ++r) {
    const auto& a = alphas_[r];
    const std::string name = "Omega_" + std::to_string(r + 1);
    for (int i = 0; i < nn; ++i)
      for (int j = i; j < nn; ++j)
        if (!(a[ix_(i, j)] + a[ix_(j, i)]).is_zero())
          report.failures.push_back(name + " not antisymmetric at " + index_name({i, j}));
    for (int i = 0; i < nn; ++i)
      for (int j = i + 1; j < nn; ++j)
        for (int k = j + 1; k < nn; ++k) {
          const R d = a[ix_(j, k)].derivative(i) + a[ix_(k, i)].derivative(j) + a[ix_(i, j)].derivative(k);
          if (!d.is_zero()) report.failures.push_back(name + " not closed at " + index_name({i, j, k}));
        }
  }
  return report;
}

template <CoefficientRing R>
WeylSection<R> gamma_bar(const ChartGeometry<R>& g) {
  const int n = g.n();
  WeylSection<R> out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        R c;
        for (int k = 0; k < n; ++k)
          if (g.metric().omega(l, k) != 0) c += g.christoffel(k, i, j) * g.metric().omega(l, k);
        if (c.is_zero()) continue;
        out.add(WeylKey{0, Exponents::unit(l) + Exponents::unit(j), static_cast<FormMask>(1u << i)},
                c * Rational(1, 2));
      }
  return out;
}

template <CoefficientRing R>
WeylSection<R> r_bar(const ChartGeometry<R>& g) {
  const int n = g.n();
  WeylSection<R> out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (k == l) continue;
          R c;
          for (int r = 0; r < n; ++r)
            if (g.metric().omega(i, r) != 0) c += g.riemann(r, j, k, l) * g.metric().omega(i, r);
          if (c.is_zero()) continue;
          const auto mask = static_cast<FormMask>((1u << k) | (1u << l));
          out.add(WeylKey{0, Exponents::unit(i) + Exponents::unit(j), mask}, c * Rational(k < l ? 1 : -1, 4));
        }
  return out;
}

template <CoefficientRing R>
WeylSection<R> omega_section(const ChartGeometry<R>& g) {
  const int n = g.n();
  WeylSection<R> out(n);
  for (int r = 1; r <= static_cast<int>(g.omega_series().size()); ++r)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        out.add(WeylKey{r, Exponents{}, static_cast<FormMask>((1u << i) | (1u << j))}, g.alpha(r, i, j));
  return out;
}

template <CoefficientRing R>
std::vector<R> covariant_derivative(const ChartGeometry<R>& g, const std::vector<R>& T, int rank) {
  const int n = g.n();
  const std::size_t block = power(n, rank);
  if (T.size() != block) throw std::invalid_argument("tensor size does not match its rank");
  std::vector<R> out(block * static_cast<std::size_t>(n));
  std::vector<int> idx(static_cast<std::size_t>(rank));
  for (int p = 0; p < n; ++p)
    for (std::size_t flat = 0; flat < block; ++flat) {
      std::size_t rest = flat;
      for (int s = rank - 1; s >= 0; --s) {
        idx[static_cast<std::size_t>(s)] = static_cast<int>(rest % static_cast<std::size_t>(n));
        rest /= static_cast<std::size_t>(n);
      }
      R v = T[flat].derivative(p);
      std::size_t stride = block;
      for (int s = 0; s < rank; ++s) {
        stride /= static_cast<std::size_t>(n);
        const int a = idx[static_cast<std::size_t>(s)];
        const std::size_t base = flat - static_cast<std::size_t>(a) * stride;
        for (int c = 0; c < n; ++c) {
          const R& G = g.christoffel(c, p, a);
          if (G.is_zero()) continue;
          v -= G * T[base + static_cast<std::size_t>(c) * stride];
        }
      }
      out[static_cast<std::size_t>(p) * block + flat] = std::move(v);
    }
  return out;
}

template <CoefficientRing R>
std::vector<R> hessian(const ChartGeometry<R>& g, const R& f) {
  const int n = g.n();
  std::vector<R> df(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) df[static_cast<std::size_t>(i)] = f.derivative(i);
  return covariant_derivative(g, df, 1);
}

template <CoefficientRing R>
std::vector<R> hamiltonian_field(const ChartGeometry<R>& g, const R& f) {
  const int n = g.n();
  std::vector<R> X(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const R d = f.derivative(j);
    if (d.is_zero()) continue;
    for (int i = 0; i < n; ++i)
      if (g.metric().lambda(j, i) != 0) X[static_cast<std::size_t>(i)] += d * g.metric().lambda(j, i);
  }
  return X;
}

template <CoefficientRing R>
std::vector<R> lie_derivative_connection(const ChartGeometry<R>& g, const std::vector<R>& X) {
  const int n = g.n();
  const Indexer ix{n};
  std::vector<R> dX(power(n, 2));  // dX[i, k] = d_i X^k
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) dX[ix(i, k)] = X[static_cast<std::size_t>(k)].derivative(i);
  std::vector<R> out(power(n, 3));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        R v = dX[ix(j, k)].derivative(i);
        for (int l = 0; l < n; ++l) {
          v += X[static_cast<std::size_t>(l)] * g.christoffel(k, i, j).derivative(l);
          v += g.christoffel(k, l, j) * dX[ix(i, l)];
          v += g.christoffel(k, i, l) * dX[ix(j, l)];
          v -= g.christoffel(l, i, j) * dX[ix(l, k)];
        }
        out[ix(k, i, j)] = std::move(v);
      }
  return out;
}

template <CoefficientRing R>
WeylSection<R> lie_derivative(const std::vector<R>& X, const WeylSection<R>& a) {
  const int n = a.dimension();
  WeylSection<R> out(n, a.nu_cap(), a.degree_cap());
  for (const auto& [key, c] : a.terms()) {
    R v;
    for (int k = 0; k < n; ++k) v += X[static_cast<std::size_t>(k)] * c.derivative(k);
    out.add(key, v);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const R dX = X[static_cast<std::size_t>(k)].derivative(i);
        if (dX.is_zero()) continue;
        if (key.alpha[k] > 0) {
          WeylKey nk = key;
          nk.alpha[k] = static_cast<std::uint8_t>(nk.alpha[k] - 1);
          nk.alpha[i] = static_cast<std::uint8_t>(nk.alpha[i] + 1);
          out.add(nk, c * dX * Rational(key.alpha[k]));
        }
        const auto bit = static_cast<FormMask>(1u << k);
        if (key.beta & bit) {
          const FormMask rest = key.beta & static_cast<FormMask>(~bit);
          const int s_int = (popcount(static_cast<FormMask>(key.beta & (bit - 1))) & 1) ? -1 : 1;
          const int s_wedge = wedge_sign(static_cast<FormMask>(1u << i), rest);
          if (s_wedge == 0) continue;
          WeylKey nk = key;
          nk.beta = rest | static_cast<FormMask>(1u << i);
          out.add(nk, c * dX * Rational(s_int * s_wedge));
        }
      }
  }
  return out;
}

template <CoefficientRing R>
R pair_form(const std::vector<R>& alpha, const std::vector<R>& X, const std::vector<R>& Y, int n) {
  const Indexer ix{n};
  R v;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const R& a = alpha[ix(i, j)];
      if (a.is_zero()) continue;
      v += a * X[static_cast<std::size_t>(i)] * Y[static_cast<std::size_t>(j)];
    }
  return v;
}

namespace {

/// Raises slot s of a covariant tensor with Lambda: T^{..p..} = Lambda^{pa} T_{..a..}.
template <CoefficientRing R>
std::vector<R> raise_slot(const FiberMetric& metric, const std::vector<R>& T, int rank, int s) {
  const int n = metric.dimension();
  std::size_t stride = power(n, rank - 1 - s);
  std::vector<R> out(T.size());
  for (std::size_t flat = 0; flat < T.size(); ++flat) {
    const int p = static_cast<int>((flat / stride) % static_cast<std::size_t>(n));
    const std::size_t base = flat - static_cast<std::size_t>(p) * stride;
    R v;
    for (int a = 0; a < n; ++a)
      if (metric.lambda(p, a) != 0) v += T[base + static_cast<std::size_t>(a) * stride] * metric.lambda(p, a);
    out[flat] = std::move(v);
  }
  return out;
}

template <CoefficientRing R>
R full_contraction(const std::vector<R>& a, const std::vector<R>& b) {
  R v;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) v += a[i] * b[i];
  return v;
}

}  // namespace

template <CoefficientRing R>
R cahen_gutt_momentum(const ChartGeometry<R>& g) {
  const int n = g.n();
  const Indexer ix{n};
  const FiberMetric& metric = g.metric();

  const std::vector<R> ric_up = raise_slot(metric, raise_slot(metric, g.ricci(), 2, 0), 2, 1);
  const std::vector<R> nabla2 = covariant_derivative(g, covariant_derivative(g, g.ricci(), 2), 3);
  R first;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const Rational c = metric.lambda(p, a) * metric.lambda(q, b);
          if (c != 0) first += nabla2[ix(p, q, a, b)] * c;
        }
  const R second = full_contraction(g.ricci(), ric_up);

  std::vector<R> lowered(power(n, 4));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          R v;
          for (int t = 0; t < n; ++t)
            if (metric.omega(p, t) != 0) v += g.riemann(t, q, r, s) * metric.omega(p, t);
          lowered[ix(p, q, r, s)] = std::move(v);
        }
  std::vector<R> raised = lowered;
  for (int s = 0; s < 4; ++s) raised = raise_slot(metric, raised, 4, s);
  const R third = full_contraction(lowered, raised);

  return first - second * Rational(1, 2) + third * Rational(1, 4);
}

template <CoefficientRing R>
std::vector<R> levi_civita(int n, const std::vector<R>& g, const std::vector<R>& ginv) {
  const Indexer ix{n};
  std::vector<R> out(power(n, 3));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        R v;
        for (int l = 0; l < n; ++l) {
          const R& gi = ginv[ix(k, l)];
          if (gi.is_zero()) continue;
          const R bracket = g[ix(j, l)].derivative(i) + g[ix(i, l)].derivative(j) - g[ix(i, j)].derivative(l);
          if (!bracket.is_zero()) v += gi * bracket;
        }
        out[ix(k, i, j)] = v * Rational(1, 2);
      }
  return out;
}

template <CoefficientRing R>
ChartGeometry<R> build_flat(int m, const std::vector<std::vector<Rational>>& omega_series) {
  const int n = 2 * m;
  std::vector<std::vector<R>> alphas;
  for (const auto& a : omega_series) {
    if (a.size() != power(n, 2)) throw std::invalid_argument("Omega coefficients need n^2 components");
    std::vector<R> comps;
    for (const auto& q : a) comps.push_back(q == 0 ? R{} : R(q));
    alphas.push_back(std::move(comps));
  }
  return ChartGeometry<R>(FiberMetric::darboux(m), std::vector<R>(power(n, 3)), std::move(alphas));
}

std::vector<TrigPoly> christoffel_from_tensor(const FiberMetric& metric, const SymmetricTensor3& T) {
  const int n = metric.dimension();
  const Indexer ix{n};
  for (const auto& [key, v] : T) {
    (void)v;
    if (!(key[0] <= key[1] && key[1] <= key[2]) || key[0] < 0 || key[2] >= n)
      throw std::invalid_argument("symmetric tensor keys must be sorted indices below n");
  }
  auto lookup = [&](int i, int j, int k) -> TrigPoly {
    std::array<int, 3> key{i, j, k};
    std::sort(key.begin(), key.end());
    auto it = T.find(key);
    return it == T.end() ? TrigPoly{} : it->second;
  };
  std::vector<TrigPoly> out(power(n, 3));
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        TrigPoly v;
        for (int i = 0; i < n; ++i)
          if (metric.lambda(l, i) != 0) v += lookup(i, j, k) * metric.lambda(l, i);
        out[ix(l, j, k)] = std::move(v);
      }
  return out;
}

ChartGeometry<TrigPoly> build_torus(int m, const SymmetricTensor3& perturbation,
                                    const std::vector<std::vector<TrigPoly>>& omega_series) {
  FiberMetric metric = FiberMetric::darboux(m);
  auto gamma = christoffel_from_tensor(metric, perturbation);
  return ChartGeometry<TrigPoly>(std::move(metric), std::move(gamma), omega_series);
}

// ---- S^2 ----

namespace {

FiberMetric s2_metric() { return FiberMetric(2, {Rational(0), Rational(1), Rational(-1), Rational(0)}); }

std::vector<ProfileRing> s2_g(const UPoly& phi) {
  return {ProfileRing(UPoly(std::vector<Rational>{Rational(1)}), phi), ProfileRing{}, ProfileRing{},
          ProfileRing(phi)};
}

std::vector<ProfileRing> s2_ginv(const UPoly& phi) {
  return {ProfileRing(phi), ProfileRing{}, ProfileRing{},
          ProfileRing(UPoly(std::vector<Rational>{Rational(1)}), phi)};
}

ChartGeometry<ProfileRing> s2_geometry(const UPoly& phi) {
  if (auto report = KahlerModelS2::validate_profile(phi); !report.ok())
    throw std::invalid_argument("inadmissible profile: " + report.to_string());
  return ChartGeometry<ProfileRing>(s2_metric(), levi_civita(2, s2_g(phi), s2_ginv(phi)), {});
}

}  // namespace

ValidationReport KahlerModelS2::validate_profile(const UPoly& phi) {
  ValidationReport report;
  const UPoly dphi = phi.derivative();
  if (phi.evaluate(Rational(-1)) != 0) report.failures.push_back("phi(-1) != 0");
  if (phi.evaluate(Rational(1)) != 0) report.failures.push_back("phi(1) != 0");
  if (dphi.evaluate(Rational(-1)) != 2) report.failures.push_back("phi'(-1) != 2");
  if (dphi.evaluate(Rational(1)) != -2) report.failures.push_back("phi'(1) != -2");
  if (!report.ok()) return report;
  const auto [psi, rem] = UPoly::divmod(phi, UPoly(std::vector<Rational>{Rational(1), Rational(0), Rational(-1)}));
  if (!rem.is_zero()) {
    report.failures.push_back("phi not divisible by 1 - z^2");
    return report;
  }
  constexpr int kSamples = 2000;
  for (int i = 0; i <= kSamples; ++i) {
    const Rational z(2 * i - kSamples, kSamples);
    if (psi.evaluate(z) <= 0) {
      report.failures.push_back("phi not positive on (-1, 1) near z = " + fedtrace::to_string(z));
      break;
    }
  }
  return report;
}

KahlerModelS2::KahlerModelS2(UPoly profile, Rational k)
    : phi_(std::move(profile)), k_(std::move(k)), g_(s2_g(phi_)), ginv_(s2_ginv(phi_)), geometry_(s2_geometry(phi_)) {
  const Indexer ix{2};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      if (!ginv_[ix(a, b)].is_zero()) scalar_ += ginv_[ix(a, b)] * geometry_.ricci(a, b);
  const FiberMetric& w = geometry_.metric();
  ricci_form_.assign(4, ProfileRing{});
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int d = 0; d < 2; ++d)
        for (int c = 0; c < 2; ++c)
          if (w.omega(a, d) != 0 && !ginv_[ix(d, c)].is_zero())
            ricci_form_[ix(a, b)] += ginv_[ix(d, c)] * geometry_.ricci(c, b) * w.omega(a, d);
  std::vector<ProfileRing> alpha1;
  for (const auto& r : ricci_form_) alpha1.push_back(r * k_);
  geometry_ = geometry_.with_omega({alpha1});
}

ProfileRing KahlerModelS2::laplacian(const ProfileRing& f) const {
  ProfileRing out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const ProfileRing& gi = ginv_[static_cast<std::size_t>(2 * a + b)];
      if (gi.is_zero()) continue;
      out -= (gi * f.derivative(b)).derivative(a);
    }
  return out;
}

std::vector<ProfileRing> KahlerModelS2::rotation_field() const { return {ProfileRing{}, ProfileRing(Rational(1))}; }

#define FEDTRACE_INSTANTIATE_GEOMETRY(R)                                                             \
  template class ChartGeometry<R>;                                                                  \
  template std::pair<std::vector<R>, std::vector<R>> curvature_from_christoffel(int, const std::vector<R>&); \
  template WeylSection<R> gamma_bar(const ChartGeometry<R>&);                                       \
  template WeylSection<R> r_bar(const ChartGeometry<R>&);                                           \
  template WeylSection<R> omega_section(const ChartGeometry<R>&);                                   \
  template std::vector<R> covariant_derivative(const ChartGeometry<R>&, const std::vector<R>&, int); \
  template std::vector<R> hessian(const ChartGeometry<R>&, const R&);                               \
  template std::vector<R> hamiltonian_field(const ChartGeometry<R>&, const R&);                     \
  template std::vector<R> lie_derivative_connection(const ChartGeometry<R>&, const std::vector<R>&); \
  template WeylSection<R> lie_derivative(const std::vector<R>&, const WeylSection<R>&);             \
  template R cahen_gutt_momentum(const ChartGeometry<R>&);                                          \
  template R pair_form(const std::vector<R>&, const std::vector<R>&, const std::vector<R>&, int);   \
  template ChartGeometry<R> build_flat(int, const std::vector<std::vector<Rational>>&);             \
  template std::vector<R> levi_civita(int, const std::vector<R>&, const std::vector<R>&);

FEDTRACE_INSTANTIATE_GEOMETRY(JetPoly)
FEDTRACE_INSTANTIATE_GEOMETRY(TrigPoly)
FEDTRACE_INSTANTIATE_GEOMETRY(ProfileRing)
FEDTRACE_INSTANTIATE_GEOMETRY(Dual<TrigPoly>)

}  // namespace fedtrace
