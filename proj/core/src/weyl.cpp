#include "fedtrace/weyl.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

#include "fedtrace/dual.hpp"
#include "fedtrace/jet_poly.hpp"
#include "fedtrace/profile_ring.hpp"
#include "fedtrace/trig_poly.hpp"

namespace fedtrace {

// ---- FiberMetric ----

struct FiberMetric::Cache {
  std::mutex mutex;
  std::map<std::pair<Exponents, Exponents>, std::vector<Contraction>> table;
};

namespace {

std::vector<Rational> invert(int n, std::vector<Rational> a) {
  std::vector<Rational> inv(static_cast<std::size_t>(n * n));
  auto at = [n](std::vector<Rational>& m, int i, int j) -> Rational& {
    return m[static_cast<std::size_t>(i * n + j)];
  };
  for (int i = 0; i < n; ++i) at(inv, i, i) = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    while (pivot < n && at(a, pivot, col) == 0) ++pivot;
    if (pivot == n) throw std::invalid_argument("FiberMetric: degenerate symplectic matrix");
    if (pivot != col)
      for (int j = 0; j < n; ++j) {
        std::swap(at(a, col, j), at(a, pivot, j));
        std::swap(at(inv, col, j), at(inv, pivot, j));
      }
    const Rational p = at(a, col, col);
    for (int j = 0; j < n; ++j) {
      at(a, col, j) /= p;
      at(inv, col, j) /= p;
    }
    for (int i = 0; i < n; ++i) {
      if (i == col || at(a, i, col) == 0) continue;
      const Rational f = at(a, i, col);
      for (int j = 0; j < n; ++j) {
        at(a, i, j) -= f * at(a, col, j);
        at(inv, i, j) -= f * at(inv, col, j);
      }
    }
  }
  return inv;
}

Rational factorial_ratio(int a, int d) {
  // a! / (a - d)!
  Rational r = 1;
  for (int i = 0; i < d; ++i) r *= a - i;
  return r;
}

struct Pair {
  int i;
  int j;
  Rational lambda;
};

void enumerate(const std::vector<Pair>& pairs, std::size_t p, Exponents& used_a, Exponents& used_b,
               const Exponents& a, const Exponents& b, int t, const Rational& weight,
               std::map<std::pair<int, Exponents>, Rational>& out) {
  if (p == pairs.size()) {
    Rational c = weight;
    Exponents result;
    for (int i = 0; i < kMaxDim; ++i) {
      c *= factorial_ratio(a[i], used_a[i]) * factorial_ratio(b[i], used_b[i]);
      result[i] = static_cast<std::uint8_t>(a[i] - used_a[i] + b[i] - used_b[i]);
    }
    for (int s = 0; s < t; ++s) c /= 2;
    out[{t, result}] += c;
    return;
  }
  const Pair& pr = pairs[p];
  const int room = std::min(a[pr.i] - used_a[pr.i], b[pr.j] - used_b[pr.j]);
  Rational w = weight;
  for (int c = 0; c <= room; ++c) {
    if (c > 0) w = w * pr.lambda / c;
    used_a[pr.i] = static_cast<std::uint8_t>(used_a[pr.i] + c);
    used_b[pr.j] = static_cast<std::uint8_t>(used_b[pr.j] + c);
    enumerate(pairs, p + 1, used_a, used_b, a, b, t + c, w, out);
    used_a[pr.i] = static_cast<std::uint8_t>(used_a[pr.i] - c);
    used_b[pr.j] = static_cast<std::uint8_t>(used_b[pr.j] - c);
  }
}

}  // namespace

FiberMetric::FiberMetric(int n, std::vector<Rational> omega)
    : n_(n), omega_(std::move(omega)), cache_(std::make_shared<Cache>()) {
  if (n < 0 || n > kMaxDim || n % 2 != 0) throw std::invalid_argument("FiberMetric: dimension must be even and <= 6");
  if (omega_.size() != static_cast<std::size_t>(n * n)) throw std::invalid_argument("FiberMetric: matrix size");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (omega_[index(i, j)] != -omega_[index(j, i)]) throw std::invalid_argument("FiberMetric: omega not antisymmetric");
  lambda_ = invert(n, omega_);
}

FiberMetric FiberMetric::darboux(int m) {
  const int n = 2 * m;
  std::vector<Rational> w(static_cast<std::size_t>(n * n));
  for (int i = 0; i < m; ++i) {
    w[static_cast<std::size_t>(i * n + i + m)] = 1;
    w[static_cast<std::size_t>((i + m) * n + i)] = -1;
  }
  return FiberMetric(n, std::move(w));
}

const std::vector<Contraction>& FiberMetric::contractions(const Exponents& a, const Exponents& b) const {
  std::lock_guard lock(cache_->mutex);
  auto key = std::make_pair(a, b);
  auto it = cache_->table.find(key);
  if (it != cache_->table.end()) return it->second;
  std::vector<Pair> pairs;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (lambda(i, j) != 0 && a[i] > 0 && b[j] > 0) pairs.push_back({i, j, lambda(i, j)});
  std::map<std::pair<int, Exponents>, Rational> acc;
  Exponents used_a;
  Exponents used_b;
  enumerate(pairs, 0, used_a, used_b, a, b, 0, Rational(1), acc);
  std::vector<Contraction> out;
  for (auto& [tk, c] : acc)
    if (c != 0) out.push_back({tk.first, tk.second, c});
  return cache_->table.emplace(key, std::move(out)).first->second;
}

// ---- WeylSection members ----

namespace {

constexpr int kExactCap = 1 << 20;

int clamp_cap(long v) { return static_cast<int>(std::min<long>(v, kExactCap)); }

int shift_cap(int cap, int s) { return cap >= kExactCap ? kExactCap : clamp_cap(static_cast<long>(cap) + s); }

/// Position sign of removing index k from the increasing list beta.
int interior_sign(FormMask beta, int k) {
  const int below = popcount(static_cast<FormMask>(beta & ((1u << k) - 1u)));
  return (below & 1) ? -1 : 1;
}

template <class R>
int effective_min_degree(const WeylSection<R>& a, bool y_only) {
  int m = a.degree_cap() >= kExactCap ? kExactCap + 1 : a.degree_cap() + 1;
  if (a.nu_cap() < kExactCap) m = std::min(m, 2 * (a.nu_cap() + 1) + (y_only ? 1 : 0));
  for (const auto& [key, c] : a.terms())
    if (!y_only || key.alpha.total() > 0) m = std::min(m, key.weyl_degree());
  return m;
}

template <class R>
int effective_min_nu(const WeylSection<R>& a, bool y_only) {
  if (a.degree_cap() < kExactCap) return 0;
  int m = a.nu_cap() >= kExactCap ? kExactCap + 1 : a.nu_cap() + 1;
  for (const auto& [key, c] : a.terms())
    if (!y_only || key.alpha.total() > 0) m = std::min(m, key.k);
  return m;
}

}  // namespace

template <CoefficientRing R>
int WeylSection<R>::min_degree() const {
  int m = kExact + 1;
  for (const auto& [key, c] : terms_) m = std::min(m, key.weyl_degree());
  return m;
}

template <CoefficientRing R>
int WeylSection<R>::min_y_degree() const {
  int m = kExact + 1;
  for (const auto& [key, c] : terms_)
    if (key.alpha.total() > 0) m = std::min(m, key.weyl_degree());
  return m;
}

template <CoefficientRing R>
int WeylSection<R>::min_nu() const {
  int m = kExact + 1;
  for (const auto& [key, c] : terms_) m = std::min(m, key.k);
  return m;
}

template <CoefficientRing R>
int WeylSection<R>::min_nu_y() const {
  int m = kExact + 1;
  for (const auto& [key, c] : terms_)
    if (key.alpha.total() > 0) m = std::min(m, key.k);
  return m;
}

template <CoefficientRing R>
int WeylSection<R>::form_degree() const {
  int q = -1;
  for (const auto& [key, c] : terms_) {
    const int d = key.form_degree();
    if (q == -1)
      q = d;
    else if (q != d)
      return -2;
  }
  return q;
}

template <CoefficientRing R>
bool WeylSection<R>::is_central() const {
  for (const auto& [key, c] : terms_)
    if (key.alpha.total() > 0) return false;
  return true;
}

template <CoefficientRing R>
WeylSection<R> WeylSection<R>::truncated(int nu_cap, int degree_cap) const {
  WeylSection out(n_, std::min(nu_cap, nu_cap_), std::min(degree_cap, degree_cap_));
  for (const auto& [key, c] : terms_) out.add(key, c);
  return out;
}

template <CoefficientRing R>
WeylSection<R> WeylSection<R>::degree_part(int degree) const {
  WeylSection out(n_, nu_cap_, degree_cap_);
  for (const auto& [key, c] : terms_)
    if (key.weyl_degree() == degree) out.terms_.emplace(key, c);
  return out;
}

template <CoefficientRing R>
WeylSection<R> WeylSection<R>::form_part(int q) const {
  WeylSection out(n_, nu_cap_, degree_cap_);
  for (const auto& [key, c] : terms_)
    if (key.form_degree() == q) out.terms_.emplace(key, c);
  return out;
}

template <CoefficientRing R>
WeylSection<R> WeylSection<R>::nu_shift(int k) const {
  WeylSection out(n_, shift_cap(nu_cap_, k), shift_cap(degree_cap_, 2 * k));
  for (const auto& [key, c] : terms_) out.add(WeylKey{key.k + k, key.alpha, key.beta}, c);
  return out;
}

template <CoefficientRing R>
WeylSection<R>& WeylSection<R>::operator+=(const WeylSection& b) {
  if (n_ != b.n_ && !terms_.empty() && !b.terms_.empty())
    throw std::invalid_argument("WeylSection: dimension mismatch");
  n_ = std::max(n_, b.n_);
  const int nu = std::min(nu_cap_, b.nu_cap_);
  const int deg = std::min(degree_cap_, b.degree_cap_);
  if (nu < nu_cap_ || deg < degree_cap_) *this = truncated(nu, deg);
  for (const auto& [key, c] : b.terms_) add(key, c);
  return *this;
}

template <CoefficientRing R>
WeylSection<R>& WeylSection<R>::operator-=(const WeylSection& b) {
  return *this += -b;
}

template <CoefficientRing R>
void WeylSection<R>::scale(const Rational& q) {
  if (q == 0) {
    terms_.clear();
    return;
  }
  for (auto& [key, c] : terms_) c = c * q;
}

template <CoefficientRing R>
WeylSection<R> WeylSection<R>::times(const R& f) const {
  WeylSection out(n_, nu_cap_, degree_cap_);
  for (const auto& [key, c] : terms_) out.add(key, c * f);
  return out;
}

template <CoefficientRing R>
std::string WeylSection<R>::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [key, c] : terms_) {
    if (!out.empty()) out += "\n";
    out += "(" + c.to_string() + ")";
    if (key.k > 0) out += " nu^" + std::to_string(key.k);
    for (int i = 0; i < kMaxDim; ++i)
      if (key.alpha[i] > 0) out += " y" + std::to_string(i + 1) + "^" + std::to_string(key.alpha[i]);
    for (int i = 0; i < kMaxDim; ++i)
      if (key.beta & (1u << i)) out += " dx" + std::to_string(i + 1);
  }
  return out;
}

// ---- free operations ----

namespace {

template <class R>
void check_dims(const WeylSection<R>& a, const WeylSection<R>& b, const FiberMetric& metric) {
  const int n = metric.dimension();
  if ((!a.is_zero() && a.dimension() != n) || (!b.is_zero() && b.dimension() != n))
    throw std::invalid_argument("Weyl product: dimension mismatch");
}

/// Shared kernel of the product (odd_only = false) and of (1/nu)[a, b].
template <class R>
WeylSection<R> contract(const WeylSection<R>& a, const WeylSection<R>& b, const FiberMetric& metric, bool odd_only,
                        int nu_limit, int degree_limit) {
  check_dims(a, b, metric);
  int nu_cap;
  int deg_cap;
  if (!odd_only) {
    nu_cap = clamp_cap(std::min<long>(static_cast<long>(a.nu_cap()) + effective_min_nu(b, false),
                                      static_cast<long>(b.nu_cap()) + effective_min_nu(a, false)));
    deg_cap = clamp_cap(std::min<long>(static_cast<long>(a.degree_cap()) + effective_min_degree(b, false),
                                       static_cast<long>(b.degree_cap()) + effective_min_degree(a, false)));
  } else {
    nu_cap = clamp_cap(std::min<long>(static_cast<long>(a.nu_cap()) + effective_min_nu(b, true),
                                      static_cast<long>(b.nu_cap()) + effective_min_nu(a, true)));
    const long d = std::min<long>(static_cast<long>(a.degree_cap()) + effective_min_degree(b, true),
                                  static_cast<long>(b.degree_cap()) + effective_min_degree(a, true));
    deg_cap = d >= kExactCap ? kExactCap : clamp_cap(d - 2);
  }
  nu_cap = std::min(nu_cap, nu_limit);
  deg_cap = std::min(deg_cap, degree_limit);
  WeylSection<R> out(metric.dimension(), nu_cap, deg_cap);
  const int shift = odd_only ? 2 : 0;
  for (const auto& [ka, ca] : a.terms()) {
    const int da = ka.weyl_degree();
    for (const auto& [kb, cb] : b.terms()) {
      if (da + kb.weyl_degree() - shift > deg_cap) continue;
      if (odd_only && (ka.alpha.total() == 0 || kb.alpha.total() == 0)) continue;
      const int sign = wedge_sign(ka.beta, kb.beta);
      if (sign == 0) continue;
      const int k0 = ka.k + kb.k - (odd_only ? 1 : 0);
      if (k0 + (odd_only ? 1 : 0) > nu_cap) continue;
      const auto& table = metric.contractions(ka.alpha, kb.alpha);
      bool any = false;
      for (const auto& c : table)
        if ((!odd_only || c.t % 2 == 1) && k0 + c.t <= nu_cap) any = true;
      if (!any) continue;
      R prod = ca * cb;
      if (sign < 0) prod = -prod;
      const FormMask beta = static_cast<FormMask>(ka.beta | kb.beta);
      for (const auto& c : table) {
        if (odd_only && c.t % 2 == 0) continue;
        if (k0 + c.t > nu_cap) continue;
        out.add(WeylKey{k0 + c.t, c.result, beta}, prod * (odd_only ? c.coefficient * 2 : c.coefficient));
      }
    }
  }
  return out;
}

}  // namespace

template <CoefficientRing R>
WeylSection<R> fiber_product(const WeylSection<R>& a, const WeylSection<R>& b, const FiberMetric& metric,
                             int nu_limit, int degree_limit) {
  return contract(a, b, metric, false, nu_limit, degree_limit);
}

template <CoefficientRing R>
WeylSection<R> graded_commutator(const WeylSection<R>& a, const WeylSection<R>& b, const FiberMetric& metric) {
  const int qa = a.form_degree();
  const int qb = b.form_degree();
  if (qa == -2 || qb == -2) throw std::invalid_argument("graded_commutator: mixed form degree");
  const WeylSection<R> ab = fiber_product(a, b, metric);
  const WeylSection<R> ba = fiber_product(b, a, metric);
  const bool odd = qa > 0 && qb > 0 && (qa * qb) % 2 == 1;
  return odd ? ab + ba : ab - ba;
}

template <CoefficientRing R>
WeylSection<R> commutator_nu(const WeylSection<R>& a, const WeylSection<R>& b, const FiberMetric& metric,
                             int nu_limit, int degree_limit) {
  return contract(a, b, metric, true, nu_limit, degree_limit);
}

template <CoefficientRing R>
WeylSection<R> delta(const WeylSection<R>& a) {
  WeylSection<R> out(a.dimension(), a.nu_cap(), shift_cap(a.degree_cap(), -1));
  for (const auto& [key, c] : a.terms()) {
    for (int l = 0; l < a.dimension(); ++l) {
      if (key.alpha[l] == 0) continue;
      const auto bit = static_cast<FormMask>(1u << l);
      const int sign = wedge_sign(bit, key.beta);
      if (sign == 0) continue;
      WeylKey nk = key;
      nk.alpha[l] = static_cast<std::uint8_t>(nk.alpha[l] - 1);
      nk.beta = static_cast<FormMask>(key.beta | bit);
      out.add(nk, c * Rational(sign * key.alpha[l]));
    }
  }
  return out;
}

template <CoefficientRing R>
WeylSection<R> delta_inv(const WeylSection<R>& a) {
  WeylSection<R> out(a.dimension(), a.nu_cap(), shift_cap(a.degree_cap(), 1));
  for (const auto& [key, c] : a.terms()) {
    const int p = key.alpha.total();
    const int q = key.form_degree();
    if (p + q == 0 || q == 0) continue;
    for (int k = 0; k < a.dimension(); ++k) {
      if (!(key.beta & (1u << k))) continue;
      WeylKey nk = key;
      nk.alpha[k] = static_cast<std::uint8_t>(nk.alpha[k] + 1);
      nk.beta = static_cast<FormMask>(key.beta & ~(1u << k));
      out.add(nk, c * Rational(interior_sign(key.beta, k), p + q));
    }
  }
  return out;
}

template <CoefficientRing R>
WeylSection<R> d_exterior(const WeylSection<R>& a) {
  WeylSection<R> out(a.dimension(), a.nu_cap(), a.degree_cap());
  for (const auto& [key, c] : a.terms()) {
    for (int i = 0; i < a.dimension(); ++i) {
      const auto bit = static_cast<FormMask>(1u << i);
      const int sign = wedge_sign(bit, key.beta);
      if (sign == 0) continue;
      const R dc = c.derivative(i);
      if (dc.is_zero()) continue;
      WeylKey nk = key;
      nk.beta = static_cast<FormMask>(key.beta | bit);
      out.add(nk, sign > 0 ? dc : -dc);
    }
  }
  return out;
}

template <CoefficientRing R>
WeylSection<R> nu_divide(const WeylSection<R>& a) {
  WeylSection<R> out(a.dimension(), shift_cap(a.nu_cap(), -1), shift_cap(a.degree_cap(), -2));
  for (const auto& [key, c] : a.terms()) {
    if (key.k == 0) throw std::domain_error("nu_divide: term without a factor of nu");
    out.add(WeylKey{key.k - 1, key.alpha, key.beta}, c);
  }
  return out;
}

template <CoefficientRing R>
NuSeries<R> eval_y0(const WeylSection<R>& a) {
  NuSeries<R> out;
  int top = -1;
  for (const auto& [key, c] : a.terms()) {
    if (key.beta != 0) throw std::invalid_argument("eval_y0: nonzero form degree");
    if (key.alpha.total() == 0) {
      out.set(key.k, c);
      top = std::max(top, key.k);
    }
  }
  const int by_degree = a.degree_cap() >= kExactCap ? kExactCap : (a.degree_cap() < 0 ? -1 : a.degree_cap() / 2);
  int certified = std::min(a.nu_cap(), by_degree);
  if (certified >= kExactCap) certified = top;
  if (certified >= 0) {
    out.coefficients.resize(static_cast<std::size_t>(certified + 1));
  } else {
    out.coefficients.clear();
  }
  return out;
}

template <CoefficientRing R>
WeylSection<R> interior(const std::vector<R>& X, const WeylSection<R>& a) {
  WeylSection<R> out(a.dimension(), a.nu_cap(), a.degree_cap());
  for (const auto& [key, c] : a.terms()) {
    for (int k = 0; k < a.dimension() && k < static_cast<int>(X.size()); ++k) {
      if (!(key.beta & (1u << k)) || X[static_cast<std::size_t>(k)].is_zero()) continue;
      WeylKey nk = key;
      nk.beta = static_cast<FormMask>(key.beta & ~(1u << k));
      const R v = c * X[static_cast<std::size_t>(k)];
      out.add(nk, interior_sign(key.beta, k) > 0 ? v : -v);
    }
  }
  return out;
}

#define FEDTRACE_INSTANTIATE_WEYL(R)                                                                  \
  template class WeylSection<R>;                                                                     \
  template WeylSection<R> fiber_product(const WeylSection<R>&, const WeylSection<R>&, const FiberMetric&, int, int);   \
  template WeylSection<R> graded_commutator(const WeylSection<R>&, const WeylSection<R>&,               \
                                            const FiberMetric&);                                     \
  template WeylSection<R> commutator_nu(const WeylSection<R>&, const WeylSection<R>&, const FiberMetric&, int, int);   \
  template WeylSection<R> delta(const WeylSection<R>&);                                              \
  template WeylSection<R> delta_inv(const WeylSection<R>&);                                          \
  template WeylSection<R> d_exterior(const WeylSection<R>&);                                         \
  template WeylSection<R> nu_divide(const WeylSection<R>&);                                          \
  template NuSeries<R> eval_y0(const WeylSection<R>&);                                               \
  template WeylSection<R> interior(const std::vector<R>&, const WeylSection<R>&);

FEDTRACE_INSTANTIATE_WEYL(JetPoly)
FEDTRACE_INSTANTIATE_WEYL(TrigPoly)
FEDTRACE_INSTANTIATE_WEYL(ProfileRing)
FEDTRACE_INSTANTIATE_WEYL(Dual<TrigPoly>)

}  // namespace fedtrace
