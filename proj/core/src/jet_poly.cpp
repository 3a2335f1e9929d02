#include "fedtrace/jet_poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace fedtrace {

JetPoly::JetPoly(const Rational& c, int n, int jet_order) : n_(n), jet_order_(jet_order) {
  add_term(Exponents{}, c);
}

JetPoly JetPoly::coordinate(int i, int n, int jet_order) {
  return monomial(Exponents::unit(i), Rational(1), n, jet_order);
}

JetPoly JetPoly::monomial(const Exponents& alpha, const Rational& c, int n, int jet_order) {
  for (int i = n; i < kMaxDim; ++i)
    if (alpha[i] != 0) throw std::out_of_range("monomial exponent beyond chart dimension");
  JetPoly p;
  p.n_ = n;
  p.jet_order_ = jet_order;
  p.add_term(alpha, c);
  return p;
}

JetPoly JetPoly::with_base_point(std::vector<Rational> base) const {
  JetPoly out = *this;
  out.base_ = std::move(base);
  return out;
}

Rational JetPoly::coefficient(const Exponents& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? Rational(0) : it->second;
}

int JetPoly::degree() const {
  int d = -1;
  for (const auto& [alpha, c] : terms_) d = std::max(d, alpha.total());
  return d;
}

void JetPoly::add_term(const Exponents& alpha, const Rational& c) {
  if (c == 0 || alpha.total() > jet_order_) return;
  auto [it, inserted] = terms_.try_emplace(alpha, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void JetPoly::merge_meta(const JetPoly& b) {
  n_ = std::max(n_, b.n_);
  if (base_.empty()) base_ = b.base_;
}

JetPoly JetPoly::derivative(int i) const {
  if (i < 0 || (n_ > 0 && i >= n_) || i >= kMaxDim)
    throw std::out_of_range("JetPoly::derivative: unsupported index");
  JetPoly out;
  out.n_ = n_;
  out.base_ = base_;
  out.jet_order_ = jet_order_ == kUnbounded ? kUnbounded : jet_order_ - 1;
  for (const auto& [alpha, c] : terms_) {
    if (alpha[i] == 0) continue;
    Exponents beta = alpha;
    beta[i] = static_cast<std::uint8_t>(beta[i] - 1);
    out.add_term(beta, c * alpha[i]);
  }
  return out;
}

Rational JetPoly::evaluate(std::span<const Rational> x) const {
  Rational total = 0;
  for (const auto& [alpha, c] : terms_) {
    Rational v = c;
    for (int i = 0; i < kMaxDim; ++i) {
      if (alpha[i] == 0) continue;
      if (static_cast<std::size_t>(i) >= x.size())
        throw std::out_of_range("JetPoly::evaluate: point has too few coordinates");
      Rational xi = x[static_cast<std::size_t>(i)];
      if (static_cast<std::size_t>(i) < base_.size()) xi -= base_[static_cast<std::size_t>(i)];
      for (int p = 0; p < alpha[i]; ++p) v *= xi;
    }
    total += v;
  }
  return total;
}

JetPoly JetPoly::truncated(int jet_order) const {
  JetPoly out;
  out.n_ = n_;
  out.base_ = base_;
  out.jet_order_ = std::min(jet_order_, jet_order);
  for (const auto& [alpha, c] : terms_) out.add_term(alpha, c);
  return out;
}

JetPoly& JetPoly::operator+=(const JetPoly& b) {
  merge_meta(b);
  jet_order_ = std::min(jet_order_, b.jet_order_);
  if (jet_order_ != kUnbounded) std::erase_if(terms_, [&](const auto& t) { return t.first.total() > jet_order_; });
  for (const auto& [alpha, c] : b.terms_) add_term(alpha, c);
  return *this;
}

JetPoly& JetPoly::operator-=(const JetPoly& b) {
  merge_meta(b);
  jet_order_ = std::min(jet_order_, b.jet_order_);
  if (jet_order_ != kUnbounded) std::erase_if(terms_, [&](const auto& t) { return t.first.total() > jet_order_; });
  for (const auto& [alpha, c] : b.terms_) add_term(alpha, -c);
  return *this;
}

JetPoly operator*(const JetPoly& a, const JetPoly& b) {
  JetPoly out;
  out.merge_meta(a);
  out.merge_meta(b);
  out.jet_order_ = std::min(a.jet_order_, b.jet_order_);
  for (const auto& [alpha, ca] : a.terms_)
    for (const auto& [beta, cb] : b.terms_) out.add_term(alpha + beta, ca * cb);
  return out;
}

JetPoly operator*(JetPoly a, const Rational& q) {
  if (q == 0) {
    a.terms_.clear();
    return a;
  }
  for (auto& [alpha, c] : a.terms_) c *= q;
  return a;
}

JetPoly JetPoly::operator-() const { return *this * Rational(-1); }

std::string JetPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [alpha, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += c.get_str();
    for (int i = 0; i < kMaxDim; ++i) {
      if (alpha[i] == 0) continue;
      out += "*x" + std::to_string(i + 1);
      if (alpha[i] > 1) out += "^" + std::to_string(alpha[i]);
    }
  }
  return out;
}

}  // namespace fedtrace
