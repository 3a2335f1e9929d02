#include "fedtrace/upoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace fedtrace {

UPoly::UPoly(std::vector<Rational> coefficients) : c_(std::move(coefficients)) { trim(); }

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational UPoly::coefficient(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return 0;
  return c_[static_cast<std::size_t>(k)];
}

UPoly UPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<long>(k);
  return UPoly(std::move(d));
}

UPoly UPoly::antiderivative() const {
  if (c_.empty()) return {};
  std::vector<Rational> d(c_.size() + 1);
  for (std::size_t k = 0; k < c_.size(); ++k) d[k + 1] = c_[k] / static_cast<long>(k + 1);
  return UPoly(std::move(d));
}

Rational UPoly::evaluate(const Rational& z) const {
  Rational v = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * z + *it;
  return v;
}

double UPoly::evaluate(double z) const {
  double v = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * z + it->get_d();
  return v;
}

UPoly UPoly::monic() const {
  if (c_.empty() || c_.back() == 1) return *this;
  return *this * (Rational(1) / c_.back());
}

UPoly& UPoly::operator+=(const UPoly& b) {
  if (b.c_.size() > c_.size()) c_.resize(b.c_.size());
  for (std::size_t k = 0; k < b.c_.size(); ++k) c_[k] += b.c_[k];
  trim();
  return *this;
}

UPoly& UPoly::operator-=(const UPoly& b) {
  if (b.c_.size() > c_.size()) c_.resize(b.c_.size());
  for (std::size_t k = 0; k < b.c_.size(); ++k) c_[k] -= b.c_[k];
  trim();
  return *this;
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.c_.empty() || b.c_.empty()) return {};
  std::vector<Rational> out(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  }
  return UPoly(std::move(out));
}

UPoly operator*(UPoly a, const Rational& q) {
  if (q == 0) return {};
  for (auto& c : a.c_) c *= q;
  return a;
}

std::pair<UPoly, UPoly> UPoly::divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw std::domain_error("UPoly::divmod: division by zero polynomial");
  if (a.degree() < b.degree()) return {UPoly{}, a};
  std::vector<Rational> rem = a.c_;
  std::vector<Rational> quot(static_cast<std::size_t>(a.degree() - b.degree() + 1));
  const Rational inv_lead = Rational(1) / b.leading();
  const int db = b.degree();
  for (int k = a.degree(); k >= db; --k) {
    const Rational& top = rem[static_cast<std::size_t>(k)];
    if (top == 0) continue;
    const Rational factor = top * inv_lead;
    quot[static_cast<std::size_t>(k - db)] = factor;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k - db + j)] -= factor * b.c_[static_cast<std::size_t>(j)];
  }
  rem.resize(static_cast<std::size_t>(db));
  return {UPoly(std::move(quot)), UPoly(std::move(rem))};
}

UPoly UPoly::gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly r = divmod(a, b).second;
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

std::string UPoly::to_string(const char* var) const {
  if (c_.empty()) return "0";
  std::string out;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] == 0) continue;
    if (!out.empty()) out += " + ";
    out += c_[k].get_str();
    if (k >= 1) out += std::string("*") + var;
    if (k >= 2) out += "^" + std::to_string(k);
  }
  return out;
}

}  // namespace fedtrace
