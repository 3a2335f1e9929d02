#include "fedtrace/scalar.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fedtrace {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool valid_integer(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  text = trim(text);
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? "1" : text.substr(slash + 1);
  if (!valid_integer(num) || !valid_integer(den) || den[0] == '-' || den[0] == '+')
    throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
  std::string num_s(num);
  if (num_s[0] == '+') num_s.erase(0, 1);
  const mpz_class numerator(num_s);
  const mpz_class denominator{std::string(den)};
  if (denominator == 0) throw std::invalid_argument("zero denominator");
  Rational q(numerator, denominator);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

double to_double(const Rational& q) { return q.get_d(); }

Scalar::Scalar(const Rational& q, int tau_power) { set(tau_power, q); }

Rational Scalar::coefficient(int k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Scalar::set(int k, Rational q) {
  if (q == 0)
    terms_.erase(k);
  else
    terms_[k] = std::move(q);
}

Scalar& Scalar::operator+=(const Scalar& other) {
  for (const auto& [k, q] : other.terms_) set(k, coefficient(k) + q);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& other) {
  for (const auto& [k, q] : other.terms_) set(k, coefficient(k) - q);
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& other) {
  std::map<int, Rational> out;
  for (const auto& [ka, qa] : terms_)
    for (const auto& [kb, qb] : other.terms_) out[ka + kb] += qa * qb;
  terms_.clear();
  for (auto& [k, q] : out) set(k, std::move(q));
  return *this;
}

Scalar& Scalar::operator*=(const Rational& q) {
  if (q == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, c] : terms_) c *= q;
  return *this;
}

Scalar Scalar::operator-() const {
  Scalar out = *this;
  for (auto& [k, c] : out.terms_) c = -c;
  return out;
}

double Scalar::to_double() const {
  const double tau = 2.0 * std::numbers::pi;
  double v = 0.0;
  for (const auto& [k, q] : terms_) v += q.get_d() * std::pow(tau, k);
  return v;
}

std::string Scalar::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [k, q] : terms_) {
    if (!out.empty()) out += " + ";
    out += q.get_str();
    if (k != 0) out += "*(2pi)^" + std::to_string(k);
  }
  return out;
}

Scalar Scalar::parse(std::string_view text) {
  Scalar out;
  text = trim(text);
  if (text == "0") return out;
  while (!text.empty()) {
    auto plus = text.find(" + ");
    std::string_view piece = trim(text.substr(0, plus));
    text = plus == std::string_view::npos ? std::string_view{} : text.substr(plus + 3);
    int k = 0;
    auto star = piece.find("*(2pi)^");
    if (star != std::string_view::npos) {
      std::string exponent(piece.substr(star + 7));
      if (!valid_integer(exponent)) throw std::invalid_argument("bad tau exponent in scalar");
      k = std::stoi(exponent);
      piece = piece.substr(0, star);
    }
    out += Scalar(parse_rational(piece), k);
  }
  return out;
}

}  // namespace fedtrace
