#include "fedtrace/profile_ring.hpp"

#include <cmath>
#include <stdexcept>

namespace fedtrace {

namespace {

// Adds c * trig(h theta) into modes, folding negative h.
void add_trig(std::map<int, std::pair<UPoly, UPoly>>& modes, int h, bool is_sin, const UPoly& c) {
  if (c.is_zero()) return;
  UPoly value = c;
  if (h < 0) {
    h = -h;
    if (is_sin) value = -value;
  }
  if (is_sin && h == 0) return;
  auto& slot = modes[h];
  (is_sin ? slot.second : slot.first) += value;
}

}  // namespace

ProfileRing::ProfileRing(const Rational& c) : ProfileRing(UPoly(c)) {}

ProfileRing::ProfileRing(const UPoly& p) {
  if (!p.is_zero()) modes_[0].first = p;
}

ProfileRing::ProfileRing(const UPoly& num, const UPoly& den) {
  if (den.is_zero()) throw std::domain_error("ProfileRing: zero denominator");
  if (!num.is_zero()) modes_[0].first = num;
  den_ = den;
  normalize();
}

ProfileRing ProfileRing::cos_theta(int h, const UPoly& coefficient) {
  ProfileRing out;
  add_trig(out.modes_, h, false, coefficient);
  out.normalize();
  return out;
}

ProfileRing ProfileRing::sin_theta(int h, const UPoly& coefficient) {
  ProfileRing out;
  add_trig(out.modes_, h, true, coefficient);
  out.normalize();
  return out;
}

bool ProfileRing::is_invariant() const {
  return modes_.empty() || (modes_.size() == 1 && modes_.begin()->first == 0);
}

UPoly ProfileRing::invariant_numerator() const {
  auto it = modes_.find(0);
  return it == modes_.end() ? UPoly{} : it->second.first;
}

ProfileRing ProfileRing::theta_average() const { return ProfileRing(invariant_numerator(), den_); }

void ProfileRing::normalize() {
  for (auto it = modes_.begin(); it != modes_.end();) {
    if (it->second.first.is_zero() && it->second.second.is_zero())
      it = modes_.erase(it);
    else
      ++it;
  }
  if (modes_.empty()) {
    den_ = UPoly(Rational(1));
    return;
  }
  if (den_.degree() > 0) {
    UPoly g = den_;
    for (const auto& [h, pq] : modes_) {
      if (g.degree() == 0) break;
      if (!pq.first.is_zero()) g = UPoly::gcd(g, pq.first);
      if (g.degree() == 0) break;
      if (!pq.second.is_zero()) g = UPoly::gcd(g, pq.second);
    }
    if (g.degree() > 0) {
      den_ = UPoly::divmod(den_, g).first;
      for (auto& [h, pq] : modes_) {
        if (!pq.first.is_zero()) pq.first = UPoly::divmod(pq.first, g).first;
        if (!pq.second.is_zero()) pq.second = UPoly::divmod(pq.second, g).first;
      }
    }
  }
  if (den_.leading() != 1) {
    const Rational inv = Rational(1) / den_.leading();
    den_ = den_ * inv;
    for (auto& [h, pq] : modes_) {
      pq.first = pq.first * inv;
      pq.second = pq.second * inv;
    }
  }
}

void ProfileRing::add_scaled(ModeMap& into, const ModeMap& from, const UPoly& factor, bool negate) {
  for (const auto& [h, pq] : from) {
    UPoly c = pq.first * factor;
    UPoly s = pq.second * factor;
    if (negate) {
      c = -c;
      s = -s;
    }
    add_trig(into, h, false, c);
    add_trig(into, h, true, s);
  }
}

ProfileRing& ProfileRing::operator+=(const ProfileRing& b) {
  if (b.is_zero()) return *this;
  if (is_zero()) return *this = b;
  if (den_ == b.den_) {
    add_scaled(modes_, b.modes_, UPoly(Rational(1)), false);
  } else {
    const UPoly g = UPoly::gcd(den_, b.den_);
    const UPoly mine = UPoly::divmod(b.den_, g).first;
    const UPoly theirs = UPoly::divmod(den_, g).first;
    ModeMap merged;
    add_scaled(merged, modes_, mine, false);
    add_scaled(merged, b.modes_, theirs, false);
    modes_ = std::move(merged);
    den_ = den_ * mine;
  }
  normalize();
  return *this;
}

ProfileRing& ProfileRing::operator-=(const ProfileRing& b) { return *this += -b; }

ProfileRing operator*(const ProfileRing& a, const ProfileRing& b) {
  ProfileRing out;
  if (a.is_zero() || b.is_zero()) return out;
  for (const auto& [h1, pq1] : a.modes_) {
    for (const auto& [h2, pq2] : b.modes_) {
      const auto& [c1, s1] = pq1;
      const auto& [c2, s2] = pq2;
      const Rational half(1, 2);
      if (!c1.is_zero() && !c2.is_zero()) {
        const UPoly p = c1 * c2 * half;
        add_trig(out.modes_, h1 - h2, false, p);
        add_trig(out.modes_, h1 + h2, false, p);
      }
      if (!s1.is_zero() && !s2.is_zero()) {
        const UPoly p = s1 * s2 * half;
        add_trig(out.modes_, h1 - h2, false, p);
        add_trig(out.modes_, h1 + h2, false, -p);
      }
      if (!s1.is_zero() && !c2.is_zero()) {
        const UPoly p = s1 * c2 * half;
        add_trig(out.modes_, h1 + h2, true, p);
        add_trig(out.modes_, h1 - h2, true, p);
      }
      if (!c1.is_zero() && !s2.is_zero()) {
        const UPoly p = c1 * s2 * half;
        add_trig(out.modes_, h1 + h2, true, p);
        add_trig(out.modes_, h1 - h2, true, -p);
      }
    }
  }
  out.den_ = a.den_ * b.den_;
  out.normalize();
  return out;
}

ProfileRing operator*(ProfileRing a, const Rational& q) {
  if (q == 0) return ProfileRing{};
  for (auto& [h, pq] : a.modes_) {
    pq.first = pq.first * q;
    pq.second = pq.second * q;
  }
  return a;
}

ProfileRing operator/(const ProfileRing& a, const ProfileRing& b) {
  if (!b.is_invariant() || b.is_zero())
    throw std::domain_error("ProfileRing: division by a theta-dependent or zero element");
  ProfileRing inv;
  inv.modes_[0].first = b.den_;
  inv.den_ = b.invariant_numerator();
  inv.normalize();
  return a * inv;
}

ProfileRing ProfileRing::derivative(int i) const {
  if (i == kTheta) {
    ProfileRing out;
    for (const auto& [h, pq] : modes_) {
      if (h == 0) continue;
      // d/dtheta cos(h t) = -h sin(h t); d/dtheta sin(h t) = h cos(h t)
      add_trig(out.modes_, h, true, pq.first * Rational(-h));
      add_trig(out.modes_, h, false, pq.second * Rational(h));
    }
    out.den_ = den_;
    out.normalize();
    return out;
  }
  if (i != kZ) throw std::out_of_range("ProfileRing::derivative: unsupported index");
  if (is_zero()) return {};
  // (N / d)' = (N' d - N d') / d^2
  const UPoly dprime = den_.derivative();
  ProfileRing out;
  for (const auto& [h, pq] : modes_) {
    add_trig(out.modes_, h, false, pq.first.derivative() * den_ - pq.first * dprime);
    add_trig(out.modes_, h, true, pq.second.derivative() * den_ - pq.second * dprime);
  }
  out.den_ = den_ * den_;
  out.normalize();
  return out;
}

Rational ProfileRing::evaluate(const Rational& z) const {
  if (!is_invariant()) throw std::domain_error("ProfileRing::evaluate: theta-dependent element");
  const Rational d = den_.evaluate(z);
  if (d == 0) throw std::domain_error("ProfileRing::evaluate: pole");
  return invariant_numerator().evaluate(z) / d;
}

double ProfileRing::evaluate(double z, double theta) const {
  double num = 0.0;
  for (const auto& [h, pq] : modes_)
    num += pq.first.evaluate(z) * std::cos(h * theta) + pq.second.evaluate(z) * std::sin(h * theta);
  return num / den_.evaluate(z);
}

std::string ProfileRing::to_string() const {
  if (modes_.empty()) return "0";
  std::string num;
  for (const auto& [h, pq] : modes_) {
    if (!pq.first.is_zero()) {
      if (!num.empty()) num += " + ";
      num += "(" + pq.first.to_string() + ")";
      if (h != 0) num += "*cos(" + std::to_string(h) + "*theta)";
    }
    if (!pq.second.is_zero()) {
      if (!num.empty()) num += " + ";
      num += "(" + pq.second.to_string() + ")*sin(" + std::to_string(h) + "*theta)";
    }
  }
  if (den_.is_one()) return num;
  return "[" + num + "] / (" + den_.to_string() + ")";
}

}  // namespace fedtrace
