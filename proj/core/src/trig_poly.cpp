#include "fedtrace/trig_poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace fedtrace {

TrigPoly::TrigPoly(const Rational& c, int n) : n_(n) { add(Frequency{}, false, c); }

TrigPoly TrigPoly::cos_mode(const Frequency& k, const Rational& c, int n) {
  TrigPoly p;
  p.n_ = n;
  p.add(k, false, c);
  return p;
}

TrigPoly TrigPoly::sin_mode(const Frequency& k, const Rational& c, int n) {
  TrigPoly p;
  p.n_ = n;
  p.add(k, true, c);
  return p;
}

void TrigPoly::add(const Frequency& k, bool is_sin, const Rational& c) {
  if (c == 0) return;
  const bool flip = !k.is_canonical();
  const Frequency key = flip ? -k : k;
  if (is_sin && key.is_zero()) return;
  auto [it, inserted] = modes_.try_emplace(key);
  Rational& slot = is_sin ? it->second.sin_coef : it->second.cos_coef;
  // sin(-x) = -sin(x)
  if (flip && is_sin) {
    slot -= c;
  } else {
    slot += c;
  }
  if (!inserted && it->second.cos_coef == 0 && it->second.sin_coef == 0) modes_.erase(it);
}

Rational TrigPoly::mean() const {
  auto it = modes_.find(Frequency{});
  return it == modes_.end() ? Rational(0) : it->second.cos_coef;
}

int TrigPoly::max_frequency() const {
  int m = 0;
  for (const auto& [k, mode] : modes_)
    for (int i = 0; i < kMaxDim; ++i) m = std::max(m, std::abs(static_cast<int>(k[i])));
  return m;
}

TrigPoly TrigPoly::derivative(int i) const {
  if (i < 0 || (n_ > 0 && i >= n_) || i >= kMaxDim)
    throw std::out_of_range("TrigPoly::derivative: unsupported index");
  TrigPoly out;
  out.n_ = n_;
  for (const auto& [k, mode] : modes_) {
    if (k[i] == 0) continue;
    // d/dx cos(k.x) = -k_i sin(k.x), d/dx sin(k.x) = k_i cos(k.x)
    out.add(k, true, -mode.cos_coef * k[i]);
    out.add(k, false, mode.sin_coef * k[i]);
  }
  return out;
}

double TrigPoly::evaluate(std::span<const double> x) const {
  double total = 0.0;
  for (const auto& [k, mode] : modes_) {
    double phase = 0.0;
    for (int i = 0; i < kMaxDim; ++i)
      if (k[i] != 0) phase += k[i] * x[static_cast<std::size_t>(i)];
    total += mode.cos_coef.get_d() * std::cos(phase) + mode.sin_coef.get_d() * std::sin(phase);
  }
  return total;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& b) {
  n_ = std::max(n_, b.n_);
  for (const auto& [k, mode] : b.modes_) {
    add(k, false, mode.cos_coef);
    add(k, true, mode.sin_coef);
  }
  return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& b) {
  n_ = std::max(n_, b.n_);
  for (const auto& [k, mode] : b.modes_) {
    add(k, false, -mode.cos_coef);
    add(k, true, -mode.sin_coef);
  }
  return *this;
}

TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
  TrigPoly out;
  out.n_ = std::max(a.n_, b.n_);
  // accumulates twice the product; halved once at the end
  Rational h;
  for (const auto& [p, ma] : a.modes_) {
    for (const auto& [q, mb] : b.modes_) {
      const Frequency sum = p + q;
      const Frequency diff = p - q;
      if (ma.cos_coef != 0 && mb.cos_coef != 0) {
        mpq_mul(h.get_mpq_t(), ma.cos_coef.get_mpq_t(), mb.cos_coef.get_mpq_t());
        out.add(diff, false, h);
        out.add(sum, false, h);
      }
      if (ma.sin_coef != 0 && mb.sin_coef != 0) {
        mpq_mul(h.get_mpq_t(), ma.sin_coef.get_mpq_t(), mb.sin_coef.get_mpq_t());
        out.add(diff, false, h);
        out.add(sum, false, -h);
      }
      if (ma.sin_coef != 0 && mb.cos_coef != 0) {
        // sin p cos q = (sin(p+q) + sin(p-q)) / 2
        mpq_mul(h.get_mpq_t(), ma.sin_coef.get_mpq_t(), mb.cos_coef.get_mpq_t());
        out.add(sum, true, h);
        out.add(diff, true, h);
      }
      if (ma.cos_coef != 0 && mb.sin_coef != 0) {
        // cos p sin q = (sin(p+q) - sin(p-q)) / 2
        mpq_mul(h.get_mpq_t(), ma.cos_coef.get_mpq_t(), mb.sin_coef.get_mpq_t());
        out.add(sum, true, h);
        out.add(diff, true, -h);
      }
    }
  }
  for (auto& [k, mode] : out.modes_) {
    mpq_div_2exp(mode.cos_coef.get_mpq_t(), mode.cos_coef.get_mpq_t(), 1);
    mpq_div_2exp(mode.sin_coef.get_mpq_t(), mode.sin_coef.get_mpq_t(), 1);
  }
  return out;
}

TrigPoly operator*(TrigPoly a, const Rational& q) {
  if (q == 0) {
    a.modes_.clear();
    return a;
  }
  for (auto& [k, mode] : a.modes_) {
    mode.cos_coef *= q;
    mode.sin_coef *= q;
  }
  return a;
}

TrigPoly TrigPoly::operator-() const { return *this * Rational(-1); }

std::string TrigPoly::to_string() const {
  if (modes_.empty()) return "0";
  auto phase = [](const Frequency& k) {
    std::string s;
    for (int i = 0; i < kMaxDim; ++i) {
      if (k[i] == 0) continue;
      if (!s.empty() && k[i] > 0) s += "+";
      if (k[i] == -1)
        s += "-";
      else if (k[i] != 1)
        s += std::to_string(k[i]) + "*";
      s += "x" + std::to_string(i + 1);
    }
    return s;
  };
  std::string out;
  for (const auto& [k, mode] : modes_) {
    if (mode.cos_coef != 0) {
      if (!out.empty()) out += " + ";
      out += mode.cos_coef.get_str();
      if (!k.is_zero()) out += "*cos(" + phase(k) + ")";
    }
    if (mode.sin_coef != 0) {
      if (!out.empty()) out += " + ";
      out += mode.sin_coef.get_str() + "*sin(" + phase(k) + ")";
    }
  }
  return out;
}

Scalar integrate_torus(const TrigPoly& f, int n) { return Scalar(f.mean(), n); }

}  // namespace fedtrace
