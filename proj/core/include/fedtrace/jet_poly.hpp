#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "fedtrace/multi_index.hpp"
#include "fedtrace/scalar.hpp"

namespace fedtrace {

/// Truncated Taylor polynomial in n chart coordinates around a base point.
///
/// Stored monomials are in the shifted variables (x - base). Every stored
/// multi-index has total degree <= jet_order; products re-truncate.
class JetPoly {
 public:
  static constexpr int kUnbounded = 1 << 20;

  JetPoly() = default;
  explicit JetPoly(const Rational& c, int n = 0, int jet_order = kUnbounded);

  /// The coordinate function x^i (relative to the base point).
  static JetPoly coordinate(int i, int n, int jet_order = kUnbounded);
  static JetPoly monomial(const Exponents& alpha, const Rational& c, int n,
                          int jet_order = kUnbounded);

  /// Expansion point; empty means the origin.
  const std::vector<Rational>& base_point() const { return base_; }
  JetPoly with_base_point(std::vector<Rational> base) const;

  int dimension() const { return n_; }
  int jet_order() const { return jet_order_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  Rational coefficient(const Exponents& alpha) const;
  int degree() const;

  JetPoly derivative(int i) const;
  Rational evaluate(std::span<const Rational> x) const;
  JetPoly truncated(int jet_order) const;

  JetPoly& operator+=(const JetPoly& b);
  JetPoly& operator-=(const JetPoly& b);
  friend JetPoly operator+(JetPoly a, const JetPoly& b) { return a += b; }
  friend JetPoly operator-(JetPoly a, const JetPoly& b) { return a -= b; }
  friend JetPoly operator*(const JetPoly& a, const JetPoly& b);
  friend JetPoly operator*(JetPoly a, const Rational& q);
  JetPoly operator-() const;

  friend bool operator==(const JetPoly& a, const JetPoly& b) { return a.terms_ == b.terms_; }

  std::string to_string() const;

 private:
  void add_term(const Exponents& alpha, const Rational& c);
  void merge_meta(const JetPoly& b);

  int n_ = 0;
  int jet_order_ = kUnbounded;
  std::vector<Rational> base_;
  std::map<Exponents, Rational> terms_;
};

}  // namespace fedtrace
