#include <doctest.h>

#include "fedtrace/jet_poly.hpp"
#include "fedtrace/random_weyl.hpp"
#include "fedtrace/trig_poly.hpp"
#include "fedtrace/weyl.hpp"

using namespace fedtrace;

namespace {

using W = WeylSection<JetPoly>;

JetPoly c(const Rational& q) { return JetPoly(q, 2); }

Exponents exps(int a0, int a1 = 0, int a2 = 0, int a3 = 0) {
  Exponents e;
  e[0] = static_cast<std::uint8_t>(a0);
  e[1] = static_cast<std::uint8_t>(a1);
  e[2] = static_cast<std::uint8_t>(a2);
  e[3] = static_cast<std::uint8_t>(a3);
  return e;
}

constexpr FormMask dx1 = 1;
constexpr FormMask dx2 = 2;

W y1() { return W::y(2, 0); }
W y2() { return W::y(2, 1); }

}  // namespace

TEST_CASE("fiber metric inverse") {
  const FiberMetric g = FiberMetric::darboux(2);
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      Rational s = 0;
      for (int j = 0; j < 4; ++j) s += g.lambda(i, j) * g.omega(j, k);
      CHECK(s == (i == k ? 1 : 0));
    }
  CHECK_THROWS(FiberMetric(2, {Rational(0), Rational(1), Rational(1), Rational(0)}));
  CHECK_THROWS(FiberMetric(2, {Rational(0), Rational(0), Rational(0), Rational(0)}));
}

TEST_CASE("fiber product examples") {
  const FiberMetric g = FiberMetric::darboux(1);
  const Rational l12 = g.lambda(0, 1);
  W expected = W::monomial(2, 0, exps(1, 1), 0, c(1)) + W::monomial(2, 1, exps(0), 0, c(l12 / 2));
  CHECK(fiber_product(y1(), y2(), g) == expected);

  RandomSource rng(1);
  const W b = random_section<JetPoly>(rng, 2, {6, 3, 1, -1}, [&] { return rng.jet_poly(2, 2, 2); });
  CHECK(fiber_product(W::function(2, c(1)), b, g) == b);
  CHECK(fiber_product(b, W::function(2, c(1)), g) == b);

  const W s = W::monomial(2, 0, exps(1), dx1, c(1));
  CHECK(fiber_product(s, s, g).is_zero());
  CHECK_THROWS(fiber_product(W::y(4, 0), y1(), g));
}

TEST_CASE("graded commutator examples") {
  const FiberMetric g = FiberMetric::darboux(1);
  const Rational l12 = g.lambda(0, 1);
  CHECK(graded_commutator(y1(), y2(), g) == W::monomial(2, 1, exps(0), 0, c(l12)));

  RandomSource rng(2);
  const W a = random_section<JetPoly>(rng, 2, {6, 3, 1, 1}, [&] { return rng.jet_poly(2, 2, 2); });
  const W central = W::monomial(2, 2, exps(0), dx1 | dx2, c(Rational(3, 2)));
  CHECK(graded_commutator(a, central, g).is_zero());

  // y1 dx1 o y2 dx2 + y2 dx2 o y1 dx1 = (y1 o y2 - y2 o y1) dx1 ^ dx2
  const W s = W::monomial(2, 0, exps(1), dx1, c(1));
  const W t = W::monomial(2, 0, exps(0, 1), dx2, c(1));
  CHECK(graded_commutator(s, t, g) == W::monomial(2, 1, exps(0), dx1 | dx2, c(l12)));

  const W mixed = s + y1();
  CHECK_THROWS(graded_commutator(mixed, t, g));
}

TEST_CASE("delta, delta inverse, d and nu division examples") {
  CHECK(delta(W::monomial(2, 0, exps(2), 0, c(Rational(1, 2)))) == W::monomial(2, 0, exps(1), dx1, c(1)));
  CHECK(delta(W::monomial(2, 0, exps(1), dx1, c(1))).is_zero());
  CHECK(delta(W::function(2, JetPoly::coordinate(0, 2))).is_zero());

  CHECK(delta_inv(W::monomial(2, 0, exps(1), dx1, c(1))) == W::monomial(2, 0, exps(2), 0, c(Rational(1, 2))));
  CHECK(delta_inv(W::function(2, JetPoly::coordinate(1, 2))).is_zero());
  CHECK(delta_inv(W::monomial(2, 0, exps(0), dx1, c(1))) == y1());

  CHECK(d_exterior(W::function(2, JetPoly::coordinate(0, 2))) == W::monomial(2, 0, exps(0), dx1, c(1)));
  CHECK(d_exterior(W::monomial(2, 0, exps(1), 0, JetPoly::coordinate(1, 2))) == W::monomial(2, 0, exps(1), dx2, c(1)));

  CHECK(nu_divide(W::monomial(2, 1, exps(0), 0, c(-1))) == W::function(2, c(-1)));
  CHECK(nu_divide(W(2)).is_zero());
  CHECK_THROWS_AS(nu_divide(y1()), std::domain_error);
}

TEST_CASE("eval at y = 0 examples") {
  const JetPoly f = JetPoly::coordinate(0, 2);
  const JetPoly h = JetPoly::coordinate(1, 2) * JetPoly::coordinate(1, 2);
  const W a = W::function(2, f) + W::monomial(2, 0, exps(1), 0, h);
  const NuSeries<JetPoly> s = eval_y0(a);
  CHECK(s[0] == f);
  CHECK(s[1].is_zero());
  const NuSeries<JetPoly> s2 = eval_y0(W::monomial(2, 2, exps(0), 0, h));
  CHECK(s2.order() == 2);
  CHECK(s2[2] == h);
  CHECK(s2[0].is_zero());
  CHECK(eval_y0(W::monomial(2, 0, exps(2), 0, h)).order() < 0);
  CHECK_THROWS(eval_y0(W::monomial(2, 0, exps(0), dx1, h)));
}

TEST_CASE("Hodge identity and nilpotency on random sections") {
  RandomSource rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = trial % 2 ? 4 : 2;
    const W a = random_section<JetPoly>(rng, n, {8, 4, 2, -1}, [&] { return rng.jet_poly(n, 3, 3); });
    const W lhs = delta_inv(delta(a)) + delta(delta_inv(a));
    W a00(n);
    for (const auto& [key, v] : a.terms())
      if (key.alpha.total() == 0 && key.beta == 0) a00.add(key, v);
    CHECK(lhs == a - a00);
    CHECK(delta(delta(a)).is_zero());
    CHECK(delta_inv(delta_inv(a)).is_zero());
    CHECK(d_exterior(d_exterior(a)).is_zero());
    // delta d + d delta = 0 for the flat exterior derivative
    CHECK((delta(d_exterior(a)) + d_exterior(delta(a))).is_zero());
    const W inv = delta_inv(a);
    for (const auto& [key, v] : inv.terms()) CHECK(key.alpha.total() >= 1);
  }
}

TEST_CASE("delta inverse raises Weyl degree by one") {
  RandomSource rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const W a = random_section<JetPoly>(rng, 2, {1, 3, 2, 1}, [&] { return c(rng.rational()); });
    const W b = delta_inv(a);
    if (b.is_zero()) continue;
    CHECK(b.min_degree() == a.min_degree() + 1);
  }
}

TEST_CASE("associativity and caps of the fiber product") {
  const FiberMetric g = FiberMetric::darboux(2);
  RandomSource rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    auto draw = [&] {
      return random_section<JetPoly>(rng, 4, {4, 3, 1, -1}, [&] { return JetPoly(rng.rational(), 4); })
          .truncated(3, 7);
    };
    const W a = draw();
    const W b = draw();
    const W cc = draw();
    const W left = fiber_product(fiber_product(a, b, g), cc, g);
    const W right = fiber_product(a, fiber_product(b, cc, g), g);
    const int nu = std::min(left.nu_cap(), right.nu_cap());
    const int deg = std::min(left.degree_cap(), right.degree_cap());
    CHECK(deg >= 7);
    CHECK(left.truncated(nu, deg) == right.truncated(nu, deg));
    for (const W* s : {&left, &right})
      for (const auto& [key, v] : s->terms()) {
        CHECK(key.k <= s->nu_cap());
        CHECK(key.weyl_degree() <= s->degree_cap());
      }
  }
}

TEST_CASE("commutator over nu agrees with the literal commutator") {
  const FiberMetric g = FiberMetric::darboux(1);
  RandomSource rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    const int qa = trial % 3;
    const int qb = (trial / 3) % 3;
    const auto a = random_section<TrigPoly>(rng, 2, {4, 3, 1, qa}, [&] { return rng.trig_poly(2, 2, 2); });
    const auto b = random_section<TrigPoly>(rng, 2, {4, 3, 1, qb}, [&] { return rng.trig_poly(2, 2, 2); });
    const auto literal = graded_commutator(a, b, g);
    CHECK(nu_divide(literal) == commutator_nu(a, b, g));
    const auto central = WeylSection<TrigPoly>::monomial(2, 1, Exponents{}, dx2, rng.trig_poly(2, 2, 2));
    CHECK(commutator_nu(a, central, g).is_zero());
  }
}

TEST_CASE("interior product") {
  // i(X)(dx1 ^ dx2) = X^1 dx2 - X^2 dx1
  const std::vector<JetPoly> X{c(2), c(3)};
  const W form = W::monomial(2, 0, exps(0), dx1 | dx2, c(1));
  CHECK(interior(X, form) == W::monomial(2, 0, exps(0), dx2, c(2)) - W::monomial(2, 0, exps(0), dx1, c(3)));
}
