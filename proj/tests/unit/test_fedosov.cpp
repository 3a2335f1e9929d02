#include <doctest.h>

#include "fedtrace/fedosov.hpp"
#include "fedtrace/jet_poly.hpp"
#include "fedtrace/random.hpp"
#include "fedtrace/random_weyl.hpp"

using namespace fedtrace;

namespace {

SymmetricTensor3 random_tensor(RandomSource& rng, int m) {
  const int n = 2 * m;
  SymmetricTensor3 T;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k)
        if (rng.coin()) T[{i, j, k}] = rng.trig_poly(n, 1, 1);
  return T;
}

// closed 2-form on T^2: any 2-form is closed
std::vector<TrigPoly> random_two_form(RandomSource& rng) {
  const TrigPoly a = rng.trig_poly(2, 1, 1);
  return {TrigPoly{}, a, -a, TrigPoly{}};
}

// Moyal product oracle: sum_t (nu/2)^t / t! Lambda^{i1 j1} ... d^t f d^t g
NuSeries<JetPoly> moyal(const FiberMetric& w, const JetPoly& f, const JetPoly& g, int order) {
  const int n = w.dimension();
  NuSeries<JetPoly> out;
  // pairs[t] lists (derivative of f, derivative of g, weight)
  std::vector<std::tuple<JetPoly, JetPoly, Rational>> level{{f, g, Rational(1)}};
  Rational factorial = 1;
  for (int t = 0; t <= order; ++t) {
    if (t > 0) factorial *= t;
    JetPoly sum;
    for (const auto& [a, b, c] : level) sum += a * b * c;
    out.set(t, sum * (Rational(1) / (factorial * Rational(1 << t))));
    std::vector<std::tuple<JetPoly, JetPoly, Rational>> next;
    for (const auto& [a, b, c] : level)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (w.lambda(i, j) != 0) next.emplace_back(a.derivative(i), b.derivative(j), c * w.lambda(i, j));
    level = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("flat star product is the Moyal product") {
  RandomSource rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    const int m = 1 + trial % 2;
    const int n = 2 * m;
    const FedosovConnection<JetPoly> conn(build_flat<JetPoly>(m, {}), 3);
    CHECK(conn.r().is_zero());
    const JetPoly f = rng.jet_poly(n, 4, 4);
    const JetPoly g = rng.jet_poly(n, 4, 4);
    const auto s = conn.star(f, g);
    const auto oracle = moyal(conn.metric(), f, g, 3);
    const auto library = moyal_product(conn.metric(), f, g, 3);
    for (int k = 0; k <= 3; ++k) {
      CHECK(s[k] == oracle[k]);
      CHECK(library[k] == oracle[k]);
    }
  }
}

TEST_CASE("flat torus star product is the Moyal product") {
  RandomSource rng(39);
  const FedosovConnection<TrigPoly> conn(build_torus(1, {}, {}), 3);
  const TrigPoly f = rng.trig_poly(2, 2, 2);
  const TrigPoly g = rng.trig_poly(2, 2, 2);
  CHECK(conn.star(f, g) == moyal_product(conn.metric(), f, g, 3));
}

TEST_CASE("torus connection: abelian, flat sections, Weyl curvature") {
  RandomSource rng(32);
  for (int trial = 0; trial < 3; ++trial) {
    const auto geo = build_torus(1, random_tensor(rng, 1), {random_two_form(rng), random_two_form(rng)});
    REQUIRE(geo.validate().ok());
    const FedosovConnection<TrigPoly> conn(geo, 2);
    const auto residual = conn.abelian_residual();
    CHECK(residual.degree_cap() >= conn.weyl_cap() - 1);
    CHECK(residual.is_zero());

    const TrigPoly f = rng.trig_poly(2, 1, 2);
    const auto Qf = conn.quantize(f);
    const auto DQf = conn.apply(Qf);
    CHECK(DQf.degree_cap() >= conn.weyl_cap() - 1);
    CHECK(DQf.is_zero());

    const auto theta = conn.weyl_curvature();
    const auto expected = (conn.omega() - symplectic_form_section<TrigPoly>(conn.metric()))
                              .truncated(theta.nu_cap(), theta.degree_cap());
    CHECK(theta.degree_cap() >= conn.weyl_cap() - 1);
    CHECK(theta == expected);
  }
}

TEST_CASE("torus star product: low orders and closed forms") {
  RandomSource rng(33);
  for (int trial = 0; trial < 3; ++trial) {
    const auto geo = build_torus(1, random_tensor(rng, 1), {random_two_form(rng), random_two_form(rng)});
    const FedosovConnection<TrigPoly> conn(geo, 3);
    const TrigPoly f = rng.trig_poly(2, 1, 2);
    const TrigPoly g = rng.trig_poly(2, 1, 2);
    const auto s = conn.star(f, g);
    REQUIRE(s.order() >= 3);
    CHECK(s[0] == f * g);
    CHECK(s[1] == poisson_bracket(geo, f, g) * Rational(1, 2));
    CHECK(s[2] == c2_closed_form(geo, f, g));
    const auto unit = conn.star(TrigPoly(Rational(1), 2), f);
    CHECK(unit[0] == f);
    for (int k = 1; k <= 3; ++k) CHECK(unit[k].is_zero());
    CHECK(s[3] == c3_closed_form(geo, f, g));
    const auto s_rev = conn.star(g, f);
    const Rational literal(1);
    CHECK(s[3] - s_rev[3] == c3_closed_form(geo, f, g, literal) - c3_closed_form(geo, g, f, literal));
  }
}

TEST_CASE("star product is associative through the certified order") {
  RandomSource rng(34);
  const auto geo = build_torus(1, random_tensor(rng, 1), {random_two_form(rng)});
  const FedosovConnection<TrigPoly> conn(geo, 2);
  const TrigPoly f = rng.trig_poly(2, 1, 1);
  const TrigPoly g = rng.trig_poly(2, 1, 1);
  const TrigPoly h = rng.trig_poly(2, 1, 1);
  const auto left = conn.star(conn.star(f, g), NuSeries<TrigPoly>{{h}});
  const auto right = conn.star(NuSeries<TrigPoly>{{f}}, conn.star(g, h));
  for (int k = 0; k <= 2; ++k) CHECK(left[k] == right[k]);
}

TEST_CASE("D inverse solves D a = b") {
  RandomSource rng(35);
  const auto geo = build_torus(1, random_tensor(rng, 1), {random_two_form(rng)});
  const FedosovConnection<TrigPoly> conn(geo, 2);
  // b = D c for a 0-form c with delta^{-1} c = 0 is D-closed
  const auto c = random_section<TrigPoly>(rng, 2, {3, 2, 1, 0}, [&] { return rng.trig_poly(2, 1, 1); })
                     .truncated(conn.nu_order(), conn.weyl_cap());
  const auto b = conn.apply(c);
  const auto a = conn.d_inverse(b);
  CHECK(delta_inv(a).is_zero());
  const auto Da = conn.apply(a);
  const auto diff = (Da - b).truncated(std::min(Da.nu_cap(), b.nu_cap()), std::min(Da.degree_cap(), b.degree_cap()) - 1);
  CHECK(diff.is_zero());
}

TEST_CASE("Lie identity for a linear Hamiltonian field on flat space") {
  RandomSource rng(36);
  const auto geo = build_flat<JetPoly>(1, {});
  const FedosovConnection<JetPoly> conn(geo, 2);
  const JetPoly x = JetPoly::coordinate(0, 2);
  const JetPoly p = JetPoly::coordinate(1, 2);
  const JetPoly mu = x * x * Rational(1, 2) + x * p * Rational(3) - p * p;
  const auto X = hamiltonian_field(geo, mu);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = random_section<JetPoly>(rng, 2, {4, 3, 1, trial % 3}, [&] { return rng.jet_poly(2, 2, 2); })
                       .truncated(conn.nu_order(), conn.weyl_cap());
    const auto res = conn.lie_residual(X, NuSeries<JetPoly>{{mu}}, a);
    CHECK(res.degree_cap() >= conn.weyl_cap() - 2);
    CHECK(res.is_zero());
  }
}

TEST_CASE("Lie identity for the rotation of a Kahler sphere") {
  RandomSource rng(37);
  const UPoly q({Rational(1), Rational(0), Rational(-1)});
  for (const auto& [phi, k] : {std::pair{q, Rational(0)}, std::pair{q * (UPoly({Rational(1)}) + q * UPoly({Rational(0), Rational(1, 4)})), Rational(1)}}) {
    const KahlerModelS2 s2(phi, k);
    const FedosovConnection<ProfileRing> conn(s2.geometry(), 1);
    // mu = -z - (nu k / 2) phi'
    NuSeries<ProfileRing> mu;
    mu.set(0, -ProfileRing::z());
    mu.set(1, ProfileRing(phi.derivative() * (k * Rational(-1, 2))));
    const auto a = random_section<ProfileRing>(rng, 2, {3, 2, 0, 0}, [&] {
      return ProfileRing(UPoly({rng.rational(), rng.rational()})) +
             ProfileRing::cos_theta(1, UPoly({rng.rational()}));
    }).truncated(conn.nu_order(), conn.weyl_cap());
    const auto res = conn.lie_residual(s2.rotation_field(), mu, a);
    CHECK(res.degree_cap() >= conn.weyl_cap() - 2);
    CHECK(res.is_zero());
  }
}

TEST_CASE("Abelian condition through the commutator form") {
  RandomSource rng(38);
  const auto geo = build_torus(1, random_tensor(rng, 1), {random_two_form(rng), random_two_form(rng)});
  const FedosovConnection<TrigPoly> conn(geo, 3);
  const auto& r = conn.r();
  const auto res = conn.r_bar() + conn.nabla(r) - delta(r) + commutator_nu(r, r, conn.metric()) * Rational(1, 2) -
                   conn.omega();
  CHECK(res.nu_cap() == conn.nu_order());
  CHECK(res.degree_cap() >= conn.weyl_cap() - 1);
  CHECK(res.is_zero());
  CHECK(delta_inv(r).is_zero());
  CHECK(r.min_degree() >= 3);
}

TEST_CASE("Fedosov worked examples") {
  // flat with constant Omega = nu dx1 ^ dx2: lowest part of r is -nu delta^{-1} alpha_1
  const auto flat = build_flat<JetPoly>(1, {{Rational(0), Rational(1), Rational(-1), Rational(0)}});
  const FedosovConnection<JetPoly> conn(flat, 2);
  using W = WeylSection<JetPoly>;
  const W alpha = W::monomial(2, 1, Exponents{}, 3, JetPoly(Rational(1)));
  CHECK(conn.r().degree_part(3) == -delta_inv(alpha));
  CHECK(conn.abelian_residual().is_zero());

  // D^{-1} dx^1 = -y^1 on flat space
  const FedosovConnection<JetPoly> plain(build_flat<JetPoly>(1, {}), 2);
  const W dx1 = W::monomial(2, 0, Exponents{}, 1, JetPoly(Rational(1)));
  CHECK(plain.d_inverse(dx1) == -W::y(2, 0));
  CHECK(plain.d_inverse(W(2)).is_zero());
  const W not_closed = W::monomial(2, 0, Exponents{}, 1, JetPoly::coordinate(1, 2));
  CHECK_THROWS_AS(plain.d_inverse(not_closed), std::invalid_argument);

  // Q(1) = 1, flat Q is the Taylor lift
  CHECK(plain.quantize(JetPoly(Rational(1))) == W::function(2, JetPoly(Rational(1))));
  const JetPoly x = JetPoly::coordinate(0, 2);
  const JetPoly p = JetPoly::coordinate(1, 2);
  const W lift = plain.quantize(x * x);
  Exponents e11;
  e11[0] = 1;
  Exponents e2;
  e2[0] = 2;
  CHECK(lift == W::function(2, x * x) + W::monomial(2, 0, e11, 0, x * Rational(2)) +
                    W::monomial(2, 0, e2, 0, JetPoly(Rational(1))));

  // C2(q^2, p^2) = 1/2 on flat space, and x1 * x2 = x1 x2 + (nu/2) Lambda^{12}
  CHECK(c2_closed_form(plain.geometry(), x * x, p * p) == JetPoly(Rational(1, 2)));
  const auto s = plain.star(x, p);
  CHECK(s[0] == x * p);
  CHECK(s[1] == JetPoly(plain.metric().lambda(0, 1) / 2));

  // round sphere: r starts with delta^{-1} R_bar
  const KahlerModelS2 s2(UPoly({Rational(1), Rational(0), Rational(-1)}), Rational(0));
  const FedosovConnection<ProfileRing> sphere(s2.geometry(), 1);
  CHECK(sphere.r().degree_part(3) == delta_inv(sphere.r_bar()));
  CHECK(sphere.abelian_residual().is_zero());
}

TEST_CASE("cap convergence and sigma Q = id") {
  RandomSource rng(39);
  const auto geo = build_torus(1, random_tensor(rng, 1), {random_two_form(rng)});
  const FedosovConnection<TrigPoly> base(geo, 2);
  const FedosovConnection<TrigPoly> wider(geo, 2, base.weyl_cap() + 2);
  const TrigPoly f = rng.trig_poly(2, 1, 1);
  const TrigPoly g = rng.trig_poly(2, 1, 1);
  const auto a = base.star(f, g);
  const auto b = wider.star(f, g);
  for (int k = 0; k <= 2; ++k) CHECK(a[k] == b[k]);
  NuSeries<TrigPoly> series;
  series.set(0, f);
  series.set(2, g);
  const auto back = eval_y0(base.quantize(series));
  for (int k = 0; k <= 2; ++k) CHECK(back[k] == series[k]);
}

TEST_CASE("star product agrees with the product of full-cap quantizations") {
  RandomSource rng(40);
  const auto geo = build_torus(1, random_tensor(rng, 1), {random_two_form(rng), random_two_form(rng)});
  const FedosovConnection<TrigPoly> conn(geo, 3);
  const TrigPoly f = rng.trig_poly(2, 1, 2);
  const TrigPoly g = rng.trig_poly(2, 1, 2);
  const auto full = eval_y0(fiber_product(conn.quantize(f), conn.quantize(g), conn.metric()));
  const auto s = conn.star(f, g);
  REQUIRE(s.order() == 3);
  REQUIRE(full.order() >= 3);
  for (int k = 0; k <= 3; ++k) CHECK(s[k] == full[k]);
}
