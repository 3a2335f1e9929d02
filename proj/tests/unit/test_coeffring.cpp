#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fedtrace/dual.hpp"
#include "fedtrace/jet_poly.hpp"
#include "fedtrace/profile_ring.hpp"
#include "fedtrace/quadrature.hpp"
#include "fedtrace/random.hpp"
#include "fedtrace/trig_poly.hpp"

using namespace fedtrace;

namespace {

template <class R>
void check_leibniz(const R& f, const R& g, int n) {
  for (int i = 0; i < n; ++i) CHECK((f * g).derivative(i) == f.derivative(i) * g + f * g.derivative(i));
}

template <class R>
void check_mixed(const R& f, int n) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) CHECK(f.derivative(i).derivative(j) == f.derivative(j).derivative(i));
}

}  // namespace

TEST_CASE("scalar arithmetic and round trip") {
  const Scalar a = Scalar(Rational(1, 2), -1) + Scalar(Rational(4), 2);
  CHECK(a.to_string() == "1/2*(2pi)^-1 + 4*(2pi)^2");
  CHECK(Scalar::parse(a.to_string()) == a);
  CHECK((a - a).is_zero());
  CHECK(Scalar(Rational(3), 1) * Scalar(Rational(1, 3), -1) == Scalar(1));
  CHECK(Scalar::tau_pow(1).to_double() == doctest::Approx(2 * std::numbers::pi));
  CHECK_FALSE(Scalar(Rational(1), 1) == Scalar(Rational(1), 0));
  CHECK(parse_rational("-3/6") == Rational(-1, 2));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("x"));
}

TEST_CASE("jet poly derivative examples") {
  const JetPoly x1 = JetPoly::coordinate(0, 2);
  const JetPoly x2 = JetPoly::coordinate(1, 2);
  CHECK((x1 * x2).derivative(0) == x2);
  CHECK(JetPoly::coordinate(0, 2, 3).derivative(0).jet_order() == 2);
  CHECK_THROWS_AS(x1.derivative(2), std::out_of_range);
  const JetPoly cube = x1 * x1 * x1;
  CHECK(cube.truncated(2).is_zero());
  const std::vector<Rational> at{Rational(2), Rational(5)};
  CHECK(cube.evaluate(at) == 8);
}

TEST_CASE("trig poly derivative and integration examples") {
  Frequency k1;
  k1[0] = 1;
  Frequency k2;
  k2[1] = 1;
  CHECK(TrigPoly::sin_mode(k1, Rational(1), 2).derivative(0) == TrigPoly::cos_mode(k1, Rational(1), 2));
  CHECK(integrate_torus(TrigPoly(Rational(1), 2)) == Scalar::tau_pow(2));
  CHECK(integrate_torus(TrigPoly::sin_mode(k1, Rational(1), 2)).is_zero());
  CHECK(integrate_torus(TrigPoly(Rational(3), 2) + TrigPoly::cos_mode(k2, Rational(1), 2)) ==
        Scalar(Rational(3), 2));
  // cos^2 x = (1 + cos 2x)/2
  const TrigPoly c = TrigPoly::cos_mode(k1, Rational(1), 2);
  CHECK((c * c).mean() == Rational(1, 2));
}

TEST_CASE("profile ring derivative and rational arithmetic") {
  const ProfileRing z = ProfileRing::z();
  CHECK((z * z).derivative(ProfileRing::kZ) == z * Rational(2));
  const ProfileRing phi = ProfileRing(Rational(1)) - z * z;
  const ProfileRing q = z / phi;
  CHECK(q * phi == z);
  CHECK((phi / phi) == ProfileRing(Rational(1)));
  // (z / (1 - z^2))' = (1 + z^2) / (1 - z^2)^2
  CHECK(q.derivative(ProfileRing::kZ) == (ProfileRing(Rational(1)) + z * z) / (phi * phi));
  CHECK(q.evaluate(Rational(1, 2)) == Rational(2, 3));
  const ProfileRing c1 = ProfileRing::cos_theta(1, UPoly(Rational(1)));
  const ProfileRing s1 = ProfileRing::sin_theta(1, UPoly(Rational(1)));
  CHECK(c1 * c1 + s1 * s1 == ProfileRing(Rational(1)));
  CHECK(c1.derivative(ProfileRing::kTheta) == -s1);
  CHECK_THROWS(c1.evaluate(Rational(0)));
}

TEST_CASE("Leibniz rule and mixed partials on random pairs") {
  RandomSource rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const JetPoly f = rng.jet_poly(4, 4, 5);
    const JetPoly g = rng.jet_poly(4, 4, 5);
    check_leibniz(f, g, 4);
    check_mixed(f, 4);
    const TrigPoly a = rng.trig_poly(2, 3, 3);
    const TrigPoly b = rng.trig_poly(2, 3, 3);
    check_leibniz(a, b, 2);
    check_mixed(a, 2);
    const ProfileRing p = rng.profile(3, 2, 3) / (ProfileRing(Rational(2)) - ProfileRing::z());
    const ProfileRing q = rng.profile(3, 2, 3);
    check_leibniz(p, q, 2);
    check_mixed(p, 2);
    const Dual<TrigPoly> da(a, b);
    const Dual<TrigPoly> db(b, a * a);
    check_leibniz(da, db, 2);
  }
}

TEST_CASE("torus integral kills derivatives") {
  RandomSource rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const TrigPoly f = rng.trig_poly(4, 3, 4);
    for (int i = 0; i < 4; ++i) CHECK(integrate_torus(f.derivative(i), 4).is_zero());
  }
}

TEST_CASE("Gauss-Legendre exactness and sphere integrals") {
  RandomSource rng(3);
  for (int d = 0; d <= 30; ++d) {
    std::vector<Rational> c(static_cast<std::size_t>(d + 1));
    for (auto& v : c) v = rng.rational();
    const UPoly p(c);
    const UPoly anti = p.antiderivative();
    const double exact = Rational(anti.evaluate(Rational(1)) - anti.evaluate(Rational(-1))).get_d();
    const double approx = gauss_legendre([&](double z) { return p.evaluate(z); }, (d + 2) / 2);
    CHECK(std::abs(approx - exact) <= 1e-13 * std::max(1.0, std::abs(exact)));
  }
  const double four_pi = 4 * std::numbers::pi;
  CHECK(std::abs(integrate_s2(ProfileRing(Rational(1))) - four_pi) <= 1e-12 * four_pi);
  CHECK(std::abs(integrate_s2(ProfileRing::z())) <= 1e-14);
  const ProfileRing z = ProfileRing::z();
  CHECK(std::abs(integrate_s2(z * z) - four_pi / 3) <= 1e-12 * four_pi);
  CHECK(integrate_s2(ProfileRing::cos_theta(2, UPoly(Rational(1)))) == 0.0);
  // 1/(z - 1) is not integrable on [-1, 1]
  const ProfileRing singular = ProfileRing(Rational(1)) / (z - ProfileRing(Rational(1)));
  CHECK_THROWS(integrate_s2(singular));
}
