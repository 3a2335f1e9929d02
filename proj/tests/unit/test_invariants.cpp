#include <doctest.h>

#include "fedtrace/invariants.hpp"
#include "fedtrace/models.hpp"

using namespace fedtrace;

namespace {

ProfileRing poly(std::vector<Rational> c) { return ProfileRing(UPoly(std::move(c))); }

// S^2 geometry of the profile with Omega = nu a(z) dz ^ dtheta
ChartGeometry<ProfileRing> with_alpha1(const KahlerModelS2& model, const ProfileRing& a) {
  return model.geometry().with_omega({{ProfileRing(), a, -a, ProfileRing()}});
}

void check_defining_equation(const ChartGeometry<ProfileRing>& g, const QuantumMomentMap<ProfileRing>& mu) {
  const auto beta = moment_contraction(g, mu.X, mu.mu.order());
  for (int r = 0; r <= mu.mu.order(); ++r) {
    CHECK(mu.mu[r].derivative(0) == beta[static_cast<std::size_t>(r)][0]);
    CHECK(mu.mu[r].derivative(1) == beta[static_cast<std::size_t>(r)][1]);
  }
}

}  // namespace

TEST_CASE("moment map of the rotation on the round sphere") {
  const KahlerModelS2 s2(round_profile(), Rational(0));
  const auto mu = solve_moment(s2.geometry(), s2.rotation_field(), 2);
  CHECK(mu.normalization == Normalization::paper_c);
  CHECK(mu.mu[0] == -ProfileRing::z());
  CHECK(mu.mu[1].is_zero());
  CHECK(mu.mu[2].is_zero());
  check_defining_equation(s2.geometry(), mu);
}

TEST_CASE("normalize subtracts the right constant and is idempotent") {
  const KahlerModelS2 s2(round_profile(), Rational(0));
  QuantumMomentMap<ProfileRing> raw;
  raw.X = s2.rotation_field();
  raw.mu.set(0, poly({Rational(5), Rational(-1)}));
  const auto once = normalize(raw, s2.geometry(), Normalization::paper_c);
  CHECK(once.mu[0] == -ProfileRing::z());
  const auto twice = normalize(once, s2.geometry(), Normalization::paper_c);
  CHECK(twice.mu == once.mu);
  CHECK(normalize(raw, s2.geometry(), Normalization::none).mu == raw.mu);
}

TEST_CASE("paper_c shifts the nu^1 constant by the alpha_1 cross term") {
  const KahlerModelS2 s2(round_profile(), Rational(0));
  const auto g = with_alpha1(s2, ProfileRing::z());
  const auto paper = solve_moment(g, s2.rotation_field(), 1, Normalization::paper_c);
  const auto integral = solve_moment(g, s2.rotation_field(), 1, Normalization::integral);
  check_defining_equation(g, paper);
  // mu_1 = z^2/2 + c; int (mu_1 - mu_0 z) = 0 gives c = -1/2, int mu_1 = 0 gives c = -1/6
  CHECK(paper.mu[1] == poly({Rational(-1, 2), Rational(0), Rational(1, 2)}));
  CHECK(integral.mu[1] == poly({Rational(-1, 6), Rational(0), Rational(1, 2)}));
}

TEST_CASE("torus translations are not quantum-Hamiltonian") {
  const auto g = build_torus(1, {}, {});
  const std::vector<TrigPoly> X{TrigPoly(Rational(1), 2), TrigPoly()};
  try {
    (void)solve_moment(g, X, 1);
    FAIL("expected rejection");
  } catch (const NotQuantumHamiltonian& e) {
    CHECK(e.order() == 0);
    CHECK(e.periods()[1] != 0);
  }
  CHECK_THROWS_AS((void)solve_moment(g, {TrigPoly::cos_mode(Frequency{1, 0}, Rational(1), 2), TrigPoly()}, 1),
                  std::invalid_argument);
}

TEST_CASE("only rotations are admitted on the sphere") {
  const KahlerModelS2 s2(round_profile(), Rational(0));
  CHECK_THROWS_AS((void)solve_moment(s2.geometry(), {ProfileRing(Rational(1)), ProfileRing()}, 1),
                  std::invalid_argument);
}

TEST_CASE("Kahler shift solves the defining equation for Omega_k") {
  for (const auto& phi : profile_family()) {
    for (const Rational k : {Rational(0), Rational(1, 2), Rational(1)}) {
      const KahlerModelS2 model(phi, k);
      const auto mu = solve_moment(model.geometry().with_omega({}), model.rotation_field(), 2);
      const auto shifted = kahler_shift(mu, model);
      CHECK(shifted.normalization == Normalization::integral);
      check_defining_equation(model.geometry(), shifted);
      const auto direct = solve_moment(model.geometry(), model.rotation_field(), 2, Normalization::integral);
      CHECK(direct.mu == shifted.mu);
      if (k == 0) CHECK(shifted.mu == mu.mu);
    }
  }
  const KahlerModelS2 round(round_profile(), Rational(1));
  const auto mu = solve_moment(round.geometry().with_omega({}), round.rotation_field(), 1);
  // Delta z = -phi' = 2z on the round sphere
  CHECK(kahler_shift(mu, round).mu[1] == ProfileRing::z());
}

TEST_CASE("paper_c normalization is preserved along Omega paths") {
  const KahlerModelS2 model(perturbed_profile(Rational(1, 5), Rational(0)), Rational(1));
  const auto X = model.rotation_field();
  const auto mu0 = solve_moment(model.geometry(), X, 2);
  const ProfileRing b = poly({Rational(0), Rational(1), Rational(0), Rational(-1)});  // z(1 - z^2)
  const ProfileRing db = b.derivative(0);
  for (const Rational t : {Rational(1, 3), Rational(-2)}) {
    // Omega_t = Omega_k + t nu d(b dtheta)
    const ProfileRing a = model.ricci_form()[1] * model.k() + db * t;
    const auto g = with_alpha1(model, a);
    const auto mu_t = solve_moment(g, X, 2);
    CHECK(mu_t.mu[0] == mu0.mu[0]);
    CHECK(mu_t.mu[1] == mu0.mu[1] + b * t);
    CHECK(mu_t.mu[2] == mu0.mu[2]);
    // the trace of the normalized moment map does not move
    const auto base = invariant_leading(model.geometry(), mu0);
    const auto moved = invariant_leading(g, mu_t);
    for (int q = 0; q <= 2; ++q) CHECK(*moved.values[q].exact == *base.values[q].exact);
  }
}

TEST_CASE("Futaki invariants on the sphere") {
  for (const auto& phi : profile_family()) {
    const KahlerModelS2 model(phi, Rational(0));
    const ProfileRing f = -ProfileRing::z();
    const auto f1 = futaki_c1p(model, f, 1);
    const auto f2 = futaki_c1p(model, f, 2);
    REQUIRE(f1.exact);
    REQUIRE(f2.exact);
    CHECK(f1.exact->is_zero());
    CHECK(f2.exact->is_zero());
    CHECK_THROWS_AS((void)futaki_c1p(model, f, 3), std::invalid_argument);
  }
  // a non-Hamiltonian test function sees the metric
  const KahlerModelS2 perturbed(perturbed_profile(Rational(0), Rational(1, 4)), Rational(0));
  const ProfileRing g = poly({Rational(0), Rational(0), Rational(1)});
  CHECK_FALSE(futaki_c1p(perturbed, g, 1).exact->is_zero());
}

TEST_CASE("leading invariant on the sphere family") {
  for (const auto& phi : profile_family()) {
    const KahlerModelS2 model(phi, Rational(0));
    const auto mu = solve_moment(model.geometry(), model.rotation_field(), 2);
    const auto report = invariant_leading(model.geometry(), mu);
    REQUIRE(report.values.size() == 3);
    for (int q = 0; q <= 2; ++q) {
      REQUIRE(report.values[q].exact);
      CHECK(*report.values[q].exact == *report.cross_check[q].exact);
      CHECK(report.values[q].exact->is_zero());
    }
  }
  const KahlerModelS2 round(round_profile(), Rational(0));
  auto integral = solve_moment(round.geometry(), round.rotation_field(), 2, Normalization::integral);
  CHECK_THROWS_AS((void)invariant_leading(round.geometry(), integral), std::invalid_argument);
}

TEST_CASE("leading invariant matches the trace density on a nonzero example") {
  // Omega with alpha_1 = z makes mu^1 nonconstant; both routes still agree
  const KahlerModelS2 model(perturbed_profile(Rational(1, 10), Rational(1, 5)), Rational(0));
  const auto g = with_alpha1(model, ProfileRing::z());
  const auto mu = solve_moment(g, model.rotation_field(), 2);
  const auto report = invariant_leading(g, mu);
  for (int q = 0; q <= 2; ++q) CHECK(*report.values[q].exact == *report.cross_check[q].exact);
}

TEST_CASE("Kahler invariant vanishes across the family") {
  for (const auto& phi : profile_family())
    for (const Rational k : {Rational(0), Rational(1, 2), Rational(1)}) {
      const KahlerModelS2 model(phi, k);
      const auto report = kahler_invariant(model);
      for (int q = 0; q <= 2; ++q) {
        REQUIRE(report.values[q].exact);
        CHECK(report.values[q].exact->is_zero());
      }
    }
}

TEST_CASE("normalization bridge") {
  for (const auto& phi : profile_family()) {
    const KahlerModelS2 model(phi, Rational(1));
    const auto bridge = normalization_bridge(model, 2);
    REQUIRE(bridge.difference.size() == 3);
    for (int p = 0; p <= 2; ++p) {
      CHECK(bridge.difference[p] == 0);
      CHECK(Scalar(bridge.difference[p]) == bridge.quotient[p]);
    }
  }
}

TEST_CASE("model integrals") {
  const KahlerModelS2 s2(round_profile(), Rational(0));
  const auto area = integrate_density(s2.geometry(), ProfileRing(Rational(1)));
  CHECK(*area.exact == Scalar(Rational(2), 1));
  const auto torus = integrate_density(build_torus(2, {}, {}), TrigPoly(Rational(3), 4));
  CHECK(*torus.exact == Scalar(Rational(3), 4));
  const auto ratio = liouville_ratio_series(with_alpha1(s2, ProfileRing::z()), 2);
  CHECK(ratio[1] == -ProfileRing::z());
  CHECK(ratio[2].is_zero());
}
