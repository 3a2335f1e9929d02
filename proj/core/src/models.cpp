#include "fedtrace/models.hpp"

namespace fedtrace {

SymmetricTensor3 random_symmetric_tensor(RandomSource& rng, int m, int max_frequency, int modes) {
  const int n = 2 * m;
  SymmetricTensor3 T;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k)
        if (rng.coin()) T[{i, j, k}] = rng.trig_poly(n, max_frequency, modes);
  return T;
}

std::vector<TrigPoly> random_closed_two_form(RandomSource& rng, int m, int max_frequency, int modes) {
  const int n = 2 * m;
  std::vector<TrigPoly> out(static_cast<std::size_t>(n * n));
  auto at = [&](int i, int j) -> TrigPoly& { return out[static_cast<std::size_t>(i * n + j)]; };
  if (m == 1) {
    const TrigPoly a = rng.trig_poly(2, max_frequency, modes);
    at(0, 1) = a;
    at(1, 0) = -a;
    return out;
  }
  std::vector<TrigPoly> beta;
  for (int i = 0; i < n; ++i) beta.push_back(rng.trig_poly(n, max_frequency, modes));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      TrigPoly c = beta[static_cast<std::size_t>(j)].derivative(i) - beta[static_cast<std::size_t>(i)].derivative(j);
      if (rng.coin()) c += TrigPoly(rng.rational(), n);
      at(j, i) = -c;
      at(i, j) = std::move(c);
    }
  return out;
}

ChartGeometry<TrigPoly> random_perturbed_torus(RandomSource& rng, int m, int omega_orders) {
  const SymmetricTensor3 T = random_symmetric_tensor(rng, m);
  std::vector<std::vector<TrigPoly>> alphas;
  for (int r = 0; r < omega_orders; ++r) alphas.push_back(random_closed_two_form(rng, m));
  return build_torus(m, T, alphas);
}

UPoly round_profile() { return UPoly(std::vector<Rational>{Rational(1), Rational(0), Rational(-1)}); }

UPoly perturbed_profile(const Rational& a, const Rational& b) {
  const UPoly q = round_profile();
  return q * (UPoly(Rational(1)) + q * UPoly(std::vector<Rational>{a, b}));
}

std::vector<UPoly> profile_family() {
  return {round_profile(), perturbed_profile(Rational(1, 5), Rational(0)), perturbed_profile(Rational(0), Rational(1, 4)),
          perturbed_profile(Rational(1, 10), Rational(1, 5))};
}

}  // namespace fedtrace
