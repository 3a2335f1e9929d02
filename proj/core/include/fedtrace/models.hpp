#pragma once

#include <vector>

#include "fedtrace/geometry.hpp"
#include "fedtrace/random.hpp"
#include "fedtrace/upoly.hpp"

namespace fedtrace {

/// Random symmetric 3-tensor on T^{2m}; each sorted index triple is present
/// with probability 1/2.
SymmetricTensor3 random_symmetric_tensor(RandomSource& rng, int m, int max_frequency = 1, int modes = 1);

/// Random closed 2-form on T^{2m} as a component matrix: a dx^1 ^ dx^2 for
/// m = 1, d beta plus a constant form otherwise.
std::vector<TrigPoly> random_closed_two_form(RandomSource& rng, int m, int max_frequency = 1, int modes = 1);

/// Torus with a random perturbation of the flat connection and
/// Omega = sum_{r=1}^{omega_orders} nu^r alpha_r.
ChartGeometry<TrigPoly> random_perturbed_torus(RandomSource& rng, int m, int omega_orders);

/// 1 - z^2.
UPoly round_profile();
/// (1 - z^2)(1 + (1 - z^2)(a + b z)); admissible for small a, b.
UPoly perturbed_profile(const Rational& a, const Rational& b);
/// Round profile plus two perturbations in the same class.
std::vector<UPoly> profile_family();

}  // namespace fedtrace
