#pragma once

#include <functional>

#include "fedtrace/random.hpp"
#include "fedtrace/weyl.hpp"

namespace fedtrace {

struct RandomSectionShape {
  int terms = 4;
  int max_y_degree = 3;
  int max_nu = 1;
  /// Form degree of every term; -1 draws it per term in [0, 2].
  int form_degree = 0;
};

/// Random section with coefficients drawn by `coefficient`.
template <CoefficientRing R>
WeylSection<R> random_section(RandomSource& rng, int n, const RandomSectionShape& shape,
                              const std::function<R()>& coefficient) {
  WeylSection<R> out(n);
  for (int t = 0; t < shape.terms; ++t) {
    WeylKey key;
    key.k = rng.integer(0, shape.max_nu);
    const int p = rng.integer(0, shape.max_y_degree);
    for (int s = 0; s < p; ++s) key.alpha[rng.integer(0, n - 1)] += 1;
    const int q = shape.form_degree >= 0 ? shape.form_degree : rng.integer(0, 2);
    for (int s = 0; s < q && s < n; ++s) {
      int i = rng.integer(0, n - 1);
      while (key.beta & (1u << i)) i = (i + 1) % n;
      key.beta = static_cast<FormMask>(key.beta | (1u << i));
    }
    out.add(key, coefficient());
  }
  return out;
}

}  // namespace fedtrace
