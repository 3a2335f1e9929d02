#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "fedtrace/scalar.hpp"

namespace fedtrace {

/// Truncated formal series sum_k nu^k c_k, k = 0..size()-1.
template <class T>
struct NuSeries {
  std::vector<T> coefficients;

  NuSeries() = default;
  explicit NuSeries(std::vector<T> c) : coefficients(std::move(c)) {}
  explicit NuSeries(T c0) : coefficients{std::move(c0)} {}

  int order() const { return static_cast<int>(coefficients.size()) - 1; }

  /// Coefficient of nu^k; zero outside the stored range.
  T operator[](int k) const {
    if (k < 0 || k >= static_cast<int>(coefficients.size())) return T{};
    return coefficients[static_cast<std::size_t>(k)];
  }

  void set(int k, T value) {
    if (k >= static_cast<int>(coefficients.size())) coefficients.resize(static_cast<std::size_t>(k + 1));
    coefficients[static_cast<std::size_t>(k)] = std::move(value);
  }

  friend bool operator==(const NuSeries& a, const NuSeries& b) {
    const int n = std::max(a.order(), b.order());
    for (int k = 0; k <= n; ++k)
      if (!(a[k] == b[k])) return false;
    return true;
  }
};

}  // namespace fedtrace
