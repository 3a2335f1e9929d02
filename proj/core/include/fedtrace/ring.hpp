#pragma once

#include <concepts>

#include "fedtrace/scalar.hpp"

namespace fedtrace {

/// Capability set every coefficient-function ring provides.
///
/// A default-constructed element is the ring zero and is compatible with any
/// chart dimension. derivative(i) is the partial derivative in chart
/// coordinate i; implementations throw std::out_of_range for i >= n.
template <class R>
concept CoefficientRing = std::regular<R> && requires(R a, const R& b, const Rational& q, int i) {
  { R(q) } -> std::same_as<R>;
  { a + b } -> std::same_as<R>;
  { a - b } -> std::same_as<R>;
  { a * b } -> std::same_as<R>;
  { a * q } -> std::same_as<R>;
  { -a } -> std::same_as<R>;
  { a += b } -> std::same_as<R&>;
  { a -= b } -> std::same_as<R&>;
  { a.is_zero() } -> std::same_as<bool>;
  { a.derivative(i) } -> std::same_as<R>;
};

}  // namespace fedtrace
