#pragma once

#include <functional>

#include "fedtrace/profile_ring.hpp"

namespace fedtrace {

struct QuadratureOptions {
  /// Relative tolerance of the order-doubling check.
  double tolerance = 1e-12;
  int initial_nodes = 16;
  int max_nodes = 2048;
};

/// Gauss-Legendre value of int_{-1}^{1} f(z) dz with n nodes.
double gauss_legendre(const std::function<double(double)>& f, int nodes);

/// Integral of f over [-1, 1] by Gauss-Legendre with order doubling.
/// Throws std::runtime_error when successive orders never agree within
/// the tolerance.
double integrate_interval(const std::function<double(double)>& f, const QuadratureOptions& options = {});

/// 2 pi int_{-1}^{1} <f>(z) dz where <f> is the theta-average: the integral
/// of f against dz ^ dtheta over the sphere.
double integrate_s2(const ProfileRing& f, const QuadratureOptions& options = {});

}  // namespace fedtrace
