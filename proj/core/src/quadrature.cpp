#include "fedtrace/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fedtrace {

namespace {

struct TableDeleter {
  void operator()(gsl_integration_glfixed_table* t) const { gsl_integration_glfixed_table_free(t); }
};

const gsl_integration_glfixed_table* table(int nodes) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<gsl_integration_glfixed_table, TableDeleter>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[nodes];
  if (!slot) slot.reset(gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(nodes)));
  if (!slot) throw std::runtime_error("gauss_legendre: cannot build table");
  return slot.get();
}

}  // namespace

double gauss_legendre(const std::function<double(double)>& f, int nodes) {
  if (nodes < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  const auto* t = table(nodes);
  double sum = 0.0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(nodes); ++i) {
    double x = 0.0;
    double w = 0.0;
    gsl_integration_glfixed_point(-1.0, 1.0, i, &x, &w, t);
    sum += w * f(x);
  }
  return sum;
}

double integrate_interval(const std::function<double(double)>& f, const QuadratureOptions& options) {
  int n = options.initial_nodes;
  double previous = gauss_legendre(f, n);
  while (n < options.max_nodes) {
    n *= 2;
    const double current = gauss_legendre(f, n);
    const double scale = std::max(1.0, std::abs(current));
    if (std::abs(current - previous) <= options.tolerance * scale) return current;
    previous = current;
  }
  throw std::runtime_error("integrate_interval: no convergence up to " + std::to_string(options.max_nodes) +
                           " nodes (singular integrand?)");
}

double integrate_s2(const ProfileRing& f, const QuadratureOptions& options) {
  const ProfileRing avg = f.theta_average();
  if (avg.is_zero()) return 0.0;
  return 2.0 * std::numbers::pi * integrate_interval([&](double z) { return avg.evaluate(z); }, options);
}

}  // namespace fedtrace
