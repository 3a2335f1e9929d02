#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedtrace/geometry.hpp"
#include "fedtrace/nu_series.hpp"
#include "fedtrace/quadrature.hpp"
#include "fedtrace/trace.hpp"

namespace fedtrace {

enum class Normalization { none, paper_c, integral };
std::string to_string(Normalization mode);
Normalization parse_normalization(const std::string& text);

/// mu_X = mu^0 + nu mu^1 + ... with d mu_X = i(X)(omega - Omega) per order.
template <CoefficientRing R>
struct QuantumMomentMap {
  std::vector<R> X;
  NuSeries<R> mu;
  Normalization normalization = Normalization::none;
};

/// i(X)(omega - Omega) has a nonzero period: X is not quantum-Hamiltonian.
class NotQuantumHamiltonian : public std::invalid_argument {
 public:
  NotQuantumHamiltonian(int order, std::vector<Rational> periods);
  int order() const { return order_; }
  /// Constant coefficients of the offending closed 1-form.
  const std::vector<Rational>& periods() const { return periods_; }

 private:
  int order_;
  std::vector<Rational> periods_;
};

/// Integral against omega^m / m!: exact when the model allows it, always with
/// a decimal rendering.
struct ModelIntegral {
  std::optional<Scalar> exact;
  double value = 0.0;
  std::string to_string() const;
};
ModelIntegral operator+(const ModelIntegral& a, const ModelIntegral& b);
ModelIntegral operator-(const ModelIntegral& a, const ModelIntegral& b);
ModelIntegral operator*(const ModelIntegral& a, const Scalar& s);

/// Exact on the torus.
ModelIntegral integrate_density(const ChartGeometry<TrigPoly>& g, const TrigPoly& f);
/// Exact on S^2 when the theta-average of f is a polynomial in z; otherwise by
/// quadrature.
ModelIntegral integrate_density(const ChartGeometry<ProfileRing>& g, const ProfileRing& f,
                                const QuadratureOptions& options = {});

/// (omega - Omega)^m / omega^m through nu^order.
template <CoefficientRing R>
NuSeries<R> liouville_ratio_series(const ChartGeometry<R>& g, int order);

/// Components of i(X)(omega - Omega) at each nu-order through `order`.
template <CoefficientRing R>
std::vector<std::vector<R>> moment_contraction(const ChartGeometry<R>& g, const std::vector<R>& X, int order);

/// Primitive per order, then normalized. Admits constant fields on the torus
/// and c d/dtheta on S^2; throws NotQuantumHamiltonian on a nonzero period
/// and std::invalid_argument for other fields.
template <CoefficientRing R>
QuantumMomentMap<R> solve_moment(const ChartGeometry<R>& g, const std::vector<R>& X, int order,
                                 Normalization mode = Normalization::paper_c);

/// Adjusts the additive constant per order; idempotent.
template <CoefficientRing R>
QuantumMomentMap<R> normalize(QuantumMomentMap<R> mu, const ChartGeometry<R>& g, Normalization mode);

/// mu - (nu k / 2) Delta mu, normalized by the integral.
QuantumMomentMap<ProfileRing> kahler_shift(const QuantumMomentMap<ProfileRing>& mu, const KahlerModelS2& model);

/// F_{c1^p} with f the mean-zero Hamiltonian of the field:
/// (1/2pi)^p int -(m-p+1) f Ric^p ^ omega^{m-p} - (p/2) Delta f Ric^{p-1} ^ omega^{m-p+1}.
ModelIntegral futaki_c1p(const KahlerModelS2& model, const ProfileRing& f, int p, const QuadratureOptions& options = {});

/// Coefficients of nu^{q-m}, q = 0..2.
struct InvariantReport {
  std::string model;
  Rational k;
  int m = 1;
  std::vector<ModelIntegral> values;
  std::vector<std::string> provenance;
  /// Second route, when computed.
  std::vector<ModelIntegral> cross_check;
};

/// Tr(mu) through relative order 2 by the trace density, with the nu^{2-m}
/// term cross-checked against -(2pi)^{-m}/24 int mu^0 mu(nabla) omega^m/m!.
template <CoefficientRing R>
InvariantReport invariant_leading(const ChartGeometry<R>& g, const QuantumMomentMap<R>& mu);

/// Tr(mu~^k) on S^2 by the trace density, cross-checked against the
/// combination of F_{c1} and F_{c1^2}; throws std::runtime_error when the
/// routes disagree beyond the tolerance.
InvariantReport kahler_invariant(const KahlerModelS2& model, double tolerance = 1e-8,
                                 const QuadratureOptions& options = {});

/// mu~^k - mu^k per order (must be constant) and the quotient
/// int mu~^k (omega - Omega)^m / int (omega - Omega)^m.
struct NormalizationBridge {
  std::vector<Rational> difference;
  std::vector<Scalar> quotient;
};
NormalizationBridge normalization_bridge(const KahlerModelS2& model, int order = 2);

}  // namespace fedtrace
