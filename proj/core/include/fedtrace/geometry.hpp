#pragma once

#include <map>
#include <string>
#include <vector>

#include "fedtrace/profile_ring.hpp"
#include "fedtrace/ring.hpp"
#include "fedtrace/trig_poly.hpp"
#include "fedtrace/upoly.hpp"
#include "fedtrace/weyl.hpp"

namespace fedtrace {

/// Flat row-major storage for rank-r tensors on an n-chart.
struct Indexer {
  int n = 0;
  std::size_t operator()(int i, int j) const { return static_cast<std::size_t>(i * n + j); }
  std::size_t operator()(int i, int j, int k) const { return static_cast<std::size_t>((i * n + j) * n + k); }
  std::size_t operator()(int i, int j, int k, int l) const {
    return static_cast<std::size_t>(((i * n + j) * n + k) * n + l);
  }
};

/// Named failures of a validation pass; empty means valid.
struct ValidationReport {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
  std::string to_string() const;
};

/// Symplectic chart data over a coefficient ring.
///
/// christoffel is stored as Gamma^k_{ij} at index (k, i, j). Each entry of
/// omega_series is the component matrix alpha_ij of a 2-form
/// alpha = (1/2) alpha_ij dx^i ^ dx^j; entry r - 1 is the nu^r coefficient of
/// Omega. Curvature uses
///   R^r_{jkl} = d_k Gamma^r_{lj} - d_l Gamma^r_{kj}
///             + Gamma^r_{kp} Gamma^p_{lj} - Gamma^r_{lp} Gamma^p_{kj},
/// i.e. R(d_k, d_l) d_j = R^r_{jkl} d_r, and Ric_{ab} = R^k_{bka}.
template <CoefficientRing R>
class ChartGeometry {
 public:
  ChartGeometry(FiberMetric metric, std::vector<R> christoffel, std::vector<std::vector<R>> omega_series);

  int n() const { return metric_.dimension(); }
  int m() const { return metric_.dimension() / 2; }
  const FiberMetric& metric() const { return metric_; }
  const std::vector<R>& christoffel() const { return gamma_; }
  const R& christoffel(int k, int i, int j) const { return gamma_[ix_(k, i, j)]; }
  const std::vector<std::vector<R>>& omega_series() const { return alphas_; }
  /// Component (i, j) of alpha_r, zero beyond the stored series.
  R alpha(int r, int i, int j) const;
  const R& riemann(int r, int j, int k, int l) const { return riemann_[ix_(r, j, k, l)]; }
  const R& ricci(int a, int b) const { return ricci_[ix_(a, b)]; }
  const std::vector<R>& riemann() const { return riemann_; }
  const std::vector<R>& ricci() const { return ricci_; }

  /// Same data with Omega replaced.
  ChartGeometry with_omega(std::vector<std::vector<R>> omega_series) const;

  /// Torsion-freeness, total symmetry of omega_{il} Gamma^l_{jk}, closedness of
  /// every alpha_r.
  ValidationReport validate() const;

 private:
  FiberMetric metric_;
  Indexer ix_;
  std::vector<R> gamma_;
  std::vector<std::vector<R>> alphas_;
  std::vector<R> riemann_;
  std::vector<R> ricci_;
};

/// Curvature tensor and Ricci tensor of the given Christoffel symbols.
template <CoefficientRing R>
std::pair<std::vector<R>, std::vector<R>> curvature_from_christoffel(int n, const std::vector<R>& christoffel);

/// (1/2) omega_{lk} Gamma^k_{ij} y^l y^j dx^i.
template <CoefficientRing R>
WeylSection<R> gamma_bar(const ChartGeometry<R>& g);

/// (1/4) omega_{ir} R^r_{jkl} y^i y^j dx^k ^ dx^l.
template <CoefficientRing R>
WeylSection<R> r_bar(const ChartGeometry<R>& g);

/// Omega = sum_r nu^r alpha_r as a central 2-form.
template <CoefficientRing R>
WeylSection<R> omega_section(const ChartGeometry<R>& g);

/// Covariant derivative of a covariant rank-r tensor; the new index comes first.
template <CoefficientRing R>
std::vector<R> covariant_derivative(const ChartGeometry<R>& g, const std::vector<R>& tensor, int rank);

/// Hessian nabla^2_{ij} f = d_i d_j f - Gamma^k_{ij} d_k f.
template <CoefficientRing R>
std::vector<R> hessian(const ChartGeometry<R>& g, const R& f);

/// X_f with i(X_f) omega = df, i.e. X_f^i = d_j f Lambda^{ji}.
template <CoefficientRing R>
std::vector<R> hamiltonian_field(const ChartGeometry<R>& g, const R& f);

/// (L_X nabla)^k_{ij} from the coordinate formula for the Lie derivative of
/// a connection.
template <CoefficientRing R>
std::vector<R> lie_derivative_connection(const ChartGeometry<R>& g, const std::vector<R>& X);

/// Lie derivative of a Weyl-valued form along X (y transforms like dx).
template <CoefficientRing R>
WeylSection<R> lie_derivative(const std::vector<R>& X, const WeylSection<R>& a);

/// Cahen-Gutt momentum
///   Lambda^{pa} Lambda^{qb} nabla_p nabla_q Ric_{ab}
///   - 1/2 Ric_{pq} Ric^{pq} + 1/4 R_{pqrs} R^{pqrs},
/// with R_{pqrs} = omega_{pt} R^t_{qrs} and indices raised by Lambda on the left.
template <CoefficientRing R>
R cahen_gutt_momentum(const ChartGeometry<R>& g);

/// Evaluates a 2-form on two vector fields: alpha_ij X^i Y^j.
template <CoefficientRing R>
R pair_form(const std::vector<R>& alpha, const std::vector<R>& X, const std::vector<R>& Y, int n);

// ---- bundled models ----

/// Standard R^{2m} with Gamma = 0 and constant Omega coefficients.
template <CoefficientRing R>
ChartGeometry<R> build_flat(int m, const std::vector<std::vector<Rational>>& omega_series);

/// Totally symmetric 3-tensor T_{ijk}, keyed by sorted index triples.
using SymmetricTensor3 = std::map<std::array<int, 3>, TrigPoly>;

/// Standard torus T^{2m} with Gamma^l_{jk} = Lambda^{li} T_{ijk} and the given
/// Omega coefficients (component matrices).
ChartGeometry<TrigPoly> build_torus(int m, const SymmetricTensor3& perturbation,
                                    const std::vector<std::vector<TrigPoly>>& omega_series);

/// Christoffel symbols Lambda^{li} T_{ijk} of a symmetric 3-tensor.
std::vector<TrigPoly> christoffel_from_tensor(const FiberMetric& metric, const SymmetricTensor3& T);

/// Circle-invariant Kahler metric on S^2 in action-angle coordinates (z, theta):
/// omega = dz ^ dtheta, g = dz^2 / phi + phi dtheta^2, Omega = nu k Ric(omega).
class KahlerModelS2 {
 public:
  KahlerModelS2(UPoly profile, Rational k);

  const UPoly& profile() const { return phi_; }
  const Rational& k() const { return k_; }
  const ChartGeometry<ProfileRing>& geometry() const { return geometry_; }
  /// Metric components g_ab and inverse g^ab.
  const std::vector<ProfileRing>& metric() const { return g_; }
  const std::vector<ProfileRing>& inverse_metric() const { return ginv_; }
  const ProfileRing& scalar_curvature() const { return scalar_; }
  /// Ricci form components rho_ab = omega_ad g^dc Ric_cb.
  const std::vector<ProfileRing>& ricci_form() const { return ricci_form_; }
  /// Positive Laplacian -div grad f (the Riemannian volume is omega).
  ProfileRing laplacian(const ProfileRing& f) const;
  /// X = d/dtheta.
  std::vector<ProfileRing> rotation_field() const;

  /// Boundary values, positivity, smoothness of the toric metric.
  static ValidationReport validate_profile(const UPoly& phi);

 private:
  UPoly phi_;
  Rational k_;
  std::vector<ProfileRing> g_;
  std::vector<ProfileRing> ginv_;
  ChartGeometry<ProfileRing> geometry_;
  ProfileRing scalar_;
  std::vector<ProfileRing> ricci_form_;
};

/// Levi-Civita Christoffels of a metric given with its inverse.
template <CoefficientRing R>
std::vector<R> levi_civita(int n, const std::vector<R>& g, const std::vector<R>& ginv);

}  // namespace fedtrace
