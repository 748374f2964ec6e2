#pragma once

// Radial test functions and the Sobolev / Poincare functionals on a model
// manifold. Norms are taken against the volume |S^{n-1}| psi(r)^{n-1} dr.

#include <string>
#include <utility>
#include <vector>

#include "radsob/manifold.hpp"
#include "radsob/numerics.hpp"

namespace radsob {

enum class ProfileKind { aubin_talenti, truncated_at, grid, composed };

struct RadialProfile {
  ProfileKind kind = ProfileKind::composed;
  ScalarFn value;
  ScalarFn derivative;
  ScalarFn second_derivative;  // optional
  /// f vanishes on [support_radius, inf).
  double support_radius = kInf;
  /// Functionals integrate from here; nonzero only for pushforwards whose
  /// table starts above the origin.
  double inner_radius = 0.0;
  /// f ~ r^{-hint} at infinity; 0 when unknown or faster than any power.
  double decay_exponent_hint = 0.0;
  /// Points where f' or f'' jumps; quadrature panels break there.
  std::vector<double> kinks;
  std::string description;
  double b = 0.0;    // aubin_talenti / truncated_at parameter
  double eps = 0.0;  // truncated_at parameter

  [[nodiscard]] double operator()(double r) const { return value(r); }
  [[nodiscard]] bool has_second_derivative() const { return static_cast<bool>(second_derivative); }
};

struct FunctionalValue {
  double value = 0.0;
  double quadrature_error = 0.0;
  QuadratureConfig config_used;
};

/// (1 + b r^2)^{-(n-2)/2}.
RadialProfile aubin_talenti(int n, double b);
/// [f_b(r) - f_b(eps)]^+, supported in [0, eps] with a kink at eps. Any eps > 0.
RadialProfile truncated_at_profile(int n, double b, double eps);
/// exp(-a r^2).
RadialProfile gaussian_profile(double a);
/// Monotone cubic through (r_i, f_i); r_0 = 0 and the last value must be 0.
RadialProfile grid_profile(const std::vector<std::pair<double, double>>& samples);
/// Generic profile from closures.
RadialProfile make_profile(ScalarFn value, ScalarFn derivative, ScalarFn second_derivative, double support_radius,
                           std::vector<double> kinks, std::string description, double decay_exponent_hint = 0.0);

/// (|S^{n-1}| int |f|^p psi^{n-1} dr)^{1/p}. Throws Error(divergent).
FunctionalValue lp_norm(const ModelManifold& M, const RadialProfile& f, double p, const QuadratureConfig& cfg = {});
/// (|S^{n-1}| int |f'|^2 psi^{n-1} dr)^{1/2}.
FunctionalValue grad_l2_norm(const ModelManifold& M, const RadialProfile& f, const QuadratureConfig& cfg = {});
/// ||grad f||_2 / ||f||_{2*}. Throws Error(zero_profile) if ||f||_{2*} = 0.
FunctionalValue sobolev_quotient(const ModelManifold& M, const RadialProfile& f, const QuadratureConfig& cfg = {});

/// Closed-form Talenti constant pi^{-1/2} (n(n-2))^{-1/2} (Gamma(n)/Gamma(n/2))^{1/n}.
double talenti_constant(int n);
/// 1 / sobolev_quotient(R^n, AT(1)); cached per n and cross-checked against
/// talenti_constant to 1e-6 (Error(non_convergent) on disagreement).
double euclidean_best_constant(int n);

/// 2/(sqrt(k)(n-1)) - ||f||_2 / ||grad f||_2. Throws
/// Error(curvature_hypothesis_failed) unless -psi''/psi <= -k on a radial grid.
double mckean_poincare_margin(const ModelManifold& M, const RadialProfile& f, double k,
                              const QuadratureConfig& cfg = {});

}  // namespace radsob
