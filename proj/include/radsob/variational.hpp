#pragma once

// Radial Euler-Lagrange equation -u'' - m(r) u' = u^{2*-1}, shooting from the
// origin, energy identities, the heat-kernel supersolution residual and the
// composite rigidity experiment.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "radsob/manifold.hpp"
#include "radsob/numerics.hpp"
#include "radsob/profiles.hpp"
#include "radsob/transform.hpp"

namespace radsob {

/// -u''(r) - m(r) u'(r) - u(r)^{2*-1}; u^{2*-1} taken as |u|^{2*-2} u.
double el_residual(const ModelManifold& M, const RadialProfile& u, double r);

/// c (1 + lambda r^2)^{-(n-2)/2} with lambda = c^{4/(n-2)} / (n(n-2)), the
/// Euclidean solution with u(0) = c.
RadialProfile normalized_bubble(int n, double c);

enum class ShootingStatus { decayed, crossed_zero, diverged, maxed_out };
std::string to_string(ShootingStatus s);

struct ShootingResult {
  double c = 0.0;
  ShootingStatus status = ShootingStatus::decayed;
  double crossing_radius = kInf;  // crossed_zero only
  double r_end = 0.0;             // end of the trajectory used for energies
  std::optional<DenseSolution> trajectory;
  /// u on [0, r_end]; the series start covers [0, r_start). Empty when maxed_out.
  RadialProfile solution;
  double e_grad = 0.0;  // |S^{n-1}| int_0^{r_end} u'^2 A
  double e_pot = 0.0;   // |S^{n-1}| int_0^{r_end} |u|^{2*} A
  /// e_grad - e_pot.
  double energy_balance = 0.0;
  /// |S^{n-1}| A(r_end) u(r_end) u'(r_end), the boundary term on a finite range.
  double boundary_flux = 0.0;
};

/// Integrates u'' = -m u' - |u|^{2*-2} u from cfg.r_start with the series
/// u = c - c^{2*-1} r^2 / (2n). decayed: reached r_max with u > 0;
/// crossed_zero: u hit 0; diverged: u or u' left every finite bound.
ShootingResult shoot(const ModelManifold& M, double c, double r_max, const OdeConfig& cfg = {},
                     const QuadratureConfig& quad = {});

/// |e_grad - e_pot - boundary_flux| / e_grad (0 when both energies vanish).
/// Throws Error(divergent) if an energy is not finite.
double energy_identity_check(const ShootingResult& result);
/// Same identity for an arbitrary profile on [0, r_end].
double energy_identity_check(const ModelManifold& M, const RadialProfile& u, double r_end,
                             const QuadratureConfig& cfg = {});

/// (4 pi t)^{-n/2} exp(-r^2 / 4t).
double euclidean_heat_kernel(int n, double r, double t);
/// d_t K - d_r^2 K - m(r) d_r K for the Euclidean kernel transplanted to M.
double heat_supersolution_residual(const ModelManifold& M, double r, double t);
/// Minimum of the residual over (r, t) pairs.
double heat_supersolution_residual(const ModelManifold& M, const std::vector<std::pair<double, double>>& grid);

enum class Verdict { euclidean_within_tol, strictly_non_euclidean };
std::string to_string(Verdict v);

struct RigidityConfig {
  QuadratureConfig quad;
  RadialRange range{1e-6, 20.0, 800};
  double eps = 0.5;  // truncation radius of the truncated AT curve
  int curve_points = 60;
  double verdict_tol = 1e-8;
};

struct RigidityReport {
  std::string label;
  double c_e = 0.0;                // Euclidean best constant
  double quotient_reference = 0.0;  // 1 / C_E
  std::vector<double> b;
  std::vector<double> quotient;            // untruncated AT, +inf when divergent
  std::vector<double> truncated_quotient;  // [AT(b) - AT(b)(eps)]^+
  std::vector<double> s, rho;
  std::vector<double> v, sigma, sigma_e;
  double quotient_deficit = kInf;  // sup_b |Q C_E - 1|
  double rho_deficit = kInf;       // sup_s |1 - rho|
  double iso_deficit = kInf;       // sup_v |Sigma - Sigma_E| / Sigma_E
  /// Curve name -> message for curves that could not be computed.
  std::map<std::string, std::string> curve_errors;
  Verdict verdict = Verdict::strictly_non_euclidean;
};

RigidityReport rigidity_experiment(const ModelManifold& M, const std::vector<double>& b_sweep,
                                   const RigidityConfig& cfg = {});

}  // namespace radsob
