#pragma once

// Rotationally symmetric model manifolds dr^2 + psi(r)^2 dtheta^2 and the
// comparison quantities derived from the warp function psi.

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "radsob/numerics.hpp"

namespace radsob {

enum class WarpKind { euclidean, hyperbolic, closed_form, grid };

class WarpFunction {
 public:
  /// psi(r) = r.
  static WarpFunction euclidean();
  /// psi(r) = sinh(sqrt(k) r) / sqrt(k), constant curvature -k.
  static WarpFunction hyperbolic(double k);
  /// psi, psi' and psi'' supplied by the caller.
  static WarpFunction closed_form(ScalarFn value, ScalarFn first, ScalarFn second, std::string description);
  /// Parsed formula in r; derivatives by forward-mode differentiation.
  static WarpFunction expression(const std::string& formula);
  /// Samples (r_i, psi_i) with r_0 = 0, psi_0 = 0, reconstructed by a shape
  /// preserving quadratic spline with psi'(0) = 1 and continued linearly
  /// past the last sample. psi'' is piecewise constant (low accuracy).
  static WarpFunction grid(const std::vector<std::pair<double, double>>& samples);

  [[nodiscard]] double value(double r) const;
  [[nodiscard]] double first_derivative(double r) const;
  [[nodiscard]] double second_derivative(double r) const;

  [[nodiscard]] WarpKind kind() const { return kind_; }
  /// k for hyperbolic warps, 0 otherwise.
  [[nodiscard]] double curvature_parameter() const { return k_; }
  [[nodiscard]] bool second_derivative_low_accuracy() const { return kind_ == WarpKind::grid; }
  [[nodiscard]] const std::string& description() const { return description_; }
  /// Largest sample radius for grid warps, +inf otherwise.
  [[nodiscard]] double sample_limit() const { return sample_limit_; }

 private:
  struct Impl;

  WarpKind kind_ = WarpKind::euclidean;
  double k_ = 0.0;
  double sqrt_k_ = 0.0;
  double sample_limit_ = kInf;
  std::string description_ = "euclidean";
  std::shared_ptr<const Impl> impl_;
};

struct ModelManifold {
  int n = 3;
  WarpFunction psi = WarpFunction::euclidean();
  std::string label = "euclidean";

  /// Throws Error(domain) unless n >= 3.
  void validate_dimension() const;
  [[nodiscard]] bool is_euclidean() const { return psi.kind() == WarpKind::euclidean; }
};

ModelManifold euclidean_space(int n);
ModelManifold hyperbolic_space(int n, double k = 1.0);

/// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2).
double unit_sphere_area(int n);
/// 2* = 2n / (n - 2).
double critical_exponent(int n);

/// psi(r)^{n-1}. All r-dependent operations throw Error(domain) for r <= 0.
double area_density(const ModelManifold& M, double r);
/// m(r) = (n - 1) psi'(r) / psi(r).
double distance_laplacian(const ModelManifold& M, double r);
/// -psi''(r) / psi(r).
double radial_sectional_curvature(const ModelManifold& M, double r);
/// |S^{n-1}| psi(r)^{n-1}.
double sphere_measure(const ModelManifold& M, double r);

struct ValidationCheck {
  std::string name;
  bool passed = true;
  double margin = 0.0;   // minimum over the grid; >= -tol passes
  double worst_r = 0.0;  // where the minimum occurs
  std::string note;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  double ch_tol = 1e-10;
  bool second_derivative_low_accuracy = false;

  [[nodiscard]] bool passed() const;
  [[nodiscard]] const ValidationCheck& check(const std::string& name) const;
};

/// Records class F membership, convexity and the comparison inequalities
/// psi >= r, psi' >= 1, m >= (n-1)/r, A >= r^{n-1}. Never throws on a failed
/// check; throws Error(domain) for an empty, unsorted or nonpositive grid.
ValidationReport validate(const ModelManifold& M, const std::vector<double>& grid, double ch_tol = 1e-10,
                          double r_start = 1e-6);

/// Pointwise margins of the four comparison inequalities at r.
struct ComparisonMargins {
  double warp = 0.0;        // psi(r) - r
  double derivative = 0.0;  // psi'(r) - 1
  double laplacian = 0.0;   // m(r) - (n-1)/r
  double area = 0.0;        // psi(r)^{n-1} - r^{n-1}
};
ComparisonMargins comparison_margins(const ModelManifold& M, double r);

}  // namespace radsob
