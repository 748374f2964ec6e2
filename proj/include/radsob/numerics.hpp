#pragma once

// Shared numerical kernels: adaptive Gauss-Kronrod quadrature on finite and
// semi-infinite intervals, bracketed root finding, cubic Hermite interpolation
// and an explicit Dormand-Prince 8(5,3) integrator with dense output.

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace radsob {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using ScalarFn = std::function<double(double)>;

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Radius where semi-infinite integrals switch to the mapped tail panel.
  /// Zero selects it per integrand: the first R = R0 * 2^k at which the
  /// integrand falls below abs_tol * 1e-2 and keeps decreasing at 2R and 4R.
  double truncation_radius = 0.0;
  int max_subdivisions = 2000;

  /// Throws Error(domain) on a violated invariant.
  void validate() const;
};

struct Integral {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

/// Integrates f over [a, b]; b may be +inf. An integrable singularity is
/// allowed at a (the rule never samples the endpoints).
///
/// Semi-infinite domains are split at a truncation radius R. [a, R] is
/// integrated adaptively and [R, inf) through the substitution r = R / t.
/// If the integrand is non-finite, never decays, or fails the monotone tail
/// probe at R, 2R, 4R, the integral is reported as Error(divergent).
Integral integrate(const ScalarFn& f, double a, double b, const QuadratureConfig& cfg = {});

/// Same as integrate() but forces panel breaks at the given interior points.
/// `breaks` need not be sorted; points outside (a, b) are ignored.
Integral integrate(const ScalarFn& f, double a, double b, std::span<const double> breaks,
                   const QuadratureConfig& cfg = {});

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

/// Returns x in [lo, hi] with |g(x)| <= tol or a final bracket no wider than
/// tol (or than the floating point resolution at x). Throws
/// Error(no_sign_change) if g(lo) and g(hi) share a sign.
double find_root(const ScalarFn& g, double lo, double hi, double tol = 1e-14);

// ---------------------------------------------------------------------------
// Interpolation
// ---------------------------------------------------------------------------

/// Piecewise cubic Hermite interpolant on strictly increasing knots.
/// Queries outside [front, back] throw Error(range).
class CubicHermite {
 public:
  CubicHermite() = default;
  CubicHermite(std::vector<double> x, std::vector<double> y, std::vector<double> dydx);

  [[nodiscard]] double operator()(double x) const { return eval(x, 0); }
  [[nodiscard]] double derivative(double x) const { return eval(x, 1); }
  [[nodiscard]] double second_derivative(double x) const { return eval(x, 2); }

  [[nodiscard]] double front() const { return x_.front(); }
  [[nodiscard]] double back() const { return x_.back(); }
  [[nodiscard]] std::span<const double> knots() const { return x_; }
  [[nodiscard]] std::span<const double> values() const { return y_; }
  [[nodiscard]] std::span<const double> slopes() const { return d_; }
  [[nodiscard]] bool empty() const { return x_.empty(); }

  /// Index i with x_i <= x <= x_{i+1}.
  [[nodiscard]] std::size_t segment(double x) const;

 private:
  [[nodiscard]] double eval(double x, int order) const;

  std::vector<double> x_, y_, d_;
};

/// Shape-preserving (Fritsch-Carlson / PCHIP) slopes for monotone data.
/// A finite `left_slope` overrides the one-sided estimate at the first knot.
std::vector<double> pchip_slopes(std::span<const double> x, std::span<const double> y,
                                 double left_slope = std::numeric_limits<double>::quiet_NaN());

/// Monotone C^1 interpolant of (x, y) built from pchip_slopes.
CubicHermite monotone_cubic(std::vector<double> x, std::vector<double> y,
                            double left_slope = std::numeric_limits<double>::quiet_NaN());

/// Schumaker's C^1 quadratic spline: one extra knot per interval chosen so
/// that monotone and convex data yield monotone and convex interpolants.
/// The second derivative is piecewise constant.
class QuadraticSpline {
 public:
  QuadraticSpline() = default;
  /// Node slopes default to the three-point estimate; a finite `left_slope`
  /// fixes the slope at the first knot.
  QuadraticSpline(std::span<const double> x, std::span<const double> y,
                  double left_slope = std::numeric_limits<double>::quiet_NaN());

  [[nodiscard]] double operator()(double x) const { return eval(x, 0); }
  [[nodiscard]] double derivative(double x) const { return eval(x, 1); }
  [[nodiscard]] double second_derivative(double x) const { return eval(x, 2); }
  [[nodiscard]] double front() const { return knots_.front(); }
  [[nodiscard]] double back() const { return knots_.back(); }

 private:
  [[nodiscard]] double eval(double x, int order) const;

  // Piece i covers [knots_[i], knots_[i+1]]: c0 + c1 t + c2 t^2, t = x - knots_[i].
  std::vector<double> knots_, c0_, c1_, c2_;
};

/// n points from a to b; geometric spacing when `logarithmic` is set.
std::vector<double> make_grid(double a, double b, int n, bool logarithmic);

// ---------------------------------------------------------------------------
// ODE initial value problems
// ---------------------------------------------------------------------------

struct OdeConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  /// Zero lets the integrator choose the first step.
  double initial_step = 0.0;
  long max_steps = 200000;
  /// Offset from a singular origin used by radial solvers.
  double r_start = 1e-6;

  void validate() const;
};

using OdeRhs = std::function<void(double r, std::span<const double> y, std::span<double> dydr)>;
using OdeRegion = std::function<bool(double r, std::span<const double> y)>;

enum class OdeStatus { completed, left_region };

/// Piecewise polynomial dense output, one 7th-order interpolant per step.
class DenseSolution {
 public:
  [[nodiscard]] double r_begin() const { return r_begin_; }
  [[nodiscard]] double r_end() const { return r_end_; }
  [[nodiscard]] OdeStatus status() const { return status_; }
  [[nodiscard]] std::size_t dimension() const { return dim_; }
  [[nodiscard]] std::size_t steps() const { return steps_.size(); }
  [[nodiscard]] std::size_t rejected_steps() const { return rejected_; }
  [[nodiscard]] std::vector<double> step_points() const;

  /// State at r in [r_begin, r_end]; throws Error(range) outside.
  [[nodiscard]] std::vector<double> state(double r) const;
  /// d(state)/dr of the interpolant itself (not the right-hand side).
  [[nodiscard]] std::vector<double> state_derivative(double r) const;
  [[nodiscard]] double component(double r, std::size_t i) const;
  [[nodiscard]] double component_derivative(double r, std::size_t i) const;

 private:
  friend DenseSolution solve_ivp(const OdeRhs&, double, std::vector<double>, double,
                                 const OdeConfig&, const OdeRegion&);

  struct Step {
    double r0 = 0.0;
    double h = 0.0;
    std::vector<double> coeff;  // 8 blocks of `dim` coefficients
  };

  [[nodiscard]] const Step& locate(double r) const;
  void eval(const Step& s, double r, std::span<double> y, std::span<double> dy) const;

  double r_begin_ = 0.0;
  double r_end_ = 0.0;
  OdeStatus status_ = OdeStatus::completed;
  std::size_t dim_ = 0;
  std::size_t rejected_ = 0;
  std::vector<Step> steps_;
};

/// Integrates y' = rhs(r, y) from (r0, y0) to r_end. If `admissible` is set
/// and returns false after an accepted step, integration stops there with
/// status left_region; the dense output still covers that last step.
/// Throws Error(step_failure) on step underflow, Error(max_steps) when
/// cfg.max_steps is exceeded.
DenseSolution solve_ivp(const OdeRhs& rhs, double r0, std::vector<double> y0, double r_end,
                        const OdeConfig& cfg = {}, const OdeRegion& admissible = {});

}  // namespace radsob
