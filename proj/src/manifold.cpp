#include "radsob/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "radsob/error.hpp"
#include "radsob/expression.hpp"

namespace radsob {

struct WarpFunction::Impl {
  ScalarFn value, first, second;
  QuadraticSpline spline;
  double last_r = 0.0, last_value = 0.0, last_slope = 0.0;
};

WarpFunction WarpFunction::euclidean() { return {}; }

WarpFunction WarpFunction::hyperbolic(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorKind::domain, "hyperbolic warp needs k > 0");
  WarpFunction w;
  w.kind_ = WarpKind::hyperbolic;
  w.k_ = k;
  w.sqrt_k_ = std::sqrt(k);
  w.description_ = "hyperbolic(k=" + std::to_string(k) + ")";
  return w;
}

WarpFunction WarpFunction::closed_form(ScalarFn value, ScalarFn first, ScalarFn second, std::string description) {
  if (!value || !first || !second) throw Error(ErrorKind::domain, "closed-form warp needs psi, psi' and psi''");
  WarpFunction w;
  w.kind_ = WarpKind::closed_form;
  w.description_ = std::move(description);
  auto impl = std::make_shared<Impl>();
  impl->value = std::move(value);
  impl->first = std::move(first);
  impl->second = std::move(second);
  w.impl_ = std::move(impl);
  return w;
}

WarpFunction WarpFunction::expression(const std::string& formula) {
  auto e = std::make_shared<const Expression>(Expression::parse(formula));
  return closed_form([e](double r) { return e->eval(r).value; }, [e](double r) { return e->eval(r).d1; },
                     [e](double r) { return e->eval(r).d2; }, formula);
}

WarpFunction WarpFunction::grid(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 2) throw Error(ErrorKind::domain, "grid warp needs at least two samples");
  if (samples.front().first != 0.0 || samples.front().second != 0.0) {
    throw Error(ErrorKind::domain, "grid warp must start at the sample (0, 0)");
  }
  std::vector<double> x, y;
  for (const auto& [r, v] : samples) {
    x.push_back(r);
    y.push_back(v);
  }
  auto impl = std::make_shared<Impl>();
  impl->spline = QuadraticSpline(x, y, 1.0);
  impl->last_r = x.back();
  impl->last_value = y.back();
  impl->last_slope = impl->spline.derivative(x.back());
  WarpFunction w;
  w.kind_ = WarpKind::grid;
  w.sample_limit_ = x.back();
  w.description_ = "grid(" + std::to_string(samples.size()) + " samples)";
  w.impl_ = std::move(impl);
  return w;
}

double WarpFunction::value(double r) const {
  switch (kind_) {
    case WarpKind::euclidean: return r;
    case WarpKind::hyperbolic: return std::sinh(sqrt_k_ * r) / sqrt_k_;
    case WarpKind::closed_form: return impl_->value(r);
    case WarpKind::grid:
      if (r > impl_->last_r) return impl_->last_value + impl_->last_slope * (r - impl_->last_r);
      return impl_->spline(r);
  }
  return 0.0;
}

double WarpFunction::first_derivative(double r) const {
  switch (kind_) {
    case WarpKind::euclidean: return 1.0;
    case WarpKind::hyperbolic: return std::cosh(sqrt_k_ * r);
    case WarpKind::closed_form: return impl_->first(r);
    case WarpKind::grid:
      if (r > impl_->last_r) return impl_->last_slope;
      return impl_->spline.derivative(r);
  }
  return 0.0;
}

double WarpFunction::second_derivative(double r) const {
  switch (kind_) {
    case WarpKind::euclidean: return 0.0;
    case WarpKind::hyperbolic: return sqrt_k_ * std::sinh(sqrt_k_ * r);
    case WarpKind::closed_form: return impl_->second(r);
    case WarpKind::grid:
      if (r > impl_->last_r) return 0.0;
      return impl_->spline.second_derivative(r);
  }
  return 0.0;
}

void ModelManifold::validate_dimension() const {
  if (n < 3) throw Error(ErrorKind::domain, "dimension n = " + std::to_string(n) + " must be at least 3");
}

ModelManifold euclidean_space(int n) {
  ModelManifold M{n, WarpFunction::euclidean(), "euclidean"};
  M.validate_dimension();
  return M;
}

ModelManifold hyperbolic_space(int n, double k) {
  ModelManifold M{n, WarpFunction::hyperbolic(k), "hyperbolic"};
  M.validate_dimension();
  return M;
}

double unit_sphere_area(int n) {
  if (n < 1) throw Error(ErrorKind::domain, "sphere dimension must be positive");
  return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
}

double critical_exponent(int n) {
  if (n < 3) throw Error(ErrorKind::domain, "critical exponent needs n >= 3");
  return 2.0 * n / (n - 2.0);
}

namespace {

void require_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw Error(ErrorKind::domain, "radius r = " + std::to_string(r) + " must be finite and positive");
  }
}

}  // namespace

double area_density(const ModelManifold& M, double r) {
  require_radius(r);
  return std::pow(M.psi.value(r), M.n - 1);
}

double distance_laplacian(const ModelManifold& M, double r) {
  require_radius(r);
  switch (M.psi.kind()) {
    case WarpKind::euclidean: return (M.n - 1) / r;
    case WarpKind::hyperbolic: {
      const double sk = std::sqrt(M.psi.curvature_parameter());
      return (M.n - 1) * sk / std::tanh(sk * r);
    }
    default: return (M.n - 1) * M.psi.first_derivative(r) / M.psi.value(r);
  }
}

double radial_sectional_curvature(const ModelManifold& M, double r) {
  require_radius(r);
  switch (M.psi.kind()) {
    case WarpKind::euclidean: return 0.0;
    case WarpKind::hyperbolic: return -M.psi.curvature_parameter();
    default: return -M.psi.second_derivative(r) / M.psi.value(r);
  }
}

double sphere_measure(const ModelManifold& M, double r) {
  return unit_sphere_area(M.n) * area_density(M, r);
}

ComparisonMargins comparison_margins(const ModelManifold& M, double r) {
  require_radius(r);
  const double psi = M.psi.value(r);
  return {psi - r, M.psi.first_derivative(r) - 1.0, distance_laplacian(M, r) - (M.n - 1) / r,
          std::pow(psi, M.n - 1) - std::pow(r, M.n - 1)};
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck& ValidationReport::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw Error(ErrorKind::range, "no validation check named '" + name + "'");
}

ValidationReport validate(const ModelManifold& M, const std::vector<double>& grid, double ch_tol, double r_start) {
  M.validate_dimension();
  if (grid.empty()) throw Error(ErrorKind::domain, "validation grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i]) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw Error(ErrorKind::domain, "validation grid must be positive and strictly increasing");
    }
  }
  if (!(ch_tol >= 0.0)) throw Error(ErrorKind::domain, "ch_tol must be nonnegative");

  ValidationReport rep;
  rep.ch_tol = ch_tol;
  rep.second_derivative_low_accuracy = M.psi.second_derivative_low_accuracy();

  auto minimum = [&](const std::string& name, auto margin_at, double tol, std::string note = {}) {
    ValidationCheck c{name, true, kInf, grid.front(), std::move(note)};
    for (double r : grid) {
      const double m = margin_at(r);
      if (!(m >= c.margin)) {  // also catches NaN
        c.margin = m;
        c.worst_r = r;
      }
    }
    c.passed = c.margin >= -tol;
    rep.checks.push_back(std::move(c));
  };

  const double psi0 = M.psi.value(0.0);
  rep.checks.push_back({"class_f_origin", std::abs(psi0) <= 1e-12, -std::abs(psi0), 0.0, "psi(0) = 0"});
  const double slope_dev = std::abs(M.psi.value(r_start) / r_start - 1.0);
  rep.checks.push_back(
      {"class_f_slope", slope_dev <= 1e-6, 1e-6 - slope_dev, r_start, "|psi(r_start)/r_start - 1| <= 1e-6"});

  bool finite = true;
  double bad_r = 0.0;
  for (double r : grid) {
    if (!std::isfinite(M.psi.value(r)) || !std::isfinite(M.psi.first_derivative(r)) ||
        !std::isfinite(M.psi.second_derivative(r))) {
      finite = false;
      bad_r = r;
      break;
    }
  }
  rep.checks.push_back({"smoothness", finite, finite ? 0.0 : -kInf, bad_r, "psi, psi', psi'' finite"});

  minimum("class_f_positive", [&](double r) { return M.psi.value(r); }, 0.0, "psi(r) > 0");
  rep.checks.back().passed = rep.checks.back().margin > 0.0;
  minimum("convexity", [&](double r) { return M.psi.second_derivative(r); }, ch_tol,
          rep.second_derivative_low_accuracy ? "psi'' >= -ch_tol (psi'' from interpolant, low accuracy)"
                                             : "psi'' >= -ch_tol");
  minimum("warp_comparison", [&](double r) { return comparison_margins(M, r).warp; }, ch_tol, "psi(r) >= r");
  minimum("derivative_comparison", [&](double r) { return comparison_margins(M, r).derivative; }, ch_tol,
          "psi'(r) >= 1");
  minimum("laplacian_comparison", [&](double r) { return comparison_margins(M, r).laplacian; }, ch_tol,
          "m(r) >= (n-1)/r");
  minimum("area_comparison", [&](double r) { return comparison_margins(M, r).area; }, ch_tol,
          "A(r) >= r^(n-1)");
  return rep;
}

}  // namespace radsob
