#include "radsob/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "radial.hpp"
#include "radsob/error.hpp"

namespace radsob {

RadialProfile make_profile(ScalarFn value, ScalarFn derivative, ScalarFn second_derivative, double support_radius,
                           std::vector<double> kinks, std::string description, double decay_exponent_hint) {
  if (!value || !derivative) throw Error(ErrorKind::domain, "profile needs value and derivative");
  if (!(support_radius > 0.0)) throw Error(ErrorKind::domain, "support radius must be positive");
  RadialProfile f;
  f.kind = ProfileKind::composed;
  f.value = std::move(value);
  f.derivative = std::move(derivative);
  f.second_derivative = std::move(second_derivative);
  f.support_radius = support_radius;
  f.kinks = std::move(kinks);
  f.description = std::move(description);
  f.decay_exponent_hint = decay_exponent_hint;
  return f;
}

RadialProfile aubin_talenti(int n, double b) {
  if (n < 3) throw Error(ErrorKind::domain, "Aubin-Talenti profile needs n >= 3");
  if (!(b > 0.0) || !std::isfinite(b)) throw Error(ErrorKind::domain, "Aubin-Talenti profile needs b > 0");
  const double q = (n - 2.0) / 2.0;
  RadialProfile f;
  f.kind = ProfileKind::aubin_talenti;
  f.b = b;
  f.value = [b, q](double r) { return std::pow(1.0 + b * r * r, -q); };
  f.derivative = [b, n](double r) { return -(n - 2.0) * b * r * std::pow(1.0 + b * r * r, -n / 2.0); };
  f.second_derivative = [b, n](double r) {
    const double w = 1.0 + b * r * r;
    return (n - 2.0) * b * std::pow(w, -n / 2.0 - 1.0) * (n * b * r * r - w);
  };
  f.decay_exponent_hint = n - 2.0;
  f.description = "aubin_talenti(b=" + std::to_string(b) + ")";
  return f;
}

RadialProfile truncated_at_profile(int n, double b, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorKind::domain, "truncation radius eps must be positive");
  RadialProfile at = aubin_talenti(n, b);
  const double level = at.value(eps);
  RadialProfile f;
  f.kind = ProfileKind::truncated_at;
  f.b = b;
  f.eps = eps;
  f.support_radius = eps;
  f.kinks = {eps};
  f.value = [v = at.value, level, eps](double r) { return r < eps ? v(r) - level : 0.0; };
  f.derivative = [d = at.derivative, eps](double r) { return r < eps ? d(r) : 0.0; };
  f.second_derivative = [d2 = at.second_derivative, eps](double r) { return r < eps ? d2(r) : 0.0; };
  f.description = "truncated(b=" + std::to_string(b) + ", eps=" + std::to_string(eps) + ")";
  return f;
}

RadialProfile gaussian_profile(double a) {
  if (!(a > 0.0)) throw Error(ErrorKind::domain, "gaussian profile needs a > 0");
  auto f = make_profile([a](double r) { return std::exp(-a * r * r); },
                        [a](double r) { return -2.0 * a * r * std::exp(-a * r * r); },
                        [a](double r) { return (4.0 * a * a * r * r - 2.0 * a) * std::exp(-a * r * r); }, kInf, {},
                        "gaussian(a=" + std::to_string(a) + ")");
  return f;
}

RadialProfile grid_profile(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 2) throw Error(ErrorKind::domain, "grid profile needs at least two samples");
  if (samples.front().first != 0.0) throw Error(ErrorKind::domain, "grid profile must start at r = 0");
  if (samples.back().second != 0.0) {
    throw Error(ErrorKind::domain, "grid profile must end with value 0 (compact support)");
  }
  std::vector<double> x, y;
  for (const auto& [r, v] : samples) {
    x.push_back(r);
    y.push_back(v);
  }
  auto h = std::make_shared<const CubicHermite>(monotone_cubic(x, y));
  const double last = x.back();
  RadialProfile f;
  f.kind = ProfileKind::grid;
  f.support_radius = last;
  f.kinks.assign(x.begin() + 1, x.end());
  f.value = [h, last](double r) { return r < last ? (*h)(r) : 0.0; };
  f.derivative = [h, last](double r) { return r < last ? h->derivative(r) : 0.0; };
  f.second_derivative = [h, last](double r) { return r < last ? h->second_derivative(r) : 0.0; };
  f.description = "grid(" + std::to_string(samples.size()) + " samples)";
  return f;
}

namespace {

// Algebraic decay can never beat exponential volume growth, and on R^n the
// power count decides convergence before any numerical tail probe could.
void screen_decay(const ModelManifold& M, const RadialProfile& f, double power, const char* what) {
  if (std::isfinite(f.support_radius) || !(f.decay_exponent_hint > 0.0)) return;
  const bool euclid_divergent = M.is_euclidean() && power <= M.n;
  const bool hyperbolic = M.psi.kind() == WarpKind::hyperbolic;
  if (euclid_divergent || hyperbolic) {
    throw Error(ErrorKind::divergent, std::string(what) + " of " + f.description + " diverges on " + M.label);
  }
}

Integral weighted_integral(const ModelManifold& M, const RadialProfile& f, const ScalarFn& g,
                           const QuadratureConfig& cfg) {
  const double S = unit_sphere_area(M.n);
  const int k = M.n - 1;
  ScalarFn integrand = [&](double r) {
    const double v = g(r);
    if (v == 0.0) return 0.0;
    return S * v * std::pow(M.psi.value(r), k);
  };
  return detail::radial_integral(integrand, f.inner_radius, f.support_radius, f.kinks, cfg);
}

}  // namespace

FunctionalValue lp_norm(const ModelManifold& M, const RadialProfile& f, double p, const QuadratureConfig& cfg) {
  M.validate_dimension();
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorKind::domain, "lp_norm needs finite p >= 1");
  screen_decay(M, f, p * f.decay_exponent_hint, "L^p norm");
  Integral I = weighted_integral(
      M, f, [&](double r) { return std::pow(std::abs(f.value(r)), p); }, cfg);
  auto [v, e] = detail::root_of(I, p);
  return {v, e, cfg};
}

FunctionalValue grad_l2_norm(const ModelManifold& M, const RadialProfile& f, const QuadratureConfig& cfg) {
  M.validate_dimension();
  screen_decay(M, f, 2.0 * (f.decay_exponent_hint + 1.0), "gradient norm");
  Integral I = weighted_integral(
      M, f,
      [&](double r) {
        const double d = f.derivative(r);
        return d * d;
      },
      cfg);
  auto [v, e] = detail::root_of(I, 2.0);
  return {v, e, cfg};
}

FunctionalValue sobolev_quotient(const ModelManifold& M, const RadialProfile& f, const QuadratureConfig& cfg) {
  const FunctionalValue lp = lp_norm(M, f, critical_exponent(M.n), cfg);
  if (lp.value == 0.0) throw Error(ErrorKind::zero_profile, f.description + " has zero L^{2*} norm");
  const FunctionalValue grad = grad_l2_norm(M, f, cfg);
  const double q = grad.value / lp.value;
  const double rel = grad.quadrature_error / std::max(grad.value, 1e-300) + lp.quadrature_error / lp.value;
  return {q, q * rel, cfg};
}

double talenti_constant(int n) {
  if (n < 3) throw Error(ErrorKind::domain, "Talenti constant needs n >= 3");
  const double nn = n;
  return 1.0 / std::sqrt(std::numbers::pi * nn * (nn - 2.0)) *
         std::pow(std::tgamma(nn) / std::tgamma(nn / 2.0), 1.0 / nn);
}

double euclidean_best_constant(int n) {
  static std::mutex mu;
  static std::map<int, double> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  const double ce = 1.0 / sobolev_quotient(euclidean_space(n), aubin_talenti(n, 1.0), cfg).value;
  const double closed = talenti_constant(n);
  if (std::abs(ce / closed - 1.0) > 1e-6) {
    throw Error(ErrorKind::non_convergent, "best constant by quadrature " + std::to_string(ce) +
                                               " disagrees with the Talenti value " + std::to_string(closed));
  }
  std::lock_guard lock(mu);
  cache.emplace(n, ce);
  return ce;
}

double mckean_poincare_margin(const ModelManifold& M, const RadialProfile& f, double k, const QuadratureConfig& cfg) {
  M.validate_dimension();
  if (!(k > 0.0)) {
    throw Error(ErrorKind::curvature_hypothesis_failed, "curvature bound -k needs k > 0");
  }
  const double r_hi = std::isfinite(f.support_radius) ? std::max(f.support_radius, 1.0) : 20.0;
  for (double r : make_grid(1e-3, r_hi, 200, true)) {
    const double curv = radial_sectional_curvature(M, r);
    if (!(curv <= -k + 1e-10 * k)) {
      throw Error(ErrorKind::curvature_hypothesis_failed,
                  "radial curvature " + std::to_string(curv) + " at r = " + std::to_string(r) + " exceeds -k = " +
                      std::to_string(-k));
    }
  }
  const double l2 = lp_norm(M, f, 2.0, cfg).value;
  const double grad = grad_l2_norm(M, f, cfg).value;
  if (grad == 0.0) throw Error(ErrorKind::zero_profile, f.description + " has zero gradient");
  return 2.0 / (std::sqrt(k) * (M.n - 1)) - l2 / grad;
}

}  // namespace radsob
