#pragma once

// Reference values computed independently of the library: composite Simpson
// sums, closed forms and special-function identities. Nothing here calls
// into radsob.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Composite Simpson rule with `panels` (even) subintervals on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, long panels) {
  if (panels % 2 != 0) ++panels;
  const double h = (b - a) / static_cast<double>(panels);
  double odd = 0.0, even = 0.0;
  for (long i = 1; i < panels; ++i) {
    const double v = f(a + h * static_cast<double>(i));
    (i % 2 ? odd : even) += v;
  }
  return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

/// Simpson on [a, b] after substituting x = a + (b - a) t^2, which removes
/// the sqrt-type endpoint behaviour and concentrates nodes near a.
inline double simpson_clustered(const std::function<double(double)>& f, double a, double b, long panels) {
  return simpson([&](double t) { return f(a + (b - a) * t * t) * 2.0 * (b - a) * t; }, 0.0, 1.0, panels);
}

/// Simpson on [0, inf) through r = t / (1 - t); f must decay fast enough
/// that the transformed integrand vanishes at t = 1.
inline double simpson_half_line(const std::function<double(double)>& f, long panels) {
  return simpson(
      [&](double t) {
        if (t >= 1.0) return 0.0;
        const double w = 1.0 - t;
        const double v = f(t / w) / (w * w);
        return std::isfinite(v) ? v : 0.0;
      },
      0.0, 1.0, panels);
}

inline double sphere_area(int n) {
  return 2.0 * std::pow(pi, n / 2.0) / std::tgamma(n / 2.0);
}

/// Closed-form Talenti constant.
inline double talenti(int n) {
  const double nn = n;
  return std::pow(pi, -0.5) * std::pow(nn * (nn - 2.0), -0.5) *
         std::pow(std::tgamma(nn) / std::tgamma(nn / 2.0), 1.0 / nn);
}

inline double critical_exponent(int n) { return 2.0 * n / (n - 2.0); }

/// Aubin-Talenti bubble normalised so that -u'' - (n-1)/r u' = u^{2*-1}, u(0) = c.
inline double bubble(int n, double c, double r) {
  const double lam = std::pow(c, 4.0 / (n - 2.0)) / (n * (n - 2.0));
  return c * std::pow(1.0 + lam * r * r, -(n - 2.0) / 2.0);
}

inline double bubble_prime(int n, double c, double r) {
  const double lam = std::pow(c, 4.0 / (n - 2.0)) / (n * (n - 2.0));
  return -c * (n - 2.0) * lam * r * std::pow(1.0 + lam * r * r, -n / 2.0);
}

/// int_0^inf x^a (1 + x^2)^{-c} dx = B((a+1)/2, c - (a+1)/2) / 2.
inline double beta_moment(double a, double c) {
  const double p = (a + 1.0) / 2.0, q = c - p;
  return 0.5 * std::exp(std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q));
}

/// ||AT_b||_p on R^n in closed form.
inline double at_lp_norm(int n, double b, double p) {
  const double I = std::pow(b, -n / 2.0) * beta_moment(n - 1.0, p * (n - 2.0) / 2.0);
  return std::pow(sphere_area(n) * I, 1.0 / p);
}

/// ||grad AT_b||_2 on R^n in closed form.
inline double at_grad_norm(int n, double b) {
  const double I = (n - 2.0) * (n - 2.0) * std::pow(b, 1.0 - n / 2.0) * beta_moment(n + 1.0, n);
  return std::sqrt(sphere_area(n) * I);
}

/// s(r) on H^3 with curvature -1: 1 / (coth r - 1).
inline double h3_s(double r) { return 1.0 / (std::cosh(r) / std::sinh(r) - 1.0); }

/// sinh(x) - x without cancellation for small x.
inline double sinh_minus_x(double x) {
  if (std::abs(x) > 0.5) return std::sinh(x) - x;
  double term = x * x * x / 6.0, sum = 0.0;
  for (int k = 1; k < 30; ++k) {
    sum += term;
    term *= x * x / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
  }
  return sum;
}

/// int_0^r sinh^2 = (sinh(2r) - 2r) / 4.
inline double h3_sinh2_integral(double r) { return sinh_minus_x(2.0 * r) / 4.0; }

/// Equal-volume radius on H^3: (3 * int_0^r sinh^2)^{1/3}.
inline double h3_varrho(double r) { return std::cbrt(3.0 * h3_sinh2_integral(r)); }

/// rho(s(r)) = sinh(r) / s(r) on H^3.
inline double h3_rho_at(double r) { return std::sinh(r) * (std::cosh(r) / std::sinh(r) - 1.0); }

/// asinh(1) by Newton on sinh x = 1 starting from the series guess.
inline double asinh_one() {
  double x = 0.88;
  for (int i = 0; i < 60; ++i) x -= (std::sinh(x) - 1.0) / std::cosh(x);
  return x;
}

}  // namespace oracle
