#include <algorithm>
#include <cmath>
#include <string>

#include "radsob/error.hpp"
#include "radsob/numerics.hpp"

namespace radsob {

CubicHermite::CubicHermite(std::vector<double> x, std::vector<double> y, std::vector<double> dydx)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(dydx)) {
  if (x_.size() < 2 || y_.size() != x_.size() || d_.size() != x_.size()) {
    throw Error(ErrorKind::domain, "CubicHermite needs at least two knots and matching value/slope arrays");
  }
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i]) || !std::isfinite(d_[i])) {
      throw Error(ErrorKind::domain, "CubicHermite data must be finite (knot " + std::to_string(i) + ")");
    }
    if (i > 0 && !(x_[i] > x_[i - 1])) {
      throw Error(ErrorKind::domain, "CubicHermite knots must be strictly increasing (knot " +
                                         std::to_string(i) + ")");
    }
  }
}

std::size_t CubicHermite::segment(double x) const {
  const double slack = 1e-13 * std::max({1.0, std::abs(x_.front()), std::abs(x_.back())});
  if (!(x >= x_.front() - slack && x <= x_.back() + slack)) {
    throw Error(ErrorKind::range, "x = " + std::to_string(x) + " outside [" + std::to_string(x_.front()) +
                                      ", " + std::to_string(x_.back()) + "]");
  }
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double CubicHermite::eval(double x, int order) const {
  if (x_.empty()) throw Error(ErrorKind::range, "empty interpolant");
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double delta = (y_[i + 1] - y_[i]) / h;
  const double c1 = d_[i];
  const double c2 = (3.0 * delta - 2.0 * d_[i] - d_[i + 1]) / h;
  const double c3 = (d_[i] + d_[i + 1] - 2.0 * delta) / (h * h);
  const double t = x - x_[i];
  switch (order) {
    case 0: return y_[i] + t * (c1 + t * (c2 + t * c3));
    case 1: return c1 + t * (2.0 * c2 + 3.0 * t * c3);
    default: return 2.0 * c2 + 6.0 * t * c3;
  }
}

std::vector<double> pchip_slopes(std::span<const double> x, std::span<const double> y, double left_slope) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error(ErrorKind::domain, "pchip_slopes needs two or more points");
  std::vector<double> h(n - 1), delta(n - 1), d(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    if (!(h[k] > 0.0)) throw Error(ErrorKind::domain, "pchip_slopes: abscissae must increase");
    delta[k] = (y[k + 1] - y[k]) / h[k];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
  } else {
    for (std::size_t k = 1; k + 1 < n; ++k) {
      if (delta[k - 1] * delta[k] <= 0.0) continue;
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    auto edge = [](double h0, double h1, double m0, double m1) {
      double s = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
      if (std::signbit(s) != std::signbit(m0) || m0 == 0.0) return 0.0;
      if (std::signbit(m0) != std::signbit(m1) && std::abs(s) > 3.0 * std::abs(m0)) s = 3.0 * m0;
      return s;
    };
    d[0] = edge(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = edge(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }
  if (std::isfinite(left_slope)) d[0] = left_slope;
  return d;
}

CubicHermite monotone_cubic(std::vector<double> x, std::vector<double> y, double left_slope) {
  auto d = pchip_slopes(x, y, left_slope);
  return CubicHermite(std::move(x), std::move(y), std::move(d));
}

QuadraticSpline::QuadraticSpline(std::span<const double> x, std::span<const double> y, double left_slope) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error(ErrorKind::domain, "QuadraticSpline needs two or more points");
  std::vector<double> h(n - 1), delta(n - 1), s(n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    if (!(h[k] > 0.0) || !std::isfinite(y[k]) || !std::isfinite(y[k + 1])) {
      throw Error(ErrorKind::domain, "QuadraticSpline: abscissae must increase and data be finite (knot " +
                                         std::to_string(k + 1) + ")");
    }
    delta[k] = (y[k + 1] - y[k]) / h[k];
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    s[k] = (h[k] * delta[k - 1] + h[k - 1] * delta[k]) / (h[k - 1] + h[k]);
  }
  s[0] = std::isfinite(left_slope) ? left_slope : (n > 2 ? 2.0 * delta[0] - s[1] : delta[0]);
  s[n - 1] = n > 2 ? 2.0 * delta[n - 2] - s[n - 2] : (std::isfinite(left_slope) ? 2.0 * delta[0] - s[0] : delta[0]);

  auto piece = [this](double x0, double y0, double slope, double curvature) {
    knots_.push_back(x0);
    c0_.push_back(y0);
    c1_.push_back(slope);
    c2_.push_back(curvature);
  };
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double s0 = s[k], s1 = s[k + 1], d = delta[k], hk = h[k];
    if (std::abs(s0 + s1 - 2.0 * d) <= 1e-15 * (std::abs(s0) + std::abs(s1) + std::abs(d))) {
      piece(x[k], y[k], s0, (s1 - s0) / (2.0 * hk));
      continue;
    }
    // Split at x[k] + lam * hk; the slope there follows from matching the data.
    double lam = 0.5;
    if (s1 != s0) {
      const double p = (d - s0) / (s1 - s0);
      if (p >= 0.0 && p <= 1.0) {
        const double lo = std::max(1.0 - 2.0 * p, 0.0), hi = std::min(2.0 - 2.0 * p, 1.0);
        // At lo or hi one side degenerates to a line; the midpoint keeps both
        // pieces strictly convex (or concave).
        lam = std::clamp(0.5 * (lo + hi), 1e-6, 1.0 - 1e-6);
      }
    }
    const double a = lam * hk, b = hk - a;
    const double sbar = (2.0 * d * hk - s0 * a - s1 * b) / hk;
    piece(x[k], y[k], s0, (sbar - s0) / (2.0 * a));
    const double ymid = y[k] + s0 * a + (sbar - s0) * a / 2.0;
    piece(x[k] + a, ymid, sbar, (s1 - sbar) / (2.0 * b));
  }
  knots_.push_back(x[n - 1]);
}

double QuadraticSpline::eval(double x, int order) const {
  if (knots_.empty()) throw Error(ErrorKind::range, "empty spline");
  const double slack = 1e-13 * std::max({1.0, std::abs(knots_.front()), std::abs(knots_.back())});
  if (!(x >= knots_.front() - slack && x <= knots_.back() + slack)) {
    throw Error(ErrorKind::range, "x = " + std::to_string(x) + " outside [" + std::to_string(knots_.front()) +
                                      ", " + std::to_string(knots_.back()) + "]");
  }
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  std::size_t i = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
  i = std::min(i, c0_.size() - 1);
  const double t = x - knots_[i];
  switch (order) {
    case 0: return c0_[i] + t * (c1_[i] + t * c2_[i]);
    case 1: return c1_[i] + 2.0 * t * c2_[i];
    default: return 2.0 * c2_[i];
  }
}

std::vector<double> make_grid(double a, double b, int n, bool logarithmic) {
  if (n < 1 || !std::isfinite(a) || !std::isfinite(b) || (n > 1 && !(b > a))) {
    throw Error(ErrorKind::domain, "grid needs finite a < b and n >= 1");
  }
  if (logarithmic && !(a > 0.0)) throw Error(ErrorKind::domain, "logarithmic grid needs a > 0");
  if (n == 1) return {a};
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    g[static_cast<std::size_t>(i)] =
        logarithmic ? std::exp(std::log(a) + t * (std::log(b) - std::log(a))) : a + t * (b - a);
  }
  g.front() = a;
  g.back() = b;
  return g;
}

}  // namespace radsob
