#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "radsob/error.hpp"
#include "radsob/numerics.hpp"

namespace radsob {
namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

struct Segment {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool operator<(const Segment& o) const { return error < o.error; }
};

double sample(const ScalarFn& f, double x, ErrorKind on_bad) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    throw Error(on_bad, "integrand is not finite at x = " + std::to_string(x));
  }
  return v;
}

Segment kronrod15(const ScalarFn& f, double a, double b, ErrorKind on_bad) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = sample(f, center, on_bad);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> fv1{}, fv2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = sample(f, center - dx, on_bad);
    fv2[j] = sample(f, center + dx, on_bad);
    const double sum = fv1[j] + fv2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }
  const double scale = std::abs(half);
  resabs *= scale;
  resasc *= scale;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > kTiny / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
  return {a, b, resk * half, err};
}

// Global adaptive bisection over the given initial pieces. Stops once the
// summed error estimate is below max(abs_tol, floor, rel_tol * |I|).
Integral adapt(const ScalarFn& f, const std::vector<double>& edges, const QuadratureConfig& cfg,
               double floor, ErrorKind on_bad) {
  std::priority_queue<Segment> heap;
  double total = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Segment s = kronrod15(f, edges[i], edges[i + 1], on_bad);
    total += s.value;
    err += s.error;
    heap.push(s);
  }
  int count = static_cast<int>(heap.size());
  auto target = [&] { return std::max({cfg.abs_tol, floor, cfg.rel_tol * std::abs(total)}); };
  while (err > target()) {
    if (count >= cfg.max_subdivisions) {
      throw Error(ErrorKind::non_convergent,
                  "subdivision limit " + std::to_string(cfg.max_subdivisions) +
                      " reached with error estimate " + std::to_string(err));
    }
    const Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw Error(ErrorKind::non_convergent, "interval collapsed to floating point resolution near x = " +
                                                 std::to_string(worst.a));
    }
    heap.pop();
    const Segment left = kronrod15(f, worst.a, mid, on_bad);
    const Segment right = kronrod15(f, mid, worst.b, on_bad);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {total, err, count};
}

std::vector<double> edges_for(double a, double b, std::span<const double> breaks) {
  std::vector<double> edges{a};
  std::vector<double> inner;
  for (double p : breaks) {
    if (p > a && p < b) inner.push_back(p);
  }
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  edges.insert(edges.end(), inner.begin(), inner.end());
  edges.push_back(b);
  return edges;
}

bool tail_decreasing(const ScalarFn& f, double r, double threshold) {
  const double g1 = std::abs(f(r));
  const double g2 = std::abs(f(2.0 * r));
  const double g4 = std::abs(f(4.0 * r));
  if (!std::isfinite(g1) || !std::isfinite(g2) || !std::isfinite(g4)) {
    throw Error(ErrorKind::divergent, "integrand is not finite in the tail near r = " + std::to_string(r));
  }
  if (g1 == 0.0 && g2 == 0.0 && g4 == 0.0) return true;
  if (threshold > 0.0 && g1 >= threshold) return false;
  return g2 < g1 && g4 < g2;
}

Integral integrate_semi_infinite(const ScalarFn& f, double a, std::span<const double> breaks,
                                 const QuadratureConfig& cfg) {
  double radius = cfg.truncation_radius;
  double last_break = a;
  for (double p : breaks) {
    if (std::isfinite(p) && p > last_break) last_break = p;
  }
  if (radius > 0.0) {
    radius = std::max(radius, last_break);
    if (radius <= a) radius = std::max(2.0 * std::abs(a), a + 1.0);
    if (!tail_decreasing(f, radius, 0.0)) {
      throw Error(ErrorKind::divergent,
                  "integrand does not decrease on [R, 4R] for R = " + std::to_string(radius));
    }
  } else {
    const double threshold = cfg.abs_tol * 1e-2;
    radius = std::max({1.0, 2.0 * std::abs(a), a + 1.0, last_break});
    bool found = false;
    for (int k = 0; k < 1000 && std::isfinite(4.0 * radius); ++k, radius *= 2.0) {
      if (tail_decreasing(f, radius, threshold)) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error(ErrorKind::divergent, "integrand never decays below " + std::to_string(threshold));
    }
  }

  Integral head = adapt(f, edges_for(a, radius, breaks), cfg, 0.0, ErrorKind::divergent);

  // Tail [R, inf) via r = R / t, t in (0, 1].
  const double R = radius;
  ScalarFn mapped = [&f, R](double t) {
    const double r = R / t;
    const double v = f(r);
    return v == 0.0 ? 0.0 : v * (R / (t * t));
  };
  Integral tail;
  try {
    tail = adapt(mapped, {0.0, 1.0}, cfg, 0.5 * cfg.rel_tol * std::abs(head.value),
                 ErrorKind::divergent);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::non_convergent) throw;
    throw Error(ErrorKind::divergent,
                "tail integral beyond R = " + std::to_string(R) + " does not converge");
  }
  return {head.value + tail.value, head.error + tail.error, head.subdivisions + tail.subdivisions};
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || truncation_radius < 0.0 || max_subdivisions < 1) {
    throw Error(ErrorKind::domain, "QuadratureConfig requires rel_tol > 0, abs_tol > 0, "
                                   "truncation_radius >= 0 and max_subdivisions >= 1");
  }
}

Integral integrate(const ScalarFn& f, double a, double b, const QuadratureConfig& cfg) {
  return integrate(f, a, b, std::span<const double>{}, cfg);
}

Integral integrate(const ScalarFn& f, double a, double b, std::span<const double> breaks,
                   const QuadratureConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(a) || std::isnan(b) || !(b > a)) {
    throw Error(ErrorKind::domain, "integration domain [" + std::to_string(a) + ", " +
                                       std::to_string(b) + "] is empty or inverted");
  }
  if (std::isinf(b)) return integrate_semi_infinite(f, a, breaks, cfg);
  return adapt(f, edges_for(a, b, breaks), cfg, 0.0, ErrorKind::domain);
}

}  // namespace radsob
