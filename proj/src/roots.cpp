#include <cmath>
#include <cstdint>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "radsob/error.hpp"
#include "radsob/numerics.hpp"

namespace radsob {

double find_root(const ScalarFn& g, double lo, double hi, double tol) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi) || !(tol > 0.0)) {
    throw Error(ErrorKind::domain, "find_root needs a finite bracket lo < hi and tol > 0");
  }
  const double glo = g(lo);
  const double ghi = g(hi);
  if (std::isnan(glo) || std::isnan(ghi)) {
    throw Error(ErrorKind::domain, "find_root: function is NaN at a bracket end");
  }
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if (std::signbit(glo) == std::signbit(ghi)) {
    throw Error(ErrorKind::no_sign_change, "no sign change on [" + std::to_string(lo) + ", " +
                                               std::to_string(hi) + "]");
  }

  auto done = [tol](double a, double b) {
    const double width = b - a;
    return width <= tol || width <= 4.0 * std::numeric_limits<double>::epsilon() *
                                          std::max(std::abs(a), std::abs(b));
  };

  std::uintmax_t iterations = 200;
  try {
    auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, done, iterations);
    const double ga = g(a);
    const double gb = g(b);
    if (std::abs(ga) <= tol) return a;
    if (std::abs(gb) <= tol) return b;
    if (done(a, b)) return std::abs(ga) <= std::abs(gb) ? a : b;
    lo = a;
    hi = b;
  } catch (const std::exception&) {
    // Fall through to plain bisection on the original bracket.
  }

  double flo = g(lo);
  for (int i = 0; i < 2000 && !done(lo, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = g(mid);
    if (fm == 0.0) return mid;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace radsob
