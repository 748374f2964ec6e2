#pragma once

// Internal helpers shared by the functional modules.

#include <cmath>
#include <vector>

#include "radsob/numerics.hpp"

namespace radsob::detail {

/// Integral of g over [lo, hi) where hi may be +inf, breaking at `kinks`.
inline Integral radial_integral(const ScalarFn& g, double lo, double hi, const std::vector<double>& kinks,
                                const QuadratureConfig& cfg) {
  return integrate(g, lo, hi, kinks, cfg);
}

/// Propagates an integral I +- dI to I^{1/p}.
inline std::pair<double, double> root_of(const Integral& I, double p) {
  const double v = std::pow(std::max(I.value, 0.0), 1.0 / p);
  const double e = I.value > 0.0 ? v * (I.error / I.value) / p : std::pow(I.error, 1.0 / p);
  return {v, e};
}

}  // namespace radsob::detail
