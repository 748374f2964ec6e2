#include "radsob/variational.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "radsob/error.hpp"

namespace radsob {

namespace {

double source_power(int n) { return (n + 2.0) / (n - 2.0); }  // 2* - 1

double signed_power(double u, double p) { return std::copysign(std::pow(std::abs(u), p), u); }

}  // namespace

double el_residual(const ModelManifold& M, const RadialProfile& u, double r) {
  M.validate_dimension();
  if (!(r > 0.0)) throw Error(ErrorKind::domain, "el_residual needs r > 0");
  if (!u.has_second_derivative()) throw Error(ErrorKind::domain, u.description + " has no second derivative");
  return -u.second_derivative(r) - distance_laplacian(M, r) * u.derivative(r) -
         signed_power(u.value(r), source_power(M.n));
}

RadialProfile normalized_bubble(int n, double c) {
  if (n < 3) throw Error(ErrorKind::domain, "normalized bubble needs n >= 3");
  if (!(c > 0.0)) throw Error(ErrorKind::domain, "normalized bubble needs c > 0");
  const double lambda = std::pow(c, 4.0 / (n - 2.0)) / (n * (n - 2.0));
  RadialProfile at = aubin_talenti(n, lambda);
  RadialProfile u = at;
  u.value = [v = at.value, c](double r) { return c * v(r); };
  u.derivative = [d = at.derivative, c](double r) { return c * d(r); };
  u.second_derivative = [d2 = at.second_derivative, c](double r) { return c * d2(r); };
  u.description = "bubble(c=" + std::to_string(c) + ")";
  return u;
}

std::string to_string(ShootingStatus s) {
  switch (s) {
    case ShootingStatus::decayed: return "decayed";
    case ShootingStatus::crossed_zero: return "crossed_zero";
    case ShootingStatus::diverged: return "diverged";
    case ShootingStatus::maxed_out: return "maxed_out";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  return v == Verdict::euclidean_within_tol ? "euclidean_within_tol" : "strictly_non_euclidean";
}

namespace {

struct Energies {
  double grad = 0.0, pot = 0.0, flux = 0.0;
};

Energies energies(const ModelManifold& M, const RadialProfile& u, double r_end, const std::vector<double>& breaks,
                  const QuadratureConfig& cfg) {
  const double S = unit_sphere_area(M.n);
  const double q = critical_exponent(M.n);
  const int k = M.n - 1;
  ScalarFn grad = [&](double r) {
    const double d = u.derivative(r);
    return d == 0.0 ? 0.0 : S * d * d * std::pow(M.psi.value(r), k);
  };
  ScalarFn pot = [&](double r) {
    const double v = u.value(r);
    return v == 0.0 ? 0.0 : S * std::pow(std::abs(v), q) * std::pow(M.psi.value(r), k);
  };
  std::vector<double> inner;
  for (double b : breaks) {
    if (b > 0.0 && b < r_end) inner.push_back(b);
  }
  Energies e;
  e.grad = integrate(grad, 0.0, r_end, inner, cfg).value;
  e.pot = integrate(pot, 0.0, r_end, inner, cfg).value;
  e.flux = S * std::pow(M.psi.value(r_end), k) * u.value(r_end) * u.derivative(r_end);
  return e;
}

}  // namespace

ShootingResult shoot(const ModelManifold& M, double c, double r_max, const OdeConfig& cfg,
                     const QuadratureConfig& quad) {
  M.validate_dimension();
  cfg.validate();
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorKind::domain, "shooting height c must be positive");
  const double r0 = cfg.r_start;
  if (!(r_max > r0) || !std::isfinite(r_max)) throw Error(ErrorKind::domain, "r_max must exceed r_start");
  const int n = M.n;
  const double p = source_power(n);
  const double cp = std::pow(c, p);

  OdeRhs rhs = [&M, p](double r, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -distance_laplacian(M, r) * y[1] - signed_power(y[0], p);
  };
  constexpr double kBound = 1e100;
  OdeRegion region = [](double, std::span<const double> y) {
    return y[0] > 0.0 && std::isfinite(y[0]) && std::isfinite(y[1]) && std::abs(y[0]) < kBound &&
           std::abs(y[1]) < kBound;
  };

  ShootingResult out;
  out.c = c;
  std::vector<double> y0 = {c - cp * r0 * r0 / (2.0 * n), -cp * r0 / n};
  try {
    out.trajectory = solve_ivp(rhs, r0, y0, r_max, cfg, region);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::max_steps) throw;
    out.status = ShootingStatus::maxed_out;
    out.r_end = r0;
    out.e_grad = out.e_pot = out.energy_balance = out.boundary_flux = std::nan("");
    return out;
  }
  const DenseSolution& sol = *out.trajectory;
  double r_end = sol.r_end();
  if (sol.status() == OdeStatus::completed) {
    out.status = ShootingStatus::decayed;
  } else {
    const auto y = sol.state(r_end);
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || std::abs(y[0]) >= kBound || std::abs(y[1]) >= kBound) {
      out.status = ShootingStatus::diverged;
    } else {
      out.status = ShootingStatus::crossed_zero;
      const auto pts = sol.step_points();
      double lo = pts.size() >= 2 ? pts[pts.size() - 2] : r0;
      if (!(sol.component(lo, 0) > 0.0)) lo = r0;
      r_end = find_root([&](double r) { return sol.component(r, 0); }, lo, r_end, 1e-15);
      out.crossing_radius = r_end;
    }
  }
  out.r_end = r_end;

  auto traj = std::make_shared<const DenseSolution>(sol);
  const bool crossed = out.status == ShootingStatus::crossed_zero;
  RadialProfile u;
  u.kind = ProfileKind::composed;
  u.support_radius = r_end;
  u.kinks = {r0};
  u.value = [traj, c, cp, r0, r_end, crossed, n](double r) {
    if (r < r0) return c - cp * r * r / (2.0 * n);
    if (r >= r_end && crossed) return 0.0;
    return traj->component(std::min(r, r_end), 0);
  };
  u.derivative = [traj, cp, r0, r_end, crossed, n](double r) {
    if (r < r0) return -cp * r / n;
    if (r >= r_end && crossed) return 0.0;
    return traj->component(std::min(r, r_end), 1);
  };
  u.second_derivative = [traj, cp, r0, r_end, crossed, n](double r) {
    if (r < r0) return -cp / n;
    if (r >= r_end && crossed) return 0.0;
    return traj->component_derivative(std::min(r, r_end), 1);
  };
  u.description = "shot(c=" + std::to_string(c) + ") on " + M.label;
  out.solution = u;

  if (out.status == ShootingStatus::diverged) {
    out.e_grad = out.e_pot = out.energy_balance = out.boundary_flux = std::nan("");
    return out;
  }
  const Energies e = energies(M, u, r_end, {r0}, quad);
  out.e_grad = e.grad;
  out.e_pot = e.pot;
  out.energy_balance = e.grad - e.pot;
  out.boundary_flux = crossed ? 0.0 : e.flux;
  return out;
}

namespace {

double discrepancy(double grad, double pot, double flux) {
  if (!std::isfinite(grad) || !std::isfinite(pot)) {
    throw Error(ErrorKind::divergent, "energy identity needs finite energies");
  }
  if (grad == 0.0 && pot == 0.0) return 0.0;
  return std::abs(grad - pot - flux) / grad;
}

}  // namespace

double energy_identity_check(const ShootingResult& result) {
  return discrepancy(result.e_grad, result.e_pot, result.boundary_flux);
}

double energy_identity_check(const ModelManifold& M, const RadialProfile& u, double r_end,
                             const QuadratureConfig& cfg) {
  M.validate_dimension();
  if (!(r_end > 0.0) || !std::isfinite(r_end)) throw Error(ErrorKind::domain, "r_end must be positive and finite");
  const double hi = std::min(r_end, u.support_radius);
  Energies e = energies(M, u, hi, u.kinks, cfg);
  if (hi < r_end) e.flux = 0.0;
  return discrepancy(e.grad, e.pot, e.flux);
}

double euclidean_heat_kernel(int n, double r, double t) {
  if (!(t > 0.0) || !(r >= 0.0)) throw Error(ErrorKind::domain, "heat kernel needs r >= 0 and t > 0");
  return std::pow(4.0 * std::numbers::pi * t, -n / 2.0) * std::exp(-r * r / (4.0 * t));
}

double heat_supersolution_residual(const ModelManifold& M, double r, double t) {
  M.validate_dimension();
  if (!(r > 0.0) || !(t > 0.0)) throw Error(ErrorKind::domain, "heat residual needs r > 0 and t > 0");
  const int n = M.n;
  const double K = euclidean_heat_kernel(n, r, t);
  const double a = r * r / (4.0 * t * t);
  const double dt = K * (a - n / (2.0 * t));
  const double dr = -K * r / (2.0 * t);
  const double drr = K * (a - 1.0 / (2.0 * t));
  return dt - drr - distance_laplacian(M, r) * dr;
}

double heat_supersolution_residual(const ModelManifold& M, const std::vector<std::pair<double, double>>& grid) {
  if (grid.empty()) throw Error(ErrorKind::domain, "heat residual grid is empty");
  double m = kInf;
  for (const auto& [r, t] : grid) m = std::min(m, heat_supersolution_residual(M, r, t));
  return m;
}

RigidityReport rigidity_experiment(const ModelManifold& M, const std::vector<double>& b_sweep,
                                   const RigidityConfig& cfg) {
  M.validate_dimension();
  if (b_sweep.empty()) throw Error(ErrorKind::domain, "b sweep is empty");
  for (double b : b_sweep) {
    if (!(b > 0.0) || !std::isfinite(b)) throw Error(ErrorKind::domain, "b sweep values must be positive");
  }
  if (!(cfg.eps > 0.0)) throw Error(ErrorKind::domain, "eps must be positive");
  if (cfg.curve_points < 2) throw Error(ErrorKind::domain, "curve_points must be at least 2");
  const int n = M.n;
  RigidityReport rep;
  rep.label = M.label;
  rep.c_e = euclidean_best_constant(n);
  rep.quotient_reference = 1.0 / rep.c_e;

  double qdef = 0.0;
  for (double b : b_sweep) {
    rep.b.push_back(b);
    double q = std::nan("");
    try {
      q = sobolev_quotient(M, aubin_talenti(n, b), cfg.quad).value;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::divergent) {
        q = kInf;
      } else {
        rep.curve_errors.emplace("quotient", e.what());
      }
    }
    rep.quotient.push_back(q);
    qdef = std::max(qdef, std::abs(q * rep.c_e - 1.0));
    if (std::isnan(q)) qdef = std::nan("");

    double qt = std::nan("");
    try {
      qt = sobolev_quotient(M, truncated_at_profile(n, b, cfg.eps), cfg.quad).value;
    } catch (const Error& e) {
      rep.curve_errors.emplace("truncated_quotient", e.what());
    }
    rep.truncated_quotient.push_back(qt);
  }
  rep.quotient_deficit = qdef;

  try {
    const TransformTable T = build_transform(M, cfg.range, cfg.quad);
    const auto& r = T.nodes();
    const auto& s = T.s_values();
    double rdef = 0.0;
    const std::size_t N = r.size();
    const std::size_t stride = std::max<std::size_t>(1, (N - 1) / (cfg.curve_points - 1));
    for (std::size_t i = 0; i < N; ++i) {
      const double rho = M.is_euclidean() ? 1.0 : M.psi.value(r[i]) / s[i];
      rdef = std::max(rdef, std::abs(1.0 - rho));
      if (std::isnan(rho)) rdef = std::nan("");
      if (i % stride == 0 || i == N - 1) {
        rep.s.push_back(s[i]);
        rep.rho.push_back(rho);
      }
    }
    rep.rho_deficit = rdef;

    try {
      const double S = unit_sphere_area(n);
      std::vector<double> v;
      for (double x : make_grid(10.0 * cfg.range.r_min, cfg.range.r_max / 2.0, cfg.curve_points, true)) {
        v.push_back(S * std::pow(x, n) / n);
      }
      const IsoperimetricPair iso = isoperimetric_profiles(T, v);
      double idef = 0.0;
      for (std::size_t i = 0; i < iso.v.size(); ++i) {
        idef = std::max(idef, std::abs(iso.sigma[i] - iso.sigma_e[i]) / iso.sigma_e[i]);
        if (std::isnan(iso.sigma[i])) idef = std::nan("");
      }
      rep.v = iso.v;
      rep.sigma = iso.sigma;
      rep.sigma_e = iso.sigma_e;
      rep.iso_deficit = idef;
    } catch (const Error& e) {
      rep.curve_errors.emplace("isoperimetric", e.what());
    }
  } catch (const Error& e) {
    rep.curve_errors.emplace("rho", e.what());
    rep.curve_errors.emplace("isoperimetric", e.what());
  }

  const double tol = cfg.verdict_tol;
  const bool flat = rep.quotient_deficit <= tol && rep.rho_deficit <= tol && rep.iso_deficit <= tol;
  rep.verdict = flat ? Verdict::euclidean_within_tol : Verdict::strictly_non_euclidean;
  return rep;
}

}  // namespace radsob
