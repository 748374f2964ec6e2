#pragma once

// The s-variable change of coordinates, its density rho(s) = psi(r(s))/s,
// equal-volume radii, Schwarz symmetrization onto R^n and the isoperimetric
// comparison Sigma(v) >= Sigma_E(v).
//
//   1 / ((n-2) s^{n-2}) = int_r^inf psi(t)^{1-n} dt,   ds/dr = (s / psi)^{n-1}
//   varrho(r) = (n int_0^r psi^{n-1})^{1/n},            v(r) = |S^{n-1}| varrho^n / n

#include <vector>

#include "radsob/manifold.hpp"
#include "radsob/numerics.hpp"
#include "radsob/profiles.hpp"

namespace radsob {

struct RadialRange {
  double r_min = 1e-6;
  double r_max = 50.0;
  int nodes = 1500;

  void validate() const;
};

class TransformTable {
 public:
  [[nodiscard]] const ModelManifold& manifold() const { return M_; }
  [[nodiscard]] const std::vector<double>& nodes() const { return r_; }
  [[nodiscard]] const std::vector<double>& s_values() const { return s_; }
  [[nodiscard]] double r_min() const { return r_.front(); }
  [[nodiscard]] double r_max() const { return r_.back(); }
  [[nodiscard]] double s_min() const { return s_.front(); }
  [[nodiscard]] double s_max() const { return s_.back(); }
  /// max |s(r(s)) - s| / s over midpoints between nodes.
  [[nodiscard]] double inversion_error() const { return inversion_error_; }

  /// s(r) on [r_min, r_max]; exact up to one short quadrature from a node.
  [[nodiscard]] double s_of_r(double r) const;
  /// ds/dr = (s(r) / psi(r))^{n-1}.
  [[nodiscard]] double ds_dr(double r) const;
  /// Inverse map; Error(range) outside [s_min, s_max].
  [[nodiscard]] double r_of_s(double s) const;
  /// psi(r(s)) / s.
  [[nodiscard]] double rho(double s) const;

  /// |S^{n-1}| int_0^r psi^{n-1}.
  [[nodiscard]] double volume(double r) const;
  [[nodiscard]] double varrho(double r) const;
  /// Inverse of varrho; Error(range) outside the tabulated radii.
  [[nodiscard]] double varrho_inverse(double sigma) const;
  /// Inverse of volume; Error(inversion_failure) outside the tabulated range.
  [[nodiscard]] double radius_of_volume(double v) const;

  struct Row {
    double r, s, rho, varrho, v, sigma, sigma_e;
  };
  [[nodiscard]] std::vector<Row> rows() const;

 private:
  friend TransformTable build_transform(const ModelManifold&, const RadialRange&, const QuadratureConfig&);

  [[nodiscard]] double tail_integral(double r) const;
  [[nodiscard]] double partial_volume(double r) const;  // int_0^r psi^{n-1}
  [[nodiscard]] std::size_t bracket(double r) const;

  ModelManifold M_;
  QuadratureConfig cfg_;
  std::vector<double> r_, tail_, s_, vol_;  // vol_ = int_0^r psi^{n-1}
  CubicHermite log_r_of_log_s_;
  CubicHermite log_r_of_log_varrho_;
  double inversion_error_ = 0.0;
};

/// Tabulates s(r) on a log grid. Throws Error(tail_divergent) when the
/// defining tail integral does not converge (typically a non-CH warp).
TransformTable build_transform(const ModelManifold& M, const RadialRange& range = {},
                               const QuadratureConfig& cfg = {});

/// f_hat(s) = f(r(s)), f_hat'(s) = f'(r) rho(s)^{n-1}; integrals start at s_min.
/// Throws Error(range) if f does not vanish by the end of the table.
RadialProfile pushforward(const TransformTable& T, const RadialProfile& f);

/// (|S^{n-1}| int |g|^p rho(s)^{2(n-1)} s^{n-1} ds)^{1/p}.
FunctionalValue weighted_lp_norm(const RadialProfile& g, const TransformTable& T, double p,
                                 const QuadratureConfig& cfg = {});

/// varrho(r) by direct quadrature.
double equal_volume_radius(const ModelManifold& M, double r, const QuadratureConfig& cfg = {});

/// f_tilde with f_tilde(varrho(r)) = f(r), a profile on R^n. Throws
/// Error(not_monotone) if f' >= 0 somewhere f > 0.
RadialProfile schwarz_symmetrize(const TransformTable& T, const RadialProfile& f);
RadialProfile schwarz_symmetrize(const ModelManifold& M, const RadialProfile& f, const QuadratureConfig& cfg = {});

struct IsoperimetricPair {
  std::vector<double> v;
  std::vector<double> radius;   // R(v)
  std::vector<double> sigma;    // |S^{n-1}| psi(R(v))^{n-1}
  std::vector<double> sigma_e;  // |S^{n-1}|^{1/n} (n v)^{(n-1)/n}
  [[nodiscard]] double min_margin() const;
};

IsoperimetricPair isoperimetric_profiles(const TransformTable& T, const std::vector<double>& v_grid);
IsoperimetricPair isoperimetric_profiles(const ModelManifold& M, const std::vector<double>& v_grid,
                                         const QuadratureConfig& cfg = {});

/// Sigma_E(v) = |S^{n-1}|^{1/n} (n v)^{(n-1)/n}.
double euclidean_isoperimetric(int n, double v);

struct CoareaEnergy {
  double manifold_energy = 0.0;   // -int_0^c Sigma(V)^2 / V' dl  = ||grad f||^2 on M
  double euclidean_energy = 0.0;  // same with Sigma_E            = ||grad f_tilde||^2
};

/// Level-set evaluation of the gradient energy, l in (0, f(0)).
CoareaEnergy coarea_gradient_energy(const TransformTable& T, const RadialProfile& f, const QuadratureConfig& cfg = {});
CoareaEnergy coarea_gradient_energy(const ModelManifold& M, const RadialProfile& f, const QuadratureConfig& cfg = {});

}  // namespace radsob
