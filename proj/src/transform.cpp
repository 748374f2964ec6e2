#include "radsob/transform.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "radial.hpp"
#include "radsob/error.hpp"

namespace radsob {

namespace {

bool closed_form_tail(const ModelManifold& M) {
  return M.is_euclidean() || (M.psi.kind() == WarpKind::hyperbolic && M.n == 3);
}

QuadratureConfig table_config(const QuadratureConfig& cfg) {
  QuadratureConfig c = cfg;
  c.rel_tol = std::min(cfg.rel_tol, 1e-12);
  c.abs_tol = 1e-300;
  c.truncation_radius = 0.0;
  return c;
}

double inverse_power(const ModelManifold& M, double t) { return std::pow(M.psi.value(t), 1 - M.n); }
double power(const ModelManifold& M, double t) { return std::pow(M.psi.value(t), M.n - 1); }

// int_a^b psi^{1-n} or psi^{n-1} on a short interval.
double piece(const ModelManifold& M, double a, double b, bool inverse, const QuadratureConfig& cfg) {
  if (a == b) return 0.0;
  ScalarFn g = inverse ? ScalarFn([&M](double t) { return inverse_power(M, t); })
                       : ScalarFn([&M](double t) { return power(M, t); });
  return integrate(g, a, b, cfg).value;
}

}  // namespace

void RadialRange::validate() const {
  if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max) || nodes < 4) {
    throw Error(ErrorKind::domain, "radial range needs 0 < r_min < r_max < inf and at least 4 nodes");
  }
}

std::size_t TransformTable::bracket(double r) const {
  const double slack = 1e-13 * r_.back();
  if (!(r >= r_.front() * (1.0 - 1e-14) && r <= r_.back() + slack)) {
    throw Error(ErrorKind::range, "r = " + std::to_string(r) + " outside the table [" + std::to_string(r_.front()) +
                                      ", " + std::to_string(r_.back()) + "]");
  }
  auto it = std::upper_bound(r_.begin(), r_.end(), r);
  std::size_t i = it == r_.begin() ? 0 : static_cast<std::size_t>(it - r_.begin()) - 1;
  return std::min(i, r_.size() - 2);
}

double TransformTable::tail_integral(double r) const {
  const int n = M_.n;
  if (M_.is_euclidean()) return std::pow(r, 2 - n) / (n - 2.0);
  if (closed_form_tail(M_)) {
    const double sk = std::sqrt(M_.psi.curvature_parameter());
    return sk * 2.0 / std::expm1(2.0 * sk * r);
  }
  const std::size_t i = bracket(r);
  if (r <= r_[i]) return tail_[i];
  return tail_[i + 1] + piece(M_, std::min(r, r_[i + 1]), r_[i + 1], true, cfg_);
}

double TransformTable::s_of_r(double r) const {
  if (M_.is_euclidean()) {
    (void)bracket(r);
    return r;
  }
  (void)bracket(r);
  return std::pow((M_.n - 2.0) * tail_integral(r), -1.0 / (M_.n - 2.0));
}

double TransformTable::ds_dr(double r) const {
  return std::pow(s_of_r(r) / M_.psi.value(r), M_.n - 1);
}

double TransformTable::r_of_s(double s) const {
  if (!(s >= s_.front() * (1.0 - 1e-13) && s <= s_.back() * (1.0 + 1e-13))) {
    throw Error(ErrorKind::range, "s = " + std::to_string(s) + " outside the table [" + std::to_string(s_.front()) +
                                      ", " + std::to_string(s_.back()) + "]");
  }
  if (M_.is_euclidean()) return s;
  if (closed_form_tail(M_)) {
    const double sk = std::sqrt(M_.psi.curvature_parameter());
    return std::log1p(2.0 * sk * s) / (2.0 * sk);
  }
  auto it = std::upper_bound(s_.begin(), s_.end(), s);
  std::size_t i = it == s_.begin() ? 0 : static_cast<std::size_t>(it - s_.begin()) - 1;
  i = std::min(i, s_.size() - 2);
  const double lo = r_[i], hi = r_[i + 1];
  double r = std::clamp(std::exp(log_r_of_log_s_(std::clamp(std::log(s), log_r_of_log_s_.front(),
                                                                     log_r_of_log_s_.back()))),
                        lo, hi);
  for (int iter = 0; iter < 4; ++iter) {
    const double step = (s_of_r(r) - s) / ds_dr(r);
    const double next = r - step;
    if (!(next >= lo && next <= hi)) {
      return find_root([&](double x) { return s_of_r(x) - s; }, lo, hi, 1e-15 * s);
    }
    r = next;
    if (std::abs(step) <= 1e-15 * r) break;
  }
  return r;
}

double TransformTable::rho(double s) const {
  if (M_.is_euclidean()) {
    (void)r_of_s(s);
    return 1.0;
  }
  return M_.psi.value(r_of_s(s)) / s;
}

double TransformTable::partial_volume(double r) const {
  if (M_.is_euclidean()) return std::pow(r, M_.n) / M_.n;
  if (r < r_.front()) return piece(M_, 0.0, r, false, cfg_);
  const std::size_t i = bracket(r);
  return vol_[i] + piece(M_, r_[i], std::max(r, r_[i]), false, cfg_);
}

double TransformTable::volume(double r) const {
  if (!(r > 0.0)) throw Error(ErrorKind::domain, "volume needs r > 0");
  if (r > r_.back() * (1.0 + 1e-13)) {
    throw Error(ErrorKind::range, "r = " + std::to_string(r) + " beyond the table end " + std::to_string(r_.back()));
  }
  return unit_sphere_area(M_.n) * partial_volume(r);
}

double TransformTable::varrho(double r) const {
  if (!(r > 0.0)) throw Error(ErrorKind::domain, "varrho needs r > 0");
  if (M_.is_euclidean()) return r;
  if (r > r_.back() * (1.0 + 1e-13)) {
    throw Error(ErrorKind::range, "r = " + std::to_string(r) + " beyond the table end " + std::to_string(r_.back()));
  }
  return std::pow(M_.n * partial_volume(r), 1.0 / M_.n);
}

double TransformTable::varrho_inverse(double sigma) const {
  const double lo_s = std::exp(log_r_of_log_varrho_.front()), hi_s = std::exp(log_r_of_log_varrho_.back());
  if (!(sigma >= lo_s * (1.0 - 1e-13) && sigma <= hi_s * (1.0 + 1e-13))) {
    throw Error(ErrorKind::range, "varrho = " + std::to_string(sigma) + " outside the tabulated range");
  }
  if (M_.is_euclidean()) return sigma;
  const auto knots = log_r_of_log_varrho_.knots();
  const double ls = std::clamp(std::log(sigma), knots.front(), knots.back());
  const std::size_t i = log_r_of_log_varrho_.segment(ls);
  const double lo = r_[i], hi = r_[i + 1];
  double r = std::clamp(std::exp(log_r_of_log_varrho_(ls)), lo, hi);
  const int n = M_.n;
  for (int iter = 0; iter < 4; ++iter) {
    const double vr = varrho(r);
    const double dv = std::pow(M_.psi.value(r) / vr, n - 1);
    const double step = (vr - sigma) / dv;
    const double next = r - step;
    if (!(next >= lo && next <= hi)) {
      return find_root([&](double x) { return varrho(x) - sigma; }, lo, hi, 1e-15 * sigma);
    }
    r = next;
    if (std::abs(step) <= 1e-15 * r) break;
  }
  return r;
}

double TransformTable::radius_of_volume(double v) const {
  if (!(v > 0.0)) throw Error(ErrorKind::domain, "volume must be positive");
  const int n = M_.n;
  const double sigma = std::pow(n * v / unit_sphere_area(n), 1.0 / n);
  try {
    return varrho_inverse(sigma);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::range) throw;
    throw Error(ErrorKind::inversion_failure,
                "volume " + std::to_string(v) + " outside the tabulated range [" +
                    std::to_string(unit_sphere_area(n) * vol_.front()) + ", " +
                    std::to_string(unit_sphere_area(n) * vol_.back()) + "]");
  }
}

std::vector<TransformTable::Row> TransformTable::rows() const {
  std::vector<Row> out;
  out.reserve(r_.size());
  const int n = M_.n;
  const double S = unit_sphere_area(n);
  for (std::size_t i = 0; i < r_.size(); ++i) {
    const double r = r_[i];
    const double psi = M_.psi.value(r);
    const double v = S * vol_[i];
    const double rho = M_.is_euclidean() ? 1.0 : psi / s_[i];
    const double varrho = M_.is_euclidean() ? r : std::pow(n * vol_[i], 1.0 / n);
    out.push_back({r, s_[i], rho, varrho, v, S * std::pow(psi, n - 1), euclidean_isoperimetric(n, v)});
  }
  return out;
}

TransformTable build_transform(const ModelManifold& M, const RadialRange& range, const QuadratureConfig& cfg) {
  M.validate_dimension();
  range.validate();
  cfg.validate();
  TransformTable T;
  T.M_ = M;
  T.cfg_ = table_config(cfg);
  T.r_ = make_grid(range.r_min, range.r_max, range.nodes, true);
  const std::size_t N = T.r_.size();
  const int n = M.n;
  T.tail_.resize(N);
  T.s_.resize(N);
  T.vol_.resize(N);

  try {
    if (closed_form_tail(M)) {
      for (std::size_t i = 0; i < N; ++i) T.tail_[i] = T.tail_integral(T.r_[i]);
    } else {
      QuadratureConfig tail_cfg = T.cfg_;
      tail_cfg.truncation_radius = 2.0 * T.r_.back();
      ScalarFn g = [&M](double t) { return inverse_power(M, t); };
      T.tail_[N - 1] = integrate(g, T.r_.back(), kInf, tail_cfg).value;
      for (std::size_t i = N - 1; i-- > 0;) T.tail_[i] = T.tail_[i + 1] + piece(M, T.r_[i], T.r_[i + 1], true, T.cfg_);
    }
  } catch (const Error& e) {
    throw Error(ErrorKind::tail_divergent, "int_r^inf psi^{1-n} does not converge on " + M.label + " (" +
                                               std::string(e.what()) + ")");
  }

  for (std::size_t i = 0; i < N; ++i) {
    const double t = T.tail_[i];
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw Error(ErrorKind::tail_divergent, "tail integral is not finite and positive at r = " +
                                                 std::to_string(T.r_[i]));
    }
    T.s_[i] = M.is_euclidean() ? T.r_[i] : std::pow((n - 2.0) * t, -1.0 / (n - 2.0));
    if (i > 0 && !(T.s_[i] > T.s_[i - 1])) {
      throw Error(ErrorKind::tail_divergent, "s(r) fails to increase at r = " + std::to_string(T.r_[i]));
    }
  }

  if (M.is_euclidean()) {
    for (std::size_t i = 0; i < N; ++i) T.vol_[i] = std::pow(T.r_[i], n) / n;
  } else {
    T.vol_[0] = piece(M, 0.0, T.r_[0], false, T.cfg_);
    for (std::size_t i = 1; i < N; ++i) T.vol_[i] = T.vol_[i - 1] + piece(M, T.r_[i - 1], T.r_[i], false, T.cfg_);
  }

  // Inverse interpolants in log-log coordinates with exact slopes.
  std::vector<double> ls(N), lr(N), dls(N), lv(N), dlv(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double r = T.r_[i], s = T.s_[i], psi = M.psi.value(r);
    const double varrho = std::pow(n * T.vol_[i], 1.0 / n);
    lr[i] = std::log(r);
    ls[i] = std::log(s);
    lv[i] = std::log(varrho);
    // dlog r / dlog s = (s / r) dr/ds and likewise for varrho.
    dls[i] = (s / r) * std::pow(psi / s, n - 1);
    dlv[i] = (varrho / r) * std::pow(varrho / psi, n - 1);
  }
  T.log_r_of_log_s_ = CubicHermite(ls, lr, dls);
  T.log_r_of_log_varrho_ = CubicHermite(lv, lr, dlv);

  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < N; ++i) {
    const double s = std::sqrt(T.s_[i] * T.s_[i + 1]);
    worst = std::max(worst, std::abs(T.s_of_r(T.r_of_s(s)) - s) / s);
  }
  T.inversion_error_ = worst;
  return T;
}

double euclidean_isoperimetric(int n, double v) {
  return std::pow(unit_sphere_area(n), 1.0 / n) * std::pow(n * v, (n - 1.0) / n);
}

double equal_volume_radius(const ModelManifold& M, double r, const QuadratureConfig& cfg) {
  M.validate_dimension();
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorKind::domain, "equal_volume_radius needs r > 0");
  if (M.is_euclidean()) return r;
  const double I = integrate([&M](double t) { return power(M, t); }, 0.0, r, table_config(cfg)).value;
  return std::pow(M.n * I, 1.0 / M.n);
}

namespace {

// Last radius (table node) past which f and f' vanish identically.
double effective_support(const TransformTable& T, const RadialProfile& f) {
  if (std::isfinite(f.support_radius)) {
    if (f.support_radius > T.r_max() * (1.0 + 1e-13)) {
      throw Error(ErrorKind::range, f.description + " is supported beyond the table end r = " +
                                        std::to_string(T.r_max()));
    }
    return f.support_radius;
  }
  const auto& r = T.nodes();
  if (f.value(r.back()) != 0.0 || f.derivative(r.back()) != 0.0) {
    throw Error(ErrorKind::range, f.description + " does not vanish by the table end r = " +
                                      std::to_string(T.r_max()));
  }
  std::size_t j = r.size() - 1;
  while (j > 0 && f.value(r[j - 1]) == 0.0 && f.derivative(r[j - 1]) == 0.0) --j;
  return r[j];
}

void require_decreasing(const TransformTable& T, const RadialProfile& f, double support) {
  std::vector<double> probe;
  for (double r : T.nodes()) {
    if (r < support) probe.push_back(r);
  }
  std::vector<double> marks = f.kinks;
  marks.push_back(0.0);
  marks.push_back(support);
  std::sort(marks.begin(), marks.end());
  for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
    if (marks[i + 1] > marks[i] && marks[i + 1] <= support) {
      for (int k = 1; k < 8; ++k) probe.push_back(marks[i] + (marks[i + 1] - marks[i]) * k / 8.0);
    }
  }
  for (double r : probe) {
    if (!(r > 0.0) || r >= support) continue;
    const double v = f.value(r);
    if (v > 0.0 && !(f.derivative(r) < 0.0)) {
      throw Error(ErrorKind::not_monotone, f.description + " has f' >= 0 at r = " + std::to_string(r));
    }
    if (v < 0.0) throw Error(ErrorKind::not_monotone, f.description + " is negative at r = " + std::to_string(r));
  }
}

// About 60 table abscissae in (lo, hi), used as extra quadrature breaks so
// that panels over many decades still resolve the bulk of the profile.
std::vector<double> panel_hints(const std::vector<double>& x, double lo, double hi) {
  std::vector<double> out;
  const std::size_t stride = std::max<std::size_t>(1, x.size() / 60);
  for (std::size_t i = 0; i < x.size(); i += stride) {
    if (x[i] > lo && x[i] < hi) out.push_back(x[i]);
  }
  return out;
}

void merge_breaks(std::vector<double>& kinks, const std::vector<double>& extra) {
  kinks.insert(kinks.end(), extra.begin(), extra.end());
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
}

}  // namespace

RadialProfile pushforward(const TransformTable& T, const RadialProfile& f) {
  const double support = effective_support(T, f);
  auto tab = std::make_shared<const TransformTable>(T);
  const int n = T.manifold().n;
  const double s_support = tab->s_of_r(support);
  RadialProfile g;
  g.kind = ProfileKind::composed;
  g.value = [tab, f, s_support](double s) { return s >= s_support ? 0.0 : f.value(tab->r_of_s(s)); };
  g.derivative = [tab, f, s_support, n](double s) {
    if (s >= s_support) return 0.0;
    const double r = tab->r_of_s(s);
    const double d = f.derivative(r);
    return d == 0.0 ? 0.0 : d * std::pow(tab->manifold().psi.value(r) / s, n - 1);
  };
  g.support_radius = s_support;
  g.inner_radius = std::max(T.s_min(), std::min(s_support, T.s_min()));
  for (double k : f.kinks) {
    if (k > T.r_min() && k < support) g.kinks.push_back(tab->s_of_r(k));
  }
  merge_breaks(g.kinks, panel_hints(T.s_values(), T.s_min(), s_support));
  g.description = "pushforward(" + f.description + ")";
  return g;
}

FunctionalValue weighted_lp_norm(const RadialProfile& g, const TransformTable& T, double p,
                                 const QuadratureConfig& cfg) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorKind::domain, "weighted_lp_norm needs finite p >= 1");
  const int n = T.manifold().n;
  const double S = unit_sphere_area(n);
  const double hi = std::min(g.support_radius, T.s_max());
  if (std::isfinite(g.support_radius) && g.support_radius > T.s_max() * (1.0 + 1e-13)) {
    throw Error(ErrorKind::range, g.description + " extends beyond s_max of the table");
  }
  const double lo = std::max(g.inner_radius, T.s_min());
  ScalarFn integrand = [&](double s) {
    const double v = std::abs(g.value(s));
    if (v == 0.0) return 0.0;
    const double rho = T.rho(s);
    return S * std::pow(v, p) * std::pow(rho, 2 * (n - 1)) * std::pow(s, n - 1);
  };
  Integral I = integrate(integrand, lo, hi, g.kinks, cfg);
  auto [v, e] = detail::root_of(I, p);
  return {v, e, cfg};
}

RadialProfile schwarz_symmetrize(const TransformTable& T, const RadialProfile& f) {
  const double support = effective_support(T, f);
  require_decreasing(T, f, support);
  if (T.manifold().is_euclidean()) return f;
  auto tab = std::make_shared<const TransformTable>(T);
  const int n = T.manifold().n;
  const double sigma_support = tab->varrho(support);
  RadialProfile g;
  g.kind = ProfileKind::composed;
  g.value = [tab, f, sigma_support](double sigma) {
    return sigma >= sigma_support ? 0.0 : f.value(tab->varrho_inverse(sigma));
  };
  g.derivative = [tab, f, sigma_support, n](double sigma) {
    if (sigma >= sigma_support) return 0.0;
    const double r = tab->varrho_inverse(sigma);
    return f.derivative(r) * std::pow(sigma / tab->manifold().psi.value(r), n - 1);
  };
  g.support_radius = sigma_support;
  g.inner_radius = tab->varrho(T.r_min());
  for (double k : f.kinks) {
    if (k > T.r_min() && k < support) g.kinks.push_back(tab->varrho(k));
  }
  std::vector<double> sigma_nodes;
  for (const auto& row : T.rows()) sigma_nodes.push_back(row.varrho);
  merge_breaks(g.kinks, panel_hints(sigma_nodes, g.inner_radius, sigma_support));
  g.description = "symmetrized(" + f.description + ")";
  return g;
}

namespace {

RadialRange range_for(const RadialProfile& f) {
  RadialRange range;
  range.r_max = std::isfinite(f.support_radius) ? std::max(1.0, f.support_radius) : 50.0;
  range.nodes = 600;
  return range;
}

}  // namespace

RadialProfile schwarz_symmetrize(const ModelManifold& M, const RadialProfile& f, const QuadratureConfig& cfg) {
  return schwarz_symmetrize(build_transform(M, range_for(f), cfg), f);
}

double IsoperimetricPair::min_margin() const {
  double m = kInf;
  for (std::size_t i = 0; i < v.size(); ++i) m = std::min(m, sigma[i] - sigma_e[i]);
  return m;
}

IsoperimetricPair isoperimetric_profiles(const TransformTable& T, const std::vector<double>& v_grid) {
  for (std::size_t i = 0; i < v_grid.size(); ++i) {
    if (!(v_grid[i] > 0.0) || (i > 0 && !(v_grid[i] > v_grid[i - 1]))) {
      throw Error(ErrorKind::domain, "volume grid must be positive and increasing");
    }
  }
  const ModelManifold& M = T.manifold();
  const int n = M.n;
  const double S = unit_sphere_area(n);
  IsoperimetricPair out;
  for (double v : v_grid) {
    const double R = M.is_euclidean() ? std::pow(n * v / S, 1.0 / n) : T.radius_of_volume(v);
    out.v.push_back(v);
    out.radius.push_back(R);
    out.sigma.push_back(S * std::pow(M.psi.value(R), n - 1));
    out.sigma_e.push_back(euclidean_isoperimetric(n, v));
  }
  return out;
}

IsoperimetricPair isoperimetric_profiles(const ModelManifold& M, const std::vector<double>& v_grid,
                                         const QuadratureConfig& cfg) {
  RadialRange range;
  range.nodes = 600;
  return isoperimetric_profiles(build_transform(M, range, cfg), v_grid);
}

CoareaEnergy coarea_gradient_energy(const TransformTable& T, const RadialProfile& f, const QuadratureConfig& cfg) {
  const double support = effective_support(T, f);
  require_decreasing(T, f, support);
  const ModelManifold& M = T.manifold();
  const int n = M.n;
  const double S = unit_sphere_area(n);
  const double c = f.value(0.0);
  if (!(c > 0.0)) throw Error(ErrorKind::zero_profile, f.description + " has f(0) <= 0");

  auto level_radius = [&](double l) {
    return find_root([&](double r) { return f.value(r) - l; }, 0.0, support, 1e-16);
  };
  ScalarFn manifold = [&](double l) {
    const double r = level_radius(l);
    if (!(r > 0.0)) return 0.0;
    return -S * std::pow(M.psi.value(r), n - 1) * f.derivative(r);
  };
  ScalarFn euclid = [&](double l) {
    const double r = level_radius(l);
    if (!(r > 0.0)) return 0.0;
    const double sigma_e = euclidean_isoperimetric(n, T.volume(r));
    return -sigma_e * sigma_e * f.derivative(r) / (S * std::pow(M.psi.value(r), n - 1));
  };
  return {integrate(manifold, 0.0, c, cfg).value, integrate(euclid, 0.0, c, cfg).value};
}

CoareaEnergy coarea_gradient_energy(const ModelManifold& M, const RadialProfile& f, const QuadratureConfig& cfg) {
  return coarea_gradient_energy(build_transform(M, range_for(f), cfg), f, cfg);
}

}  // namespace radsob
