#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "radsob/variational.hpp"
#include "test_support.hpp"

using namespace radsob;
using testing_support::kind_of;

TEST(ElResidual, BubbleSolvesTheEquation) {
  const ModelManifold E = euclidean_space(3);
  const RadialProfile u = normalized_bubble(3, 1.0);
  for (double r : {0.1, 1.0, 10.0}) {
    EXPECT_NEAR(u(r), 1 / std::sqrt(1 + r * r / 3), 1e-15);
    EXPECT_LE(std::abs(el_residual(E, u, r)), 1e-10);
  }
  for (int n : {4, 5, 6}) {
    const RadialProfile w = normalized_bubble(n, 1.7);
    for (double r : {0.2, 2.0}) {
      EXPECT_NEAR(w(r), oracle::bubble(n, 1.7, r), 1e-14);
      EXPECT_LE(std::abs(el_residual(euclidean_space(n), w, r)), 1e-10);
    }
  }
}

TEST(ElResidual, UnnormalizedProfileHasSignedResidual) {
  // -Delta f_b = n(n-2) b f_b^{2*-1} for f_b = (1 + b r^2)^{-(n-2)/2}.
  const ModelManifold E = euclidean_space(3);
  const double b = 1.0;
  const RadialProfile f = aubin_talenti(3, b);
  for (double r : {0.1, 1.0, 10.0}) {
    const double u5 = std::pow(f(r), 5);
    EXPECT_NEAR(el_residual(E, f, r), u5 * (3 * b - 1), 1e-12 * (1 + u5));
    EXPECT_GT(el_residual(E, f, r), 0.0);
  }
}

TEST(ElResidual, ZeroAndErrors) {
  const RadialProfile z = make_profile([](double) { return 0.0; }, [](double) { return 0.0; },
                                       [](double) { return 0.0; }, kInf, {}, "zero");
  EXPECT_EQ(el_residual(hyperbolic_space(3), z, 1.0), 0.0);
  EXPECT_EQ(kind_of([&] { (void)el_residual(hyperbolic_space(3), z, 0.0); }), ErrorKind::domain);
  RadialProfile no2 = z;
  no2.second_derivative = nullptr;
  EXPECT_EQ(kind_of([&] { (void)el_residual(hyperbolic_space(3), no2, 1.0); }), ErrorKind::domain);
}

// Shooting reproduces the closed-form bubble for several dimensions and heights.
TEST(Shoot, EuclideanMatchesBubble) {
  for (int n = 3; n <= 6; ++n) {
    for (double c : {0.5, 1.0, 2.0}) {
      const ShootingResult res = shoot(euclidean_space(n), c, 10.0);
      ASSERT_EQ(res.status, ShootingStatus::decayed);
      for (int i = 0; i <= 100; ++i) {
        const double r = 0.1 * i;
        EXPECT_NEAR(res.solution(r) / oracle::bubble(n, c, r), 1.0, 1e-5) << n << " " << c << " " << r;
        EXPECT_NEAR(res.solution.derivative(r), oracle::bubble_prime(n, c, r), 1e-6 * c * c * c);
      }
      EXPECT_LE(energy_identity_check(res), 1e-5);
    }
  }
}

TEST(Shoot, ScalingSymmetry) {
  // u_c(r) = c u_1(c^{2/(n-2)} r), so for n = 3 the height-2 shot is 2 u_1(4 r).
  const ShootingResult one = shoot(euclidean_space(3), 1.0, 40.0);
  const ShootingResult two = shoot(euclidean_space(3), 2.0, 10.0);
  for (double r : {0.05, 0.5, 2.0, 9.0}) EXPECT_NEAR(two.solution(r) / (2 * one.solution(4 * r)), 1.0, 1e-8) << r;
}

TEST(Shoot, DenseResidualSmallWithTightTolerance) {
  OdeConfig cfg;
  cfg.rel_tol = 1e-12;
  const ModelManifold E = euclidean_space(3);
  const ShootingResult res = shoot(E, 1.0, 10.0, cfg);
  for (int i = 1; i <= 20; ++i) EXPECT_LE(std::abs(el_residual(E, res.solution, 0.5 * i)), 1e-9) << 0.5 * i;
}

TEST(Shoot, HyperbolicTrajectoryIsDecreasing) {
  const ModelManifold H = hyperbolic_space(3);
  const ShootingResult res = shoot(H, 1.0, 10.0);
  EXPECT_EQ(res.status, ShootingStatus::decayed);
  double prev = res.solution(0.0);
  for (int i = 1; i <= 100; ++i) {
    const double u = res.solution(0.1 * i);
    EXPECT_LT(u, prev);
    prev = u;
  }
  // Pinned after the first run: the drift 2 coth r slows the decay compared
  // with the Euclidean bubble.
  EXPECT_NEAR(res.solution(10.0), 0.456181, 1e-5);
  EXPECT_GT(res.solution(10.0), oracle::bubble(3, 1.0, 10.0));
  EXPECT_LE(energy_identity_check(res), 1e-6);
}

TEST(Shoot, CrossesZeroOnPositivelyCurvedModel) {
  // On the round sphere the drift turns negative past pi/2; the height-1
  // shot reaches zero near r = 2.658 (pinned after the first run).
  const ModelManifold S{3, WarpFunction::expression("sin(r)"), "sphere"};
  const ShootingResult res = shoot(S, 1.0, 3.1);
  EXPECT_EQ(res.status, ShootingStatus::crossed_zero);
  EXPECT_GT(res.crossing_radius, 0.0);
  EXPECT_NEAR(res.crossing_radius, 2.65846, 1e-4);
  EXPECT_NEAR(res.solution(res.crossing_radius * (1 - 1e-12)), 0.0, 1e-9);
  EXPECT_EQ(res.boundary_flux, 0.0);
  EXPECT_LE(energy_identity_check(res), 1e-6);
}

TEST(Shoot, Errors) {
  EXPECT_EQ(kind_of([] { (void)shoot(euclidean_space(3), -1.0, 10.0); }), ErrorKind::domain);
  EXPECT_EQ(kind_of([] { (void)shoot(euclidean_space(3), 1.0, 1e-9); }), ErrorKind::domain);
  OdeConfig tiny;
  tiny.max_steps = 3;
  EXPECT_EQ(shoot(euclidean_space(3), 1.0, 10.0, tiny).status, ShootingStatus::maxed_out);
}

TEST(EnergyIdentity, DiscriminatesNonSolutions) {
  const ModelManifold E = euclidean_space(3);
  // Pinned after the first run.
  const double d = energy_identity_check(E, truncated_at_profile(3, 1.0, 2.0), 5.0);
  EXPECT_NEAR(d, 0.9936, 1e-3);
  EXPECT_LE(energy_identity_check(E, normalized_bubble(3, 1.0), 10.0), 1e-9);
  const RadialProfile z = make_profile([](double) { return 0.0; }, [](double) { return 0.0; }, {}, 1.0, {}, "zero");
  EXPECT_EQ(energy_identity_check(E, z, 1.0), 0.0);
}

TEST(Heat, EuclideanKernelIsExact) {
  const ModelManifold E = euclidean_space(3);
  std::vector<std::pair<double, double>> grid;
  for (double r : make_grid(0.1, 5.0, 20, false)) {
    for (double t : make_grid(0.1, 2.0, 20, false)) grid.emplace_back(r, t);
  }
  for (const auto& [r, t] : grid) EXPECT_LE(std::abs(heat_supersolution_residual(E, r, t)), 1e-14);
  const double h = heat_supersolution_residual(hyperbolic_space(3), grid);
  EXPECT_GT(h, 0.0);
  EXPECT_NEAR(euclidean_heat_kernel(3, 0.0, 0.5), std::pow(2 * oracle::pi, -1.5), 1e-15);
  EXPECT_EQ(kind_of([] { (void)heat_supersolution_residual(euclidean_space(3), 0.0, 1.0); }), ErrorKind::domain);
}

TEST(Heat, ResidualMatchesSimplifiedForm) {
  // R = K / (2t) (m r - (n - 1)).
  const ModelManifold H = hyperbolic_space(4, 2.0);
  for (double r : {0.3, 1.0, 3.0}) {
    for (double t : {0.2, 1.0}) {
      const double K = euclidean_heat_kernel(4, r, t);
      const double m = 3 * std::sqrt(2.0) / std::tanh(std::sqrt(2.0) * r);
      EXPECT_NEAR(heat_supersolution_residual(H, r, t), K / (2 * t) * (m * r - 3), 1e-14);
    }
  }
}

TEST(Rigidity, EuclideanHyperbolicAndDisguisedFlat) {
  const std::vector<double> sweep = {0.1, 1.0, 10.0};
  const RigidityReport e = rigidity_experiment(euclidean_space(3), sweep);
  EXPECT_EQ(e.verdict, Verdict::euclidean_within_tol);
  for (double q : e.quotient) EXPECT_NEAR(q * e.c_e, 1.0, 1e-8);
  EXPECT_TRUE(e.curve_errors.empty());

  const RigidityReport h = rigidity_experiment(hyperbolic_space(3), sweep);
  EXPECT_EQ(h.verdict, Verdict::strictly_non_euclidean);
  for (double q : h.quotient) EXPECT_TRUE(std::isinf(q));
  for (double q : h.truncated_quotient) EXPECT_GT(q * h.c_e, 1.0);
  EXPECT_GT(h.rho_deficit, 0.5);
  EXPECT_GT(h.iso_deficit, 0.0);

  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i <= 40; ++i) samples.emplace_back(0.25 * i, 0.25 * i);
  const ModelManifold flat{3, WarpFunction::grid(samples), "grid-flat"};
  const RigidityReport g = rigidity_experiment(flat, sweep);
  EXPECT_EQ(g.verdict, Verdict::euclidean_within_tol) << g.quotient_deficit << " " << g.rho_deficit << " " << g.iso_deficit;
}

TEST(Rigidity, TruncatedQuotientDecreasesTowardEuclideanConstant) {
  const RigidityReport h = rigidity_experiment(hyperbolic_space(3), {1.0, 10.0, 100.0, 1000.0});
  for (std::size_t i = 0; i < h.b.size(); ++i) {
    EXPECT_GT(h.truncated_quotient[i] * h.c_e, 1.0);
    if (i > 0) EXPECT_LE(h.truncated_quotient[i], h.truncated_quotient[i - 1]);
  }
}

TEST(Rigidity, NonCartanHadamardReportsCurveErrors) {
  const ModelManifold S{3, WarpFunction::expression("sin(r)"), "sphere"};
  const RigidityReport r = rigidity_experiment(S, {1.0});
  EXPECT_EQ(r.verdict, Verdict::strictly_non_euclidean);
  EXPECT_TRUE(r.curve_errors.count("rho"));
  EXPECT_EQ(kind_of([] { (void)rigidity_experiment(euclidean_space(3), {}); }), ErrorKind::domain);
}
