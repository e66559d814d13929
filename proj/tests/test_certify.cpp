#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "zomd/certify.hpp"
#include "zomd/problems.hpp"

using namespace zomd;
using namespace zomd::certify;

namespace {

ObjectiveOracle diag_quadratic(double a, double b) {
  ObjectiveOracle o(2, [a, b](const Vector& x) { return 0.5 * (a * x(0) * x(0) + b * x(1) * x(1)); });
  o.with_gradient([a, b](const Vector& x) { return Eigen::Vector2d(a * x(0), b * x(1)); })
      .with_minimizer(Vector::Zero(2))
      .with_moduli(std::min(a, b), std::max(a, b));
  return o;
}

}  // namespace

TEST(DeltaRatio, Cases) {
  const NormPair l2{NormPairKind::Euclidean};
  EXPECT_EQ(delta_ratio(Eigen::Vector2d(1, 2), Eigen::Vector2d(1, 2), l2), 0.0);
  EXPECT_DOUBLE_EQ(delta_ratio(Eigen::Vector2d(2, 0), Eigen::Vector2d(1, 0), l2), 0.5);
  EXPECT_EQ(delta_ratio(Vector::Zero(2), Eigen::Vector2d(1, 0), l2), std::numeric_limits<double>::infinity());
  const NormPair l1{NormPairKind::L1Linf};
  EXPECT_DOUBLE_EQ(delta_ratio(Eigen::Vector2d(2, 1), Eigen::Vector2d(1, 1), l1), 0.5);
}

TEST(EtaFeasibleMax, ClosedFormAndClamp) {
  EXPECT_DOUBLE_EQ(eta_feasible_max({1, 1, 1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(eta_feasible_max({1, 1, 2, 0.25}), 0.25);
  EXPECT_EQ(eta_feasible_max({1, 1, 1, 0.5}), 0.0);
  EXPECT_EQ(eta_feasible_max({1, 1, 1, 3.0}), 0.0);
  EXPECT_THROW(eta_feasible_max({2, 1, 1, 0}), std::invalid_argument);
  EXPECT_THROW(eta_feasible_max({1, 1, 1, -0.1}), std::invalid_argument);
  // non-increasing in delta
  double prev = eta_feasible_max({0.5, 2, 3, 0});
  for (int k = 1; k <= 100; ++k) {
    const double cur = eta_feasible_max({0.5, 2, 3, 0.002 * k});
    EXPECT_LE(cur, prev);
    prev = cur;
  }
}

TEST(Kantorovich, ConstantAndTightInstance) {
  EXPECT_EQ(kantorovich_cos(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(kantorovich_cos(1, 4), 0.8);
  EXPECT_NEAR(kantorovich_cos(1, 100), 0.1980198019801980198, 1e-15);
  for (double L : {1.0, 2.0, 10.0, 100.0, 1e4}) {
    const TightnessInstance t = tightness_instance(1.0, L);
    EXPECT_NEAR(t.cos_theta, kantorovich_cos(1.0, L), 1e-14);
  }
}

TEST(Kantorovich, RandomQuadraticsRespectTheAngle) {
  Rng rng(8);
  for (int k = 0; k < 100; ++k) {
    const double L = rng.uniform(1.0, 50.0);
    const Matrix A = spectrum_matrix(4, 1.0, L, static_cast<std::uint64_t>(k));
    const Vector v = rng.normal_vector(4);
    const Vector av = A * v;
    EXPECT_GE(av.dot(v) / (av.norm() * v.norm()), kantorovich_cos(1.0, L) - 1e-12);
  }
}

TEST(FloorRadius, Values) {
  EXPECT_DOUBLE_EQ(floor_radius(1, 4, 1e-3, 4), 2.5 * 1e-3 * 2.0);
  EXPECT_THROW(floor_radius(1, 4, 0, 4), std::invalid_argument);
  EXPECT_THROW(floor_radius(5, 4, 1, 4), std::invalid_argument);
}

TEST(FloorValue, AttainsTheLargeAxis) {
  const ObjectiveOracle o = diag_quadratic(1, 4);
  const FloorEstimate e = floor_value(o, 1.0, 64);
  EXPECT_DOUBLE_EQ(e.floor_value, 2.0);
  EXPECT_DOUBLE_EQ(*e.analytic_bound, 2.0);
  EXPECT_GT(e.sample_count, 64u);
  EXPECT_EQ(floor_value(o, 0.0, 64).floor_value, 0.0);
  EXPECT_EQ(o.eval_count(), 0u);
}

TEST(FloorValue, NeverExceedsTheAnalyticBound) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Problem p = make_problem({ProblemKind::LogSumExp, 5, 1.0, 8.0, seed, 1.0, 6});
    const FloorEstimate e = floor_value(p.oracle, 0.1, 200);
    EXPECT_LE(e.floor_value, *e.analytic_bound * (1 + 1e-12));
    EXPECT_GT(e.floor_value, 0.0);
  }
}

TEST(SphereMesh, UnitDirections) {
  for (Index d : {1, 2, 3, 7}) {
    const auto dirs = sphere_mesh(d, 50);
    EXPECT_GE(dirs.size(), static_cast<std::size_t>(2 * d));
    for (const Vector& u : dirs) EXPECT_NEAR(u.norm(), 1.0, 1e-14);
  }
}

TEST(FdErrorCheck, HoldsOnSmoothProblems) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Problem p = make_problem({ProblemKind::LogSumExp, 6, 1.0, 20.0, seed, 0.5, 7});
    Rng rng(seed);
    for (int k = 0; k < 20; ++k) {
      const FdErrorCheck c = fd_error_check(p.oracle, 2.0 * rng.normal_vector(6), 1e-2);
      EXPECT_TRUE(c.ok) << c.err << " > " << c.bound;
    }
  }
}

TEST(DistanceThreshold, OutsideTheRadiusTheRatioHolds) {
  Problem p = make_problem({ProblemKind::QuadraticSpectrum, 4, 1.0, 10.0, 3});
  Rng rng(3);
  const double eps = 1e-3;
  const double radius = floor_radius(1.0, 10.0, eps, 4);
  int outside = 0;
  for (int k = 0; k < 500; ++k) {
    const Vector x = rng.uniform(0.0, 3.0 * radius) * rng.unit_vector(4);
    const DistanceThresholdCheck c = distance_threshold_check(p.oracle, x, eps);
    EXPECT_TRUE(c.ok);
    outside += c.outside;
  }
  EXPECT_GT(outside, 100);
}

TEST(DownwardClosedScan, ConvexFunctionsGiveIntervals) {
  const ObjectiveOracle o = diag_quadratic(1, 4);
  std::vector<double> grid;
  for (int k = 0; k <= 60; ++k) grid.push_back(0.01 * k);
  const DownwardClosedScan scan = downward_closed_scan(o, Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 4), grid);
  EXPECT_TRUE(scan.is_interval);
  EXPECT_TRUE(scan.feasible.front());
  EXPECT_FALSE(scan.feasible.back());
  EXPECT_EQ(scan.h.front(), 0.0);
  EXPECT_THROW(downward_closed_scan(o, Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 4), {0.2, 0.1}),
               std::invalid_argument);
}

TEST(DownwardClosedScan, NonConvexFunctionsCanBreakIt) {
  // along -s the decrease stalls on [0.5, 1) and resumes afterwards
  ObjectiveOracle o(1, [](const Vector& y) {
    const double t = -y(0);
    return t < 0.5 ? -t : (t < 1.0 ? 0.0 : -10.0 * t);
  });
  const DownwardClosedScan scan =
      downward_closed_scan(o, Vector::Zero(1), Vector::Ones(1), {0.0, 0.25, 0.75, 1.5});
  EXPECT_EQ(scan.feasible, (std::vector<bool>{true, true, false, true}));
  EXPECT_FALSE(scan.is_interval);
}

TEST(DownwardClosedScan, OffDomainCountsAsInfeasible) {
  ObjectiveOracle o(1, [](const Vector& x) { return x(0) * std::log(x(0)); });
  o.with_domain([](const Vector& x) { return x(0) > 0; });
  const DownwardClosedScan scan =
      downward_closed_scan(o, Vector::Constant(1, 0.5), Vector::Constant(1, 1.0), {0.0, 0.1, 0.6, 0.7});
  EXPECT_FALSE(scan.feasible[2]);
  EXPECT_FALSE(scan.feasible[3]);
  EXPECT_TRUE(std::isinf(scan.h[3]));
}

TEST(HessianNormEstimate, RecoversTheLargestEigenvalue) {
  Problem p = make_problem({ProblemKind::QuadraticSpectrum, 6, 1.0, 25.0, 9});
  EXPECT_NEAR(hessian_norm_estimate(p.oracle, Vector::Ones(6), 1, 200), 25.0, 1e-6);
  const ObjectiveOracle o = diag_quadratic(2, 7);
  EXPECT_NEAR(hessian_norm_estimate(o, Eigen::Vector2d(0.3, 0.1), 2), 7.0, 1e-8);
}
