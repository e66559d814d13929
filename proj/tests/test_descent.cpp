#include <gtest/gtest.h>

#include <cmath>

#include "zomd/descent.hpp"
#include "zomd/problems.hpp"

using namespace zomd;

namespace {

Vector s1(double a) { return Vector::Constant(1, a); }

ObjectiveOracle half_square(Index d) {
  ObjectiveOracle o(d, [](const Vector& x) { return 0.5 * x.squaredNorm(); });
  o.with_gradient([](const Vector& x) { return x; }).with_minimizer(Vector::Zero(d)).with_moduli(1.0, 1.0);
  return o;
}

}  // namespace

TEST(MirrorStep, EuclideanAndEntropy) {
  const Vector e = mirror_step(euclidean_mirror(), Eigen::Vector2d(1, 2), Eigen::Vector2d(1, 2), 0.5);
  EXPECT_EQ(e, Eigen::Vector2d(0.5, 1));
  const Vector x = Eigen::Vector2d(0.3, -4);
  EXPECT_EQ(mirror_step(euclidean_mirror(), x, Eigen::Vector2d(7, 7), 0.0), x);

  const Vector h = mirror_step(entropy_mirror(), Eigen::Vector2d(0.5, 0.5),
                               Eigen::Vector2d(std::log(2.0), 0.0), 1.0);
  EXPECT_NEAR(h(0), 0.25, 1e-15);
  EXPECT_NEAR(h(1), 0.5, 1e-15);
  EXPECT_THROW(mirror_step(euclidean_mirror(), x, x, -1.0), std::invalid_argument);
  EXPECT_THROW(mirror_step(entropy_mirror(), Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(800, 0), 1.0),
               DomainError);
}

TEST(Certificate, OneDimensionalHandValues) {
  const ObjectiveOracle o = half_square(1);
  const MirrorMap map = euclidean_mirror();
  const Vector x = s1(1.0), omega = s1(1.0);

  const CertificateCheck half = certificate(map, o, omega, x, 0.5, mirror_step(map, x, omega, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(half.lhs, 0.0625);
  EXPECT_DOUBLE_EQ(half.rhs, 0.125);
  EXPECT_TRUE(half.pass);

  const CertificateCheck two = certificate(map, o, omega, x, 0.5, mirror_step(map, x, omega, 2.0), 2.0);
  EXPECT_DOUBLE_EQ(two.lhs, 4.0);
  EXPECT_DOUBLE_EQ(two.rhs, 2.0);
  EXPECT_FALSE(two.pass);

  const CertificateCheck zero = certificate(map, o, omega, x, 0.5, x, 0.0);
  EXPECT_EQ(zero.lhs, 0.0);
  EXPECT_EQ(zero.rhs, 0.0);
  EXPECT_TRUE(zero.pass);
  EXPECT_EQ(o.eval_count(), 3u);
}

TEST(Certificate, Tolerance) {
  EXPECT_TRUE(certificate_passes(1.0 + 0.5e-12, 1.0));
  EXPECT_FALSE(certificate_passes(1.0 + 2e-12, 1.0));
  EXPECT_TRUE(certificate_passes(1e6 * (1 + 0.5e-12), 1e6));
  EXPECT_FALSE(certificate_passes(1e6 * (1 + 2e-12), 1e6));
}

TEST(SelectStepsize, GridPicksLargestPassing) {
  const ObjectiveOracle o = half_square(1);
  StepConfig cfg;
  cfg.rule = StepRule::GeometricGrid;
  cfg.grid_factor = 2.0;
  cfg.grid_width = 2;
  const StepSelection s = select_stepsize(cfg, euclidean_mirror(), o, s1(1.0), 0.5, s1(1.0), 0.5);
  EXPECT_EQ(s.eta, 1.0);
  EXPECT_TRUE(s.pass);
  EXPECT_EQ(s.probes, 5);
  EXPECT_EQ(o.eval_count(), 5u);
}

TEST(SelectStepsize, FixedAndFallback) {
  const ObjectiveOracle o = half_square(1);
  StepConfig cfg;
  cfg.rule = StepRule::Fixed;
  cfg.eta0 = 3.0;
  const StepSelection fixed = select_stepsize(cfg, euclidean_mirror(), o, s1(1.0), 0.5, s1(1.0), 0.1);
  EXPECT_EQ(fixed.eta, 3.0);
  EXPECT_FALSE(fixed.pass);
  EXPECT_EQ(fixed.probes, 1);

  cfg.rule = StepRule::GeometricGrid;
  cfg.grid_width = 1;
  const StepSelection none = select_stepsize(cfg, euclidean_mirror(), o, s1(1.0), 0.5, s1(1.0), 8.0);
  EXPECT_FALSE(none.pass);
  EXPECT_EQ(none.eta, 4.0);
}

TEST(SelectStepsize, BacktrackingShrinksUntilPass) {
  const ObjectiveOracle o = half_square(1);
  StepConfig cfg;
  cfg.rule = StepRule::Backtracking;
  cfg.grid_factor = 2.0;
  cfg.shrink = 0.5;
  const StepSelection s = select_stepsize(cfg, euclidean_mirror(), o, s1(1.0), 0.5, s1(1.0), 4.0);
  // 8, 4, 2 fail; 1 passes with equality
  EXPECT_EQ(s.eta, 1.0);
  EXPECT_EQ(s.probes, 4);
  EXPECT_TRUE(s.pass);

  cfg.max_probes = 2;
  const StepSelection capped = select_stepsize(cfg, euclidean_mirror(), o, s1(1.0), 0.5, s1(1.0), 4.0);
  EXPECT_FALSE(capped.pass);
  EXPECT_EQ(capped.eta, 4.0);
  EXPECT_EQ(capped.probes, 2);
}

TEST(StepConfig, Validation) {
  StepConfig cfg;
  cfg.eta0 = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.grid_factor = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.shrink = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_EQ(parse_step_rule("geometric-grid"), StepRule::GeometricGrid);
  EXPECT_THROW(parse_step_rule("armijo"), std::invalid_argument);
}

TEST(Run, GeometricContractionOnHalfSquare) {
  const ObjectiveOracle o = half_square(2);
  StepConfig cfg;
  cfg.eta0 = 0.5;
  RunOptions opt;
  opt.t_max = 20;
  const TrajectoryRecord rec =
      run(euclidean_mirror(), o, analytic_gradient_field(o), cfg, Eigen::Vector2d(1, 1), opt);
  ASSERT_EQ(rec.rows.size(), 20u);
  EXPECT_EQ(rec.steps(), 19u);
  EXPECT_TRUE(rec.all_certified());
  EXPECT_EQ(rec.certified_prefix(), 19u);
  EXPECT_NEAR(rec.rows.back().f / rec.rows.front().f, 3.6379788070917129517e-12, 1e-26);
  for (std::size_t j = 0; j + 1 < rec.rows.size(); ++j) {
    EXPECT_EQ(rec.rows[j].iter, j + 1);
    EXPECT_LT(rec.rows[j + 1].f, rec.rows[j].f);
    EXPECT_LE(rec.rows[j].evals_cum, rec.rows[j + 1].evals_cum);
  }
  EXPECT_FALSE(rec.rows.back().eta.has_value());
  EXPECT_EQ(rec.rows.back().evals_cum, 20u);

  const CertificateReport rep = last_iterate_bound(rec, euclidean_mirror(), Vector::Zero(2), 0.0, 0.0);
  EXPECT_DOUBLE_EQ(rep.sum_eta, 9.5);
  EXPECT_DOUBLE_EQ(rep.bregman_to_start, 1.0);
  EXPECT_NEAR(rep.bound, 0.10526315789473684211, 1e-16);
  EXPECT_LE(*rep.achieved_gap, rep.bound);
}

TEST(Run, SingleIterateRecordHasNoSteps) {
  const ObjectiveOracle o = half_square(2);
  RunOptions opt;
  opt.t_max = 1;
  const TrajectoryRecord rec =
      run(euclidean_mirror(), o, analytic_gradient_field(o), StepConfig{}, Eigen::Vector2d(1, 1), opt);
  EXPECT_EQ(rec.rows.size(), 1u);
  EXPECT_EQ(rec.steps(), 0u);
  EXPECT_THROW(last_iterate_bound(rec, euclidean_mirror(), Vector::Zero(2), 0.0), std::domain_error);
}

TEST(Run, FloorTermWinsTheMax) {
  const ObjectiveOracle o = half_square(2);
  StepConfig cfg;
  cfg.eta0 = 0.5;
  RunOptions opt;
  opt.t_max = 20;
  const TrajectoryRecord rec =
      run(euclidean_mirror(), o, analytic_gradient_field(o), cfg, Eigen::Vector2d(1, 1), opt);
  const CertificateReport rep = last_iterate_bound(rec, euclidean_mirror(), Vector::Zero(2), 0.3);
  EXPECT_EQ(rep.bound, 0.3);
  EXPECT_FALSE(rep.achieved_gap.has_value());
}

TEST(Run, CoordinateFieldEvaluationBudget) {
  for (bool reuse : {true, false}) {
    Problem p = make_problem({ProblemKind::QuadraticSpectrum, 4, 1.0, 4.0, 2});
    StepConfig cfg;
    cfg.rule = StepRule::GeometricGrid;
    cfg.eta0 = 0.25;
    cfg.grid_width = 1;
    RunOptions opt;
    opt.t_max = 15;
    const FiniteDiffField field{&p.oracle, 1e-3, 0.8, reuse};
    const TrajectoryRecord rec =
        run(euclidean_mirror(), p.oracle, fd_coordinate_field(field), cfg, default_start(p), opt);
    std::uint64_t probes = 0;
    for (const auto& row : rec.rows) probes += static_cast<std::uint64_t>(row.probes);
    const std::uint64_t per_field = reuse ? 8 : 9;
    EXPECT_EQ(rec.rows.back().evals_cum, 1 + per_field * rec.steps() + probes);
    EXPECT_EQ(probes, 3 * rec.steps());
  }
}

TEST(Run, DomainEscapeEndsWithPartialRecord) {
  // linear objective under the entropy mirror keeps pushing one coordinate down
  ObjectiveOracle o(2, [](const Vector& x) { return 1e3 * x(0) - x(1); });
  StepConfig cfg;
  cfg.eta0 = 1.0;
  RunOptions opt;
  opt.t_max = 50;
  const VectorField field = [](const Vector&, std::size_t, double) {
    return FieldSample{Eigen::Vector2d(1e3, -1), std::nullopt};
  };
  const TrajectoryRecord rec = run(entropy_mirror(), o, field, cfg, Eigen::Vector2d(0.5, 0.5), opt);
  EXPECT_EQ(rec.status, RunStatus::DomainEscape);
  EXPECT_GE(rec.rows.size(), 1u);
  EXPECT_FALSE(rec.message.empty());
}

TEST(Run, DeterministicRecords) {
  auto once = [] {
    Problem p = make_problem({ProblemKind::LogSumExp, 5, 1.0, 10.0, 4, 1.0, 6});
    StepConfig cfg;
    cfg.rule = StepRule::Backtracking;
    cfg.eta0 = 0.1;
    RunOptions opt;
    opt.t_max = 40;
    const FiniteDiffField field{&p.oracle, 1e-3, 0.5, true};
    return run(euclidean_mirror(), p.oracle, fd_coordinate_field(field), cfg, default_start(p), opt);
  };
  const TrajectoryRecord a = once(), b = once();
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t j = 0; j < a.rows.size(); ++j) {
    EXPECT_EQ(a.rows[j].x, b.rows[j].x);
    EXPECT_EQ(a.rows[j].f, b.rows[j].f);
    EXPECT_EQ(a.rows[j].eta, b.rows[j].eta);
  }
}

TEST(Run, GapToleranceStop) {
  const ObjectiveOracle o = half_square(2);
  StepConfig cfg;
  cfg.eta0 = 0.5;
  RunOptions opt;
  opt.t_max = 100;
  opt.gap_tol = 1e-6;
  const TrajectoryRecord rec =
      run(euclidean_mirror(), o, analytic_gradient_field(o), cfg, Eigen::Vector2d(1, 1), opt);
  EXPECT_EQ(rec.status, RunStatus::GapReached);
  EXPECT_LE(rec.rows.back().f, 1e-6);
  EXPECT_GT(rec.rows[rec.rows.size() - 2].f, 1e-6);

  ObjectiveOracle blind(2, [](const Vector& x) { return x.squaredNorm(); });
  EXPECT_THROW(run(euclidean_mirror(), blind, analytic_gradient_field(o), cfg, Eigen::Vector2d(1, 1), opt),
               std::invalid_argument);
}

TEST(Run, MonotoneOnCertifiedSteps) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Problem p = make_problem({ProblemKind::QuadraticSpectrum, 6, 1.0, 30.0, seed});
    StepConfig cfg;
    cfg.rule = seed % 2 ? StepRule::Backtracking : StepRule::GeometricGrid;
    cfg.eta0 = 0.05;
    RunOptions opt;
    opt.t_max = 60;
    const FiniteDiffField field{&p.oracle, 1e-3, star_c_from_mu_L(1.0, 30.0), true};
    const TrajectoryRecord rec =
        run(euclidean_mirror(), p.oracle, fd_coordinate_field(field), cfg, default_start(p), opt);
    for (std::size_t j = 0; j + 1 < rec.rows.size(); ++j) {
      if (!rec.rows[j].cert_pass.value_or(false)) continue;
      const double fj = rec.rows[j].f;
      EXPECT_LE(rec.rows[j + 1].f, fj + 1e-10 * std::max(1.0, std::abs(fj)));
    }
  }
}

TEST(Run, EuclideanDownwardClosedCertificates) {
  // whenever eta passes at x, every smaller probed eta passes too
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Problem p = make_problem({ProblemKind::LogSumExp, 4, 1.0, 20.0, seed, 1.0, 5});
    Rng rng(seed);
    const MirrorMap map = euclidean_mirror();
    for (int k = 0; k < 10; ++k) {
      const Vector x = default_start(p) + rng.normal_vector(4);
      const Vector omega = p.oracle.gradient(x) + 0.1 * rng.normal_vector(4);
      const double fx = p.oracle.evaluate_uncounted(x);
      bool failed = false;
      for (int i = 1; i <= 40; ++i) {
        const double eta = 0.01 * i;
        const bool pass = certificate(map, p.oracle, omega, x, fx, mirror_step(map, x, omega, eta), eta).pass;
        if (pass) EXPECT_FALSE(failed) << "seed " << seed << " eta " << eta;
        failed = failed || !pass;
      }
    }
  }
}
