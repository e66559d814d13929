#include "zomd/app.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <sstream>

#include "zomd/certify.hpp"
#include "zomd/conic.hpp"
#include "zomd/fields.hpp"
#include "zomd/geometry.hpp"
#include "zomd/report.hpp"

namespace zomd::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json vec_json(const Vector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

template <typename T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

MirrorMap make_map(const RunConfig& config) {
  return config.mirror == MirrorKind::Euclidean ? MirrorMap::euclidean() : MirrorMap::entropy();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  file << content;
}

/// Points x_* + r u with r uniform in [lo, hi] that lie in the oracle domain. For the
/// positive-orthant problem hi is clipped so the ball stays inside the orthant.
std::vector<Vector> sample_points(const Problem& problem, std::size_t count, std::uint64_t seed,
                                  double lo, double hi) {
  const Vector& x_star = *problem.oracle.known_minimizer();
  if (problem.spec.kind == ProblemKind::SimplexQuadratic) {
    const double cap = 0.9 * x_star.minCoeff();
    hi = std::min(hi, cap);
    lo = std::min(lo, hi);
  }
  Rng rng(seed);
  std::vector<Vector> pts;
  pts.reserve(count);
  while (pts.size() < count) {
    const Vector x = x_star + rng.uniform(lo, hi) * rng.unit_vector(problem.spec.dim);
    if (problem.oracle.in_domain(x)) pts.push_back(x);
  }
  return pts;
}

std::vector<Vector> eigen_directions(const Problem& problem) {
  std::vector<Vector> dirs;
  if (problem.eigenvectors) {
    for (Index k = 0; k < problem.eigenvectors->cols(); ++k) dirs.push_back(problem.eigenvectors->col(k));
  }
  return dirs;
}

json problem_json(const Problem& problem) {
  const ProblemSpec& s = problem.spec;
  json j;
  j["kind"] = to_string(s.kind);
  j["dim"] = s.dim;
  j["mu"] = s.mu;
  j["L"] = s.L;
  j["declared_L"] = *problem.oracle.L_smooth();
  j["seed"] = s.seed;
  if (s.kind == ProblemKind::LogSumExp) {
    j["tau"] = s.tau;
    j["terms"] = s.terms;
  }
  j["x_star"] = vec_json(*problem.oracle.known_minimizer());
  j["f_star"] = *problem.oracle.optimal_value();
  if (problem.reference) {
    j["reference"] = {{"iterations", problem.reference->iterations},
                      {"grad_norm", problem.reference->grad_norm},
                      {"tolerance", problem.reference->tolerance}};
  }
  return j;
}

}  // namespace

double resolve_c(const RunConfig& config, const Problem& problem) {
  if (config.c) return *config.c;
  return star_c_from_mu_L(*problem.oracle.mu(), *problem.oracle.L_smooth());
}

VectorField build_field(const RunConfig& config, const Problem& problem, double c) {
  const ObjectiveOracle& oracle = problem.oracle;
  switch (config.field) {
    case FieldKind::AnalyticGrad:
      return analytic_gradient_field(oracle);
    case FieldKind::FdCoordinate:
      return fd_coordinate_field(FiniteDiffField{&oracle, config.epsilon, c, config.reuse_center});
    case FieldKind::FdDirectional:
      return fd_directional_field(oracle, random_orthogonal(problem.spec.dim, problem.spec.seed + 1),
                                  config.epsilon, config.block_size);
    case FieldKind::FdStencil:
      return fd_stencil_field(oracle, coordinate_stencil(problem.spec.dim), config.epsilon);
  }
  throw std::logic_error("build_field: unhandled field kind");
}

RunResult execute_run(const RunConfig& config) {
  config.validate();
  Problem problem = make_problem(config.problem);
  const ObjectiveOracle& oracle = problem.oracle;
  const MirrorMap map = make_map(config);
  const double c = resolve_c(config, problem);
  const VectorField field = build_field(config, problem, c);
  const Vector x1 = config.x1 ? *config.x1 : default_start(problem);

  RunOptions options;
  options.t_max = config.t_max;
  options.gap_tol = config.gap_tol;
  options.stop_on_uncertified = config.stop_on_uncertified;

  RunResult result;
  result.record = run(map, oracle, field, config.step, x1, options);
  const TrajectoryRecord& record = result.record;
  const Vector& x_star = *oracle.known_minimizer();
  result.f_star = oracle.optimal_value();
  const double f_star = *result.f_star;
  const double mu = *oracle.mu(), L = *oracle.L_smooth();

  // Error floor: zero for the exact gradient, the sampled maximum over the exceptional ball
  // for the finite-difference fields.
  json floor_j;
  double floor_term = 0.0;
  double radius = 0.0;
  if (config.field != FieldKind::AnalyticGrad) {
    radius = certify::floor_radius(mu, L, config.epsilon, problem.spec.dim);
    const certify::FloorEstimate est =
        certify::floor_value(oracle, radius, config.floor_mesh, eigen_directions(problem));
    floor_term = est.floor_value;
    floor_j = {{"radius", est.radius},
               {"floor_value", est.floor_value},
               {"analytic_bound", opt_json(est.analytic_bound)},
               {"sample_count", est.sample_count}};
  }

  json& rep = result.report;
  bool bound_defined = false;
  std::string bound_note;
  if (record.steps() == 0) {
    bound_note = "no step was taken, the rate term is undefined";
  } else if (record.certified_prefix() == 0) {
    bound_note = "the first step is uncertified, the rate term is undefined";
  } else {
    result.certificate = last_iterate_bound(record, map, x_star, floor_term, f_star);
    bound_defined = true;
    if (!result.certificate->all_certified) {
      bound_note = "bound covers the certified prefix of " +
                   std::to_string(result.certificate->certified_steps) + " steps only";
    }
  }

  if (result.certificate) {
    rep = to_json(*result.certificate);
  } else {
    rep = {{"all_certified", record.all_certified()},
           {"total_steps", record.steps()},
           {"certified_steps", 0},
           {"sum_eta", 0.0},
           {"bregman_to_start", map.bregman(x_star, record.rows.front().x)},
           {"rate_term", nullptr},
           {"floor_term", floor_term},
           {"bound", nullptr},
           {"f_star", f_star},
           {"achieved_gap", record.rows.front().f - f_star},
           {"final_gap", record.rows.back().f - f_star}};
  }
  rep["bound_defined"] = bound_defined;
  rep["bound_note"] = bound_note;
  rep["status"] = to_string(record.status);
  rep["message"] = record.message;
  rep["evals_total"] = record.rows.back().evals_cum;
  rep["problem"] = problem_json(problem);
  rep["run"] = {{"mirror", to_string(config.mirror)},
                {"field", to_string(config.field)},
                {"epsilon", config.epsilon},
                {"c", c},
                {"c_policy", config.c ? "explicit" : "from-mu-L"},
                {"reuse_center", config.reuse_center},
                {"step_rule", to_string(config.step.rule)},
                {"eta0", config.step.eta0},
                {"t_max", config.t_max},
                {"x1", vec_json(x1)}};
  rep["floor"] = floor_j;

  // Interface condition <Omega(x), x - x_*> >= f(x) - f(x_*) at the window points outside the
  // exceptional ball.
  const std::size_t window = result.certificate ? result.certificate->certified_steps : 0;
  std::size_t checked = 0, violations = 0;
  json witness = nullptr;
  for (std::size_t j = 0; j < window; ++j) {
    const TrajectoryRow& row = record.rows[j];
    if (!row.omega) continue;
    if ((row.x - x_star).norm() <= radius) continue;
    ++checked;
    const double lhs = row.omega->dot(row.x - x_star);
    const double rhs = row.f - f_star;
    if (lhs < rhs - 1e-9 * std::max(1.0, std::abs(rhs))) {
      if (violations == 0) witness = {{"iter", row.iter}, {"lhs", lhs}, {"rhs", rhs}};
      ++violations;
    }
  }
  const bool interface_ok = violations == 0;
  rep["checks"]["interface"] = {{"pass", interface_ok},
                                {"points_checked", checked},
                                {"violations", violations},
                                {"exclusion_radius", radius},
                                {"witness", witness}};
  if (result.certificate && result.certificate->achieved_gap) {
    rep["checks"]["gap_within_bound"] = {
        {"pass", *result.certificate->achieved_gap <= result.certificate->bound + 1e-9},
        {"applies", result.certificate->all_certified && interface_ok}};
  }
  return result;
}

void write_run_artifacts(const RunResult& result, const std::string& dir) {
  fs::create_directories(dir);
  write_file(fs::path(dir) / "trajectory.csv", trajectory_csv(result.record));
  write_file(fs::path(dir) / "report.json", result.report.dump(2) + "\n");
  if (result.f_star) write_file(fs::path(dir) / "gap.dat", gap_series(result.record, *result.f_star));
}

// ---------------------------------------------------------------------------------------------
// verifier suite

namespace {

json check_step_feasibility(const RunConfig& config, const Problem& problem, double c) {
  const MirrorMap map = make_map(config);
  if (!map.sigma() || !map.beta()) {
    return {{"pass", true},
            {"applicable", false},
            {"note", "mirror map declares no (sigma, beta) pair"}};
  }
  const ObjectiveOracle& oracle = problem.oracle;
  const NormPair norms = map.norm_pair();
  certify::FeasibilityInputs in;
  in.sigma = *map.sigma();
  in.beta = *map.beta();
  in.L = *oracle.L_smooth();
  const double limit = in.sigma / (2.0 * in.beta);
  const FiniteDiffField fd{&oracle, config.epsilon, c, false};

  constexpr std::size_t kPairs = 200;
  Rng rng(problem.spec.seed + 51);
  const auto points = sample_points(problem, 20 * kPairs, problem.spec.seed + 50, 0.1, 3.0);
  std::size_t tested = 0, failures = 0, zero_checked = 0, zero_failures = 0;
  double max_delta = 0.0;
  json witness = nullptr;
  for (std::size_t k = 0; k < points.size() && tested < kPairs; ++k) {
    const Vector& y = points[k];
    const Vector grad = oracle.gradient(y);
    Vector omega;
    if (k % 2 == 0) {
      omega = omega_fd(fd, y).omega;
    } else {
      omega = grad + rng.uniform(0.0, 0.6) * grad.norm() * rng.unit_vector(y.size());
    }
    in.delta = certify::delta_ratio(omega, grad, norms);
    const double eta = certify::eta_feasible_max(in);
    if (in.delta >= limit) {
      ++zero_checked;
      if (eta != 0.0) ++zero_failures;
      continue;
    }
    ++tested;
    max_delta = std::max(max_delta, in.delta);
    const double f_y = oracle.evaluate(y);
    const Vector y_next = mirror_step(map, y, omega, eta);
    const CertificateCheck chk = certificate(map, oracle, omega, y, f_y, y_next, eta);
    if (!(chk.lhs <= chk.rhs + 1e-10 * std::max(1.0, std::abs(chk.rhs)))) {
      if (failures == 0) {
        witness = {{"y", vec_json(y)}, {"delta", in.delta}, {"eta", eta}, {"lhs", chk.lhs},
                   {"rhs", chk.rhs}};
      }
      ++failures;
    }
  }
  return {{"pass", failures == 0 && zero_failures == 0 && tested == kPairs},
          {"pairs_tested", tested},
          {"failures", failures},
          {"max_delta", max_delta},
          {"large_delta_points", zero_checked},
          {"large_delta_nonzero_eta", zero_failures},
          {"witness", witness}};
}

json check_gradient_angle(const Problem& problem) {
  const double mu = *problem.oracle.mu(), L = *problem.oracle.L_smooth();
  const double bound = certify::kantorovich_cos(mu, L);

  // SPD matrices with spectrum in [mu, L]
  Rng rng(problem.spec.seed + 60);
  std::size_t matrix_failures = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 100; ++k) {
    const Index d = 2 + k % 5;
    Vector lambda(d);
    lambda(0) = mu;
    lambda(1) = L;
    for (Index i = 2; i < d; ++i) lambda(i) = rng.uniform(mu, L);
    const Matrix Q = random_orthogonal(d, problem.spec.seed + 1000 + static_cast<std::uint64_t>(k));
    const Matrix A = Q * lambda.asDiagonal() * Q.transpose();
    const Vector v = rng.normal_vector(d);
    const Vector av = A * v;
    const double cos = av.dot(v) / (av.norm() * v.norm());
    worst_margin = std::min(worst_margin, cos - bound);
    if (cos < bound - 1e-12) ++matrix_failures;
  }

  // gradient angle on the configured problem
  const ObjectiveOracle& oracle = problem.oracle;
  const Vector& x_star = *oracle.known_minimizer();
  std::size_t point_failures = 0;
  double worst_cos = 1.0;
  json witness = nullptr;
  for (const Vector& x : sample_points(problem, 100, problem.spec.seed + 61, 0.1, 3.0)) {
    const Vector g = oracle.gradient(x);
    const Vector d = x - x_star;
    const double cos = g.dot(d) / (g.norm() * d.norm());
    worst_cos = std::min(worst_cos, cos);
    if (cos < bound - 1e-9) {
      if (point_failures == 0) witness = {{"x", vec_json(x)}, {"cos", cos}};
      ++point_failures;
    }
  }
  return {{"pass", matrix_failures == 0 && point_failures == 0},
          {"kantorovich_cos", bound},
          {"matrix_failures", matrix_failures},
          {"worst_matrix_margin", worst_margin},
          {"point_failures", point_failures},
          {"worst_point_cos", worst_cos},
          {"witness", witness}};
}

json check_exceptional_set(const RunConfig& config, const Problem& problem) {
  const ObjectiveOracle& oracle = problem.oracle;
  const double mu = *oracle.mu(), L = *oracle.L_smooth();
  const double c_star = star_c_from_mu_L(mu, L);
  const double radius = certify::floor_radius(mu, L, config.epsilon, problem.spec.dim);
  const Vector& x_star = *oracle.known_minimizer();

  std::size_t in_v = 0, violations = 0, threshold_failures = 0;
  json witness = nullptr;
  const auto points = sample_points(problem, 10000, problem.spec.seed + 66, 0.0, 3.0 * radius);
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Vector& x = points[k];
    const CentralDifferences cd = central_differences(oracle, x, config.epsilon);
    const double M = cd.m.norm(), R = cd.r.norm();
    const double dist = (x - x_star).norm();
    if (v_membership(M, R, c_star)) {
      ++in_v;
      if (dist > radius) {
        if (violations == 0) witness = {{"x", vec_json(x)}, {"distance", dist}, {"M", M}, {"R", R}};
        ++violations;
      }
    }
    if (dist > radius && !(M > (mu / L) * R)) ++threshold_failures;
  }

  const certify::FloorEstimate est =
      certify::floor_value(oracle, radius, config.floor_mesh, eigen_directions(problem));
  const bool floor_ok = est.floor_value <= *est.analytic_bound * (1.0 + 1e-12);

  return {{"pass", violations == 0 && threshold_failures == 0 && floor_ok},
          {"radius", radius},
          {"points", points.size()},
          {"in_V", in_v},
          {"violations", violations},
          {"threshold_failures", threshold_failures},
          {"floor_value", est.floor_value},
          {"floor_analytic_bound", *est.analytic_bound},
          {"witness", witness}};
}

json check_fd_error(const RunConfig& config, const Problem& problem) {
  const ObjectiveOracle& oracle = problem.oracle;
  const double L = *oracle.L_smooth();
  const double eps = config.epsilon;
  const auto points = sample_points(problem, 100, problem.spec.seed + 81, 0.1, 3.0);

  std::size_t fd_failures = 0, curvature_failures = 0, hessian_failures = 0;
  double worst_ratio = 0.0, max_hessian = 0.0;
  json witness = nullptr;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Vector& x = points[k];
    const certify::FdErrorCheck fd = certify::fd_error_check(oracle, x, eps);
    worst_ratio = std::max(worst_ratio, fd.bound > 0.0 ? fd.err / fd.bound : 0.0);
    if (!fd.ok) {
      if (witness.is_null()) witness = {{"x", vec_json(x)}, {"err", fd.err}, {"bound", fd.bound}};
      ++fd_failures;
    }
    // second differences are bounded by the curvature: |r_i| <= L eps / 2
    const CentralDifferences cd = central_differences(oracle, x, eps);
    const double r_max = cd.r.cwiseAbs().maxCoeff();
    if (r_max > 0.5 * L * eps * (1.0 + 1e-9)) {
      if (witness.is_null()) {
        witness = {{"x", vec_json(x)}, {"r_max", r_max}, {"bound", 0.5 * L * eps}};
      }
      ++curvature_failures;
    }
    if (k % 10 == 0) {
      const double h = certify::hessian_norm_estimate(oracle, x, problem.spec.seed + k);
      max_hessian = std::max(max_hessian, h);
      if (h > L * (1.0 + 1e-6)) {
        if (witness.is_null()) {
          witness = {{"x", vec_json(x)}, {"hessian_norm", h}, {"declared_L", L}};
        }
        ++hessian_failures;
      }
    }
  }
  return {{"pass", fd_failures == 0 && curvature_failures == 0 && hessian_failures == 0},
          {"declared_L", L},
          {"points", points.size()},
          {"fd_failures", fd_failures},
          {"worst_err_over_bound", worst_ratio},
          {"curvature_failures", curvature_failures},
          {"hessian_failures", hessian_failures},
          {"max_hessian_estimate", max_hessian},
          {"witness", witness}};
}

json check_angle_tightness(const Problem& problem) {
  const double mu = *problem.oracle.mu(), L = *problem.oracle.L_smooth();
  const certify::TightnessInstance t = certify::tightness_instance(mu, L);
  const double expected = certify::kantorovich_cos(mu, L);
  return {{"pass", std::abs(t.cos_theta - expected) <= 1e-12},
          {"mu", mu},
          {"L", L},
          {"cos_theta", t.cos_theta},
          {"kantorovich_cos", expected},
          {"v", vec_json(t.v)}};
}

json check_downward_closed(const Problem& problem) {
  const ObjectiveOracle& oracle = problem.oracle;
  const double mu = *oracle.mu();
  std::vector<double> grid(50);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = (2.0 / mu) * static_cast<double>(k) / 49.0;

  Rng rng(problem.spec.seed + 90);
  const auto points = sample_points(problem, 100, problem.spec.seed + 91, 0.1, 3.0);
  std::size_t failures = 0, nontrivial = 0;
  json witness = nullptr;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Vector& x = points[k];
    Vector s = oracle.gradient(x);
    if (k % 2 == 1) s += 0.3 * s.norm() * rng.unit_vector(x.size());
    const certify::DownwardClosedScan scan = certify::downward_closed_scan(oracle, x, s, grid);
    std::size_t feasible = 0;
    for (bool f : scan.feasible) feasible += f ? 1 : 0;
    if (feasible > 1 && feasible < grid.size()) ++nontrivial;
    if (!scan.is_interval) {
      if (failures == 0) witness = {{"x", vec_json(x)}, {"s", vec_json(s)}};
      ++failures;
    }
  }
  return {{"pass", failures == 0},
          {"cases", points.size()},
          {"grid_points", grid.size()},
          {"cases_with_interior_boundary", nontrivial},
          {"failures", failures},
          {"witness", witness}};
}

json check_conic() {
  const double spot = conic::robust_alpha(1.0, 0.6, 0.8);
  std::size_t failures = 0;
  double worst_ratio = 1.0;
  json witness = nullptr;
  const auto grid = conic::dominance_grid();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double alpha = conic::min_dominance_alpha(grid[k]);
    const conic::DominanceCheck chk = conic::verify_dominance(grid[k], alpha, 2000, 700 + k);
    worst_ratio = std::min(worst_ratio, chk.worst_ratio);
    if (!chk.holds) {
      if (failures == 0) {
        witness = {{"m_norm", grid[k].m.norm()}, {"R", grid[k].radius}, {"c", grid[k].c},
                   {"alpha", alpha}};
      }
      ++failures;
    }
  }
  return {{"pass", std::abs(spot - 5.8) <= 1e-12 && failures == 0},
          {"spot_alpha", spot},
          {"spot_expected", 5.8},
          {"grid_cells", grid.size()},
          {"dominance_failures", failures},
          {"worst_ratio", worst_ratio},
          {"spot_tight_alpha", conic::tight_dominance_alpha(1.0, 0.6, 0.8)},
          {"witness", witness}};
}

}  // namespace

json certify_checks(const RunConfig& config) {
  config.validate();
  const Problem problem = make_problem(config.problem);
  const double c = resolve_c(config, problem);
  json checks;
  checks["step_feasibility"] = check_step_feasibility(config, problem, c);
  checks["gradient_angle"] = check_gradient_angle(problem);
  checks["exceptional_set"] = check_exceptional_set(config, problem);
  checks["fd_error"] = check_fd_error(config, problem);
  checks["angle_tightness"] = check_angle_tightness(problem);
  checks["downward_closed"] = check_downward_closed(problem);
  checks["conic"] = check_conic();
  return checks;
}

// ---------------------------------------------------------------------------------------------
// sweep

std::vector<SweepRow> execute_sweep(const RunConfig& config, const std::optional<std::string>& dir) {
  config.validate();
  std::vector<double> epsilons = config.sweep_epsilons;
  if (epsilons.empty()) epsilons.push_back(config.epsilon);
  std::vector<StepRule> rules = config.sweep_rules;
  if (rules.empty()) rules.push_back(config.step.rule);

  std::vector<std::future<SweepRow>> cells;
  std::size_t index = 0;
  for (double eps : epsilons) {
    for (StepRule rule : rules) {
      RunConfig cell = config;
      cell.epsilon = eps;
      cell.step.rule = rule;
      std::optional<std::string> cell_dir;
      if (dir) cell_dir = (fs::path(*dir) / ("cell_" + std::to_string(index))).string();
      ++index;
      cells.push_back(std::async(std::launch::async, [cell, cell_dir]() {
        SweepRow row;
        row.epsilon = cell.epsilon;
        row.rule = cell.step.rule;
        try {
          const RunResult r = execute_run(cell);
          if (cell_dir) write_run_artifacts(r, *cell_dir);
          const json& rep = r.report;
          row.status = rep["status"].get<std::string>();
          if (!rep["final_gap"].is_null()) row.final_gap = rep["final_gap"].get<double>();
          if (!rep["bound"].is_null()) row.bound = rep["bound"].get<double>();
          row.floor_term = rep["floor_term"].get<double>();
          if (!rep["floor"].is_null()) row.floor_bound = rep["floor"]["analytic_bound"].get<double>();
          row.evals = rep["evals_total"].get<std::uint64_t>();
          row.sum_eta = rep["sum_eta"].get<double>();
          row.certified_steps = rep["certified_steps"].get<std::size_t>();
          row.all_certified = rep["all_certified"].get<bool>();
        } catch (const std::exception& e) {
          row.status = std::string("error: ") + e.what();
        }
        return row;
      }));
    }
  }
  std::vector<SweepRow> rows;
  for (auto& f : cells) rows.push_back(f.get());
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "epsilon,rule,final_gap,bound,floor_term,evals,sum_eta,certified_steps,all_certified,"
         "floor_bound,status\n";
  for (const SweepRow& r : rows) {
    std::string status = r.status;
    for (char& ch : status) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    out << format_double(r.epsilon) << ',' << to_string(r.rule) << ','
        << (r.final_gap ? format_double(*r.final_gap) : "") << ','
        << (r.bound ? format_double(*r.bound) : "") << ',' << format_double(r.floor_term) << ','
        << r.evals << ',' << format_double(r.sum_eta) << ',' << r.certified_steps << ','
        << (r.all_certified ? 1 : 0) << ',' << format_double(r.floor_bound) << ',' << status
        << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------------------------
// commands

namespace {

/// Loads the config and applies --out. Returns nullopt after printing the diagnostic.
std::optional<RunConfig> load(const std::string& path, const std::optional<std::string>& out_dir,
                              std::ostream& err) {
  try {
    RunConfig cfg = load_config(path);
    if (out_dir) cfg.output_dir = *out_dir;
    return cfg;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return std::nullopt;
  }
}

/// Readable form for terminal output; files keep the round-trip form.
std::string display(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace

int cmd_run(const std::string& config_path, const std::optional<std::string>& out_dir,
            std::ostream& out, std::ostream& err) {
  const auto cfg = load(config_path, out_dir, err);
  if (!cfg) return kConfigError;
  RunResult result;
  try {
    result = execute_run(*cfg);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomainError;
  }
  write_run_artifacts(result, cfg->output_dir);

  const json& rep = result.report;
  out << "status: " << rep["status"].get<std::string>() << '\n'
      << "steps: " << rep["total_steps"] << " (certified prefix " << rep["certified_steps"]
      << ", all certified: " << (rep["all_certified"].get<bool>() ? "yes" : "no") << ")\n";
  if (rep["bound_defined"].get<bool>()) {
    out << "achieved gap: " << format_double(rep["achieved_gap"].get<double>())
        << "  bound: " << format_double(rep["bound"].get<double>()) << '\n';
  }
  if (!rep["bound_note"].get<std::string>().empty()) {
    out << "note: " << rep["bound_note"].get<std::string>() << '\n';
  }
  out << "artifacts: " << cfg->output_dir << '\n';

  if (result.record.status == RunStatus::DomainEscape) {
    err << "domain error: " << result.record.message << '\n';
    return kDomainError;
  }
  return kOk;
}

int cmd_certify(const std::string& config_path, const std::optional<std::string>& out_dir,
                std::ostream& out, std::ostream& err) {
  const auto cfg = load(config_path, out_dir, err);
  if (!cfg) return kConfigError;
  json checks;
  try {
    checks = certify_checks(*cfg);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  fs::create_directories(cfg->output_dir);
  write_file(fs::path(cfg->output_dir) / "checks.json", checks.dump(2) + "\n");

  bool all = true;
  for (const auto& [tag, result] : checks.items()) {
    const bool pass = result["pass"].get<bool>();
    out << (pass ? "PASS " : "FAIL ") << tag << '\n';
    if (!pass) {
      all = false;
      err << "check failed: " << tag << " witness " << result["witness"].dump() << '\n';
    }
  }
  return all ? kOk : kCheckFailed;
}

int cmd_conic(double m_norm, double radius, double c, std::optional<double> witness_t, bool as_json,
              std::ostream& out, std::ostream& err) {
  if (!(m_norm > 0.0) || !(radius >= 0.0) || !(c > 0.0 && c <= 1.0)) {
    err << "invalid arguments: need m_norm > 0, R >= 0, 0 < c <= 1\n";
    return kConfigError;
  }
  conic::DominanceProblem problem{m_norm * Vector::Unit(3, 0), radius, c};
  const conic::Infeasibility reason = problem.feasibility();
  if (reason != conic::Infeasibility::None) {
    err << "infeasible: " << conic::describe(reason) << '\n';
    return kCheckFailed;
  }
  const double alpha = conic::min_dominance_alpha(problem);
  json j = {{"m_norm", m_norm},
            {"R", radius},
            {"c", c},
            {"s", problem.s()},
            {"rho", problem.rho()},
            {"alpha", alpha},
            {"tight_alpha", conic::tight_dominance_alpha(m_norm, radius, c)}};
  if (witness_t) {
    try {
      const conic::Witness w = conic::worst_case_witness(radius, problem.s(), problem.rho(), *witness_t);
      j["witness"] = {{"t", *witness_t},     {"u", vec_json(w.u)},   {"u_hat", vec_json(w.u_hat)},
                      {"o", vec_json(w.o)},  {"w", vec_json(w.w)},   {"inner_u_w", w.lhs},
                      {"s_norm_w", w.rhs},   {"violates", w.violates}};
    } catch (const std::exception& e) {
      err << "witness: " << e.what() << '\n';
      return kCheckFailed;
    }
  }
  if (as_json) {
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "alpha = " << display(alpha) << '\n'
      << "s = " << display(problem.s()) << '\n'
      << "rho = " << display(problem.rho()) << '\n'
      << "tight alpha (numerical) = " << display(j["tight_alpha"].get<double>()) << '\n';
  if (witness_t) {
    const json& w = j["witness"];
    auto vec = [](const json& a) {
      std::string s = "(";
      for (std::size_t i = 0; i < a.size(); ++i) s += (i ? ", " : "") + display(a[i].get<double>());
      return s + ")";
    };
    out << "witness t = " << display(*witness_t) << '\n'
        << "  u     = " << vec(w["u"]) << '\n'
        << "  u_hat = " << vec(w["u_hat"]) << '\n'
        << "  o     = " << vec(w["o"]) << '\n'
        << "  w     = " << vec(w["w"]) << '\n'
        << "  <u, w> = " << display(w["inner_u_w"].get<double>()) << '\n'
        << "  s ||w|| = " << display(w["s_norm_w"].get<double>()) << '\n'
        << "  <u, w> < s ||w||: " << (w["violates"].get<bool>() ? "yes" : "no") << '\n';
  }
  return kOk;
}

int cmd_sweep(const std::string& config_path, const std::optional<std::string>& out_dir,
              std::ostream& out, std::ostream& err) {
  const auto cfg = load(config_path, out_dir, err);
  if (!cfg) return kConfigError;
  std::vector<SweepRow> rows;
  try {
    rows = execute_sweep(*cfg, cfg->output_dir);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  fs::create_directories(cfg->output_dir);
  const std::string csv = sweep_csv(rows);
  write_file(fs::path(cfg->output_dir) / "summary.csv", csv);
  out << csv;
  for (const SweepRow& r : rows) {
    if (r.status.rfind("error", 0) == 0) err << "cell eps=" << r.epsilon << ": " << r.status << '\n';
  }
  return kOk;
}

}  // namespace zomd::app
