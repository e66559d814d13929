#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zomd/app.hpp"

using namespace zomd;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("zomd_test_app_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.cfg";
  std::ofstream(p) << text;
  return p;
}

const char* kQuadratic = R"(problem = quadratic-spectrum
dim = 4
mu = 1
L = 4
seed = 3
field = fd-coordinate
epsilon = 1e-3
step_rule = geometric-grid
eta0 = 0.25
grid_width = 1
t_max = 40
)";

}  // namespace

TEST(ExecuteRun, ReportAndArtifacts) {
  const RunConfig cfg = parse_config(kQuadratic);
  const app::RunResult r = app::execute_run(cfg);
  const json& rep = r.report;
  EXPECT_TRUE(rep["bound_defined"].get<bool>());
  // near the minimizer alpha approaches 2 and the narrow grid cannot shrink eta far enough
  EXPECT_FALSE(rep["all_certified"].get<bool>());
  EXPECT_EQ(rep["certified_steps"].get<std::size_t>(), 6u);
  EXPECT_NE(rep["bound_note"].get<std::string>().find("6 steps"), std::string::npos);
  EXPECT_EQ(rep["total_steps"].get<std::size_t>(), 39u);
  EXPECT_LE(rep["achieved_gap"].get<double>(), rep["bound"].get<double>());
  EXPECT_TRUE(rep["checks"]["interface"]["pass"].get<bool>());
  EXPECT_TRUE(rep["checks"]["gap_within_bound"]["pass"].get<bool>());
  EXPECT_DOUBLE_EQ(rep["run"]["c"].get<double>(), 0.8);

  const fs::path dir = scratch("artifacts");
  app::write_run_artifacts(r, dir.string());
  const std::string csv = slurp(dir / "trajectory.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 41);
  EXPECT_EQ(json::parse(slurp(dir / "report.json")), rep);
  EXPECT_TRUE(fs::exists(dir / "gap.dat"));
}

TEST(ExecuteRun, EvaluationAccounting) {
  for (const char* reuse : {"true", "false"}) {
    const RunConfig cfg = parse_config(std::string(kQuadratic) + "reuse_center = " + reuse + "\n");
    const app::RunResult r = app::execute_run(cfg);
    const std::uint64_t per_step = 2 * 4 + (std::string(reuse) == "true" ? 0 : 1) + 3;
    EXPECT_EQ(r.report["evals_total"].get<std::uint64_t>(), 1 + per_step * r.record.steps());
  }
}

TEST(ExecuteRun, SingleIterateHasNoBound) {
  RunConfig cfg = parse_config(kQuadratic);
  cfg.t_max = 1;
  const app::RunResult r = app::execute_run(cfg);
  EXPECT_FALSE(r.report["bound_defined"].get<bool>());
  EXPECT_TRUE(r.report["bound"].is_null());
  EXPECT_FALSE(r.report["bound_note"].get<std::string>().empty());
  EXPECT_FALSE(r.certificate.has_value());
}

TEST(ExecuteRun, Deterministic) {
  const RunConfig cfg = parse_config(std::string(kQuadratic) + "x1 = 1, -1, 0.5, 2\n");
  EXPECT_EQ(app::execute_run(cfg).report.dump(), app::execute_run(cfg).report.dump());
}

TEST(ExecuteRun, EntropyOnTheSimplex) {
  const RunConfig cfg = parse_config(R"(problem = simplex-quadratic
dim = 5
mu = 1
L = 5
mirror = entropy
field = analytic-grad
step_rule = backtracking
eta0 = 0.1
t_max = 150
)");
  const app::RunResult r = app::execute_run(cfg);
  EXPECT_EQ(r.report["status"], "completed");
  EXPECT_TRUE(r.report["all_certified"].get<bool>());
  EXPECT_LE(r.report["achieved_gap"].get<double>(), r.report["bound"].get<double>());
  // the unnormalized entropic step leaves the simplex but stays in the open orthant
  for (const auto& row : r.record.rows) EXPECT_GT(row.x.minCoeff(), 0.0);
  const Vector x_star = Vector::Map(r.report["problem"]["x_star"].get<std::vector<double>>().data(), 5);
  EXPECT_NEAR(x_star.sum(), 1.0, 1e-14);
  EXPECT_LT((r.record.rows.back().x - x_star).norm(), (r.record.rows.front().x - x_star).norm());
}

TEST(Commands, RunWritesArtifactsAndExitCodes) {
  const fs::path dir = scratch("cmd_run");
  const fs::path cfg = write_config(dir, kQuadratic);
  std::ostringstream out, err;
  EXPECT_EQ(app::cmd_run(cfg.string(), (dir / "out").string(), out, err), app::kOk);
  EXPECT_TRUE(fs::exists(dir / "out" / "report.json"));

  const fs::path bad = dir / "bad.cfg";
  std::ofstream(bad) << "dim = 3\nwhat = 1\n";
  std::ostringstream out2, err2;
  EXPECT_EQ(app::cmd_run(bad.string(), std::nullopt, out2, err2), app::kConfigError);
  EXPECT_NE(err2.str().find("line 2"), std::string::npos);
  EXPECT_EQ(app::cmd_run((dir / "missing.cfg").string(), std::nullopt, out2, err2), app::kConfigError);
}

TEST(Commands, CertifyPassesOnAHonestProblem) {
  RunConfig cfg = parse_config(kQuadratic);
  const json checks = app::certify_checks(cfg);
  for (const char* tag : {"step_feasibility", "gradient_angle", "exceptional_set", "fd_error", "angle_tightness", "downward_closed", "conic"}) {
    ASSERT_TRUE(checks.contains(tag)) << tag;
    EXPECT_TRUE(checks[tag]["pass"].get<bool>()) << tag << ": " << checks[tag].dump();
  }
  EXPECT_DOUBLE_EQ(checks["angle_tightness"]["cos_theta"].get<double>(), 0.8);
}

TEST(Commands, CertifyCatchesAnUnderstatedL) {
  const fs::path dir = scratch("cmd_certify");
  const fs::path cfg = write_config(dir, std::string(kQuadratic) + "declared_L = 2\n");
  std::ostringstream out, err;
  EXPECT_EQ(app::cmd_certify(cfg.string(), (dir / "out").string(), out, err), app::kCheckFailed);
  EXPECT_NE(out.str().find("FAIL fd_error"), std::string::npos);
  EXPECT_NE(err.str().find("witness"), std::string::npos);
  const json checks = json::parse(slurp(dir / "out" / "checks.json"));
  EXPECT_FALSE(checks["fd_error"]["witness"].is_null());
}

TEST(Commands, Conic) {
  std::ostringstream out, err;
  EXPECT_EQ(app::cmd_conic(1.0, 0.6, 0.8, 4.0, true, out, err), app::kOk);
  const json j = json::parse(out.str());
  EXPECT_NEAR(j["alpha"].get<double>(), 5.8, 1e-12);
  EXPECT_FALSE(j["witness"]["violates"].get<bool>());
  std::ostringstream o2, e2;
  EXPECT_EQ(app::cmd_conic(1.0, 0.9, 0.3, std::nullopt, false, o2, e2), app::kCheckFailed);
  EXPECT_NE(e2.str().find("rho"), std::string::npos);
  EXPECT_EQ(app::cmd_conic(-1.0, 0.5, 0.3, std::nullopt, false, o2, e2), app::kConfigError);
}

TEST(Sweep, CellOrderAndFiles) {
  const fs::path dir = scratch("sweep");
  RunConfig cfg = parse_config(std::string(kQuadratic) +
                               "sweep_epsilons = 1e-2, 1e-3\nsweep_rules = fixed, backtracking\n");
  const auto rows = app::execute_sweep(cfg, dir.string());
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].epsilon, 1e-2);
  EXPECT_EQ(rows[1].rule, StepRule::Backtracking);
  EXPECT_EQ(rows[2].epsilon, 1e-3);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_TRUE(fs::exists(dir / ("cell_" + std::to_string(k)) / "report.json"));
  const std::string csv = app::sweep_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "epsilon,rule,final_gap,bound,floor_term,evals,sum_eta,certified_steps,all_certified,"
            "floor_bound,status");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_EQ(app::sweep_csv(app::execute_sweep(cfg)), csv);
}

TEST(BundledConfig, Parses) {
  const char* root = std::getenv("ZOMD_SOURCE_DIR");
  ASSERT_NE(root, nullptr);
  EXPECT_NO_THROW(load_config(std::string(root) + "/configs/quadratic_d10.cfg"));
}
