#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zomd/config.hpp"
#include "zomd/descent.hpp"
#include "zomd/problems.hpp"

namespace zomd::app {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2, kDomainError = 3 };

/// Vector field selected by the config. `c` is the resolved cone parameter.
VectorField build_field(const RunConfig& config, const Problem& problem, double c);

/// Explicit c, or 2 sqrt(mu L) / (mu + L) from the declared moduli.
double resolve_c(const RunConfig& config, const Problem& problem);

struct RunResult {
  TrajectoryRecord record;
  std::optional<CertificateReport> certificate;
  nlohmann::json report;
  std::optional<double> f_star;
};

/// Builds the problem, runs the descent and assembles report.json. No file I/O.
RunResult execute_run(const RunConfig& config);

/// trajectory.csv, report.json and gap.dat under `dir` (created if needed).
void write_run_artifacts(const RunResult& result, const std::string& dir);

/// Full verifier suite on the configured problem, keyed by tag. Each entry has "pass".
nlohmann::json certify_checks(const RunConfig& config);

struct SweepRow {
  double epsilon = 0.0;
  StepRule rule = StepRule::Fixed;
  std::optional<double> final_gap;
  std::optional<double> bound;
  double floor_term = 0.0;
  double floor_bound = 0.0;
  std::uint64_t evals = 0;
  double sum_eta = 0.0;
  std::size_t certified_steps = 0;
  bool all_certified = false;
  std::string status;
};

/// One run per (epsilon, rule) cell, executed concurrently. Rows follow cell order:
/// epsilons outer, rules inner. When `dir` is set each cell writes to dir/cell_<k>.
std::vector<SweepRow> execute_sweep(const RunConfig& config,
                                    const std::optional<std::string>& dir = std::nullopt);

std::string sweep_csv(const std::vector<SweepRow>& rows);

// Command entry points. Diagnostics go to `err`, human-readable results to `out`.
int cmd_run(const std::string& config_path, const std::optional<std::string>& out_dir,
            std::ostream& out, std::ostream& err);
int cmd_certify(const std::string& config_path, const std::optional<std::string>& out_dir,
                std::ostream& out, std::ostream& err);
int cmd_conic(double m_norm, double radius, double c, std::optional<double> witness_t, bool json,
              std::ostream& out, std::ostream& err);
int cmd_sweep(const std::string& config_path, const std::optional<std::string>& out_dir,
              std::ostream& out, std::ostream& err);

}  // namespace zomd::app
