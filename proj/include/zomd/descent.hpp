#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zomd/fields.hpp"
#include "zomd/geometry.hpp"
#include "zomd/oracle.hpp"

namespace zomd {

enum class StepRule { Fixed, GeometricGrid, Backtracking };

const char* to_string(StepRule rule);
StepRule parse_step_rule(const std::string& text);

struct StepConfig {
  StepRule rule = StepRule::Fixed;
  double eta0 = 1.0;
  double grid_factor = 2.0;
  int grid_width = 3;
  double shrink = 0.5;
  int max_probes = 30;

  /// Throws std::invalid_argument on eta0 <= 0, grid_factor <= 1, shrink outside (0,1), ...
  void validate() const;
};

/// F_{eta Omega}(x) = (grad Phi)^{-1}(grad Phi(x) - eta omega). eta = 0 returns x unchanged.
Vector mirror_step(const MirrorMap& map, const Vector& x, const Vector& omega, double eta);

/// Relative slack on the certificate comparison.
inline constexpr double kCertificateTolerance = 1e-12;

inline bool certificate_passes(double lhs, double rhs) {
  return lhs <= rhs + kCertificateTolerance * std::max(1.0, std::abs(rhs));
}

struct CertificateCheck {
  double lhs = 0.0;  // eta D_{f,Omega}(x_next || x)
  double rhs = 0.0;  // D_Phi(x_next || x)
  bool pass = true;
  double f_next = 0.0;
};

/// Trajectory-wise certificate eta D_{f,Omega}(x_next || x) <= D_Phi(x_next || x).
/// Charges exactly one evaluation, f(x_next); f(x) comes from the caller.
CertificateCheck certificate(const MirrorMap& map, const ObjectiveOracle& oracle,
                             const Vector& omega_at_x, const Vector& x, double f_x,
                             const Vector& x_next, double eta);

struct StepSelection {
  double eta = 0.0;
  int probes = 0;
  bool pass = false;
  Vector x_next;
  CertificateCheck check;
};

/// Certificate-driven stepsize choice.
///  - Fixed: eta0, checked once.
///  - GeometricGrid: candidates eta_prev * factor^k, k = -width..width; the largest passing
///    candidate wins.
///  - Backtracking: eta_prev * factor, shrunk until the certificate passes or max_probes.
/// When nothing passes the smallest probed eta is returned with pass = false.
/// Candidates that leave the mirror domain count as failed probes.
StepSelection select_stepsize(const StepConfig& config, const MirrorMap& map,
                              const ObjectiveOracle& oracle, const Vector& x, double f_x,
                              const Vector& omega, double eta_prev);

struct TrajectoryRow {
  std::size_t iter = 1;
  Vector x;
  double f = 0.0;
  // step taken from x_iter; empty on the last row
  std::optional<double> eta;
  std::optional<double> cert_lhs;
  std::optional<double> cert_rhs;
  std::optional<bool> cert_pass;
  std::optional<Vector> omega;
  std::optional<FieldDiagnostics> diag;
  int probes = 0;
  std::uint64_t evals_cum = 0;
};

enum class RunStatus { Completed, GapReached, StoppedUncertified, DomainEscape };

const char* to_string(RunStatus status);

struct TrajectoryRecord {
  std::vector<TrajectoryRow> rows;
  RunStatus status = RunStatus::Completed;
  std::string message;

  std::size_t steps() const { return rows.empty() ? 0 : rows.size() - 1; }
  bool all_certified() const;
  /// Number of leading certified steps.
  std::size_t certified_prefix() const;
};

struct RunOptions {
  std::size_t t_max = 100;
  /// Stop once f(x_j) - f(x_*) <= gap_tol (requires a known minimizer).
  std::optional<double> gap_tol;
  bool stop_on_uncertified = false;
};

/// Iterates x_{j+1} = F_{eta_j Omega}(x_j) for up to t_max points with per-step certificates.
/// Identical inputs produce identical records. A domain escape ends the run with a partial
/// record and status DomainEscape.
TrajectoryRecord run(const MirrorMap& map, const ObjectiveOracle& oracle, const VectorField& field,
                     const StepConfig& config, const Vector& x1, const RunOptions& options);

struct CertificateReport {
  bool all_certified = false;
  std::size_t total_steps = 0;
  /// Steps 1..certified_steps passed; the bound concerns x_{certified_steps + 1}.
  std::size_t certified_steps = 0;
  double sum_eta = 0.0;
  double bregman_to_start = 0.0;
  double rate_term = 0.0;
  double floor_term = 0.0;
  double bound = 0.0;
  std::optional<double> f_star;
  /// f at the end of the certified window minus f(x_*).
  std::optional<double> achieved_gap;
  /// f at the last recorded iterate minus f(x_*).
  std::optional<double> final_gap;
};

/// max(D_Phi(x_* || x_1) / sum eta_j, floor_term) over the initial certified prefix.
/// Throws std::domain_error when that prefix contains no step (sum eta = 0).
CertificateReport last_iterate_bound(const TrajectoryRecord& record, const MirrorMap& map,
                                     const Vector& x_star, double floor_term,
                                     std::optional<double> f_star = std::nullopt);

}  // namespace zomd
