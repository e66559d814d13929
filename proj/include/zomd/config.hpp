#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zomd/descent.hpp"
#include "zomd/problems.hpp"

namespace zomd {

/// Parse or validation failure. line is 0 when the problem is not tied to a single line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, std::string field, const std::string& message);

  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

enum class FieldKind { AnalyticGrad, FdCoordinate, FdDirectional, FdStencil };

const char* to_string(FieldKind kind);

enum class MirrorKind { Euclidean, Entropy };

const char* to_string(MirrorKind kind);

struct RunConfig {
  ProblemSpec problem;
  MirrorKind mirror = MirrorKind::Euclidean;
  FieldKind field = FieldKind::FdCoordinate;
  /// fd-directional: directions per iteration (0 = all d)
  Index block_size = 0;
  double epsilon = 1e-3;
  /// nullopt selects c = 2 sqrt(mu L) / (mu + L)
  std::optional<double> c;
  bool reuse_center = true;
  StepConfig step;
  std::size_t t_max = 100;
  std::optional<double> gap_tol;
  bool stop_on_uncertified = false;
  std::optional<Vector> x1;
  std::size_t floor_mesh = 256;
  std::string output_dir = "out";
  std::vector<double> sweep_epsilons;
  std::vector<StepRule> sweep_rules;

  /// Cross-field invariants; throws ConfigError with line 0.
  void validate() const;
};

/// Flat `key = value` text, one entry per line, `#` starts a comment.
///
///   problem = quadratic-spectrum | log-sum-exp | simplex-quadratic
///   dim, mu, L, seed, tau, terms, declared_L
///   mirror = euclidean | entropy
///   field = analytic-grad | fd-coordinate | fd-directional | fd-stencil
///   block_size, epsilon, reuse_center = true | false
///   c_policy = from-mu-L | explicit, c = value (implies explicit)
///   step_rule = fixed | geometric-grid | backtracking
///   eta0, grid_factor, grid_width, shrink, max_probes
///   t_max, stop = iters | gap_tol, gap_tol, on_uncertified = continue | stop
///   x1 = comma separated coordinates, floor_mesh, output_dir
///   sweep_epsilons = comma list, sweep_rules = comma list
RunConfig parse_config(const std::string& text);

/// Reads and parses a file; an unreadable file is reported as a ConfigError on line 0.
RunConfig load_config(const std::string& path);

}  // namespace zomd
