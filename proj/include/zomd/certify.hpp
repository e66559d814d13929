#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "zomd/geometry.hpp"
#include "zomd/oracle.hpp"
#include "zomd/types.hpp"

namespace zomd::certify {

/// ||Omega - grad f||_* / ||Omega||_*. Zero when Omega == grad f; +infinity when ||Omega||_* = 0
/// but Omega != grad f.
double delta_ratio(const Vector& omega, const Vector& grad, const NormPair& norms);

struct FeasibilityInputs {
  double sigma = 1.0;
  double beta = 1.0;
  double L = 1.0;
  double delta = 0.0;

  void validate() const;
};

/// (sigma^2 / (L beta)) (1 - (2 beta / sigma) delta), clamped at 0 once delta >= sigma / (2 beta).
double eta_feasible_max(const FeasibilityInputs& inputs);

/// Kantorovich angle constant 2 sqrt(mu L) / (mu + L).
double kantorovich_cos(double mu, double L);

struct TightnessInstance {
  Matrix A;  // diag(L, mu)
  Vector v;  // (sqrt(mu), sqrt(L))
  double cos_theta = 0.0;
};

/// Quadratic on which the Kantorovich constant is attained.
TightnessInstance tightness_instance(double mu, double L);

/// Radius (mu + L)/(2 mu) eps sqrt(d) of the ball containing the exceptional set.
double floor_radius(double mu, double L, double epsilon, Index d);

struct FloorEstimate {
  double radius = 0.0;
  /// max sampled f - f(x_*) over the ball
  double floor_value = 0.0;
  /// (L/2) radius^2 when the oracle declares L
  std::optional<double> analytic_bound;
  std::size_t sample_count = 0;
};

/// Deterministic unit directions: +-e_i, plus an even circle mesh (d = 2), a Fibonacci sphere
/// (d = 3) or Halton-based directions (d > 3).
std::vector<Vector> sphere_mesh(Index d, std::size_t count);

/// Max of f - f(x_*) over the center, the boundary sphere mesh and a half-radius shell.
/// `extra_directions` (e.g. known principal axes) are added to the mesh.
FloorEstimate floor_value(const ObjectiveOracle& oracle, double radius, std::size_t mesh,
                          const std::vector<Vector>& extra_directions = {});

struct FdErrorCheck {
  double err = 0.0;
  double bound = 0.0;
  bool ok = true;
};

/// ||m(x) - grad f(x)||_2 against L eps sqrt(d) / 2. Uses the declared L of the oracle.
FdErrorCheck fd_error_check(const ObjectiveOracle& oracle, const Vector& x, double epsilon);

struct DistanceThresholdCheck {
  double distance = 0.0;
  double threshold = 0.0;
  double M = 0.0;
  double R = 0.0;
  bool outside = false;
  /// outside  =>  M > (mu/L) R
  bool ok = true;
};

DistanceThresholdCheck distance_threshold_check(const ObjectiveOracle& oracle, const Vector& x,
                                                double epsilon);

struct DownwardClosedScan {
  std::vector<bool> feasible;
  std::vector<double> h;
  bool is_interval = true;
};

/// h(eta) = f(x - eta s) - f(x) + eta ||s||^2 / 2 over an ascending grid, feasible iff
/// h <= 1e-12 max(1, |f(x)|). Points outside the oracle domain are infeasible.
DownwardClosedScan downward_closed_scan(const ObjectiveOracle& oracle, const Vector& x,
                                        const Vector& s, const std::vector<double>& eta_grid);

/// Largest eigenvalue of the Hessian estimated by power iteration on central differences of the
/// analytic gradient at x.
double hessian_norm_estimate(const ObjectiveOracle& oracle, const Vector& x, std::uint64_t seed,
                             int iterations = 60, double h = 1e-4);

}  // namespace zomd::certify
