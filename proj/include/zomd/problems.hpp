#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "zomd/oracle.hpp"
#include "zomd/types.hpp"

namespace zomd {

enum class ProblemKind { QuadraticSpectrum, LogSumExp, SimplexQuadratic };

const char* to_string(ProblemKind kind);
ProblemKind parse_problem_kind(const std::string& text);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::QuadraticSpectrum;
  Index dim = 2;
  double mu = 1.0;
  double L = 4.0;
  std::uint64_t seed = 0;
  /// log-sum-exp temperature and number of terms
  double tau = 1.0;
  Index terms = 5;
  /// Overrides the smoothness modulus attached to the oracle (the instance itself is unchanged).
  std::optional<double> declared_L;

  /// Throws std::invalid_argument naming the violated condition.
  void validate() const;
};

/// Result of the analytic-gradient reference descent used to locate x_* when it has no
/// closed form.
struct ReferenceSolve {
  std::size_t iterations = 0;
  double grad_norm = 0.0;
  double tolerance = 0.0;
};

struct Problem {
  ProblemSpec spec;
  ObjectiveOracle oracle;
  /// Hessian and its eigenvectors (columns) for the quadratic kinds.
  std::optional<Matrix> hessian;
  std::optional<Matrix> eigenvectors;
  std::optional<ReferenceSolve> reference;
};

/// Deterministic instance synthesis from the seed.
///  - quadratic-spectrum: f = x^T A x / 2, A = Q diag(lambda) Q^T, lambda log-spaced in [mu, L]
///    with both ends attained, x_* = 0.
///  - log-sum-exp: f = tau lse((Ax - b)/tau) + mu ||x||^2 / 2, rows scaled so that
///    mu + max_k ||a_k||^2 / tau = L; x_* from a gradient descent run to ||grad|| <= 1e-12.
///  - simplex-quadratic: f = (x - p)^T A (x - p) / 2 on the positive orthant with p in the
///    interior of the probability simplex, so x_* = p.
Problem make_problem(const ProblemSpec& spec);

/// Seeded starting point: the simplex barycenter for simplex-quadratic, otherwise
/// x_* + g with g standard normal.
Vector default_start(const Problem& problem);

/// Random symmetric matrix with eigenvalues log-spaced in [mu, L], both ends attained.
Matrix spectrum_matrix(Index dim, double mu, double L, std::uint64_t seed,
                       Matrix* eigenvectors = nullptr);

}  // namespace zomd
