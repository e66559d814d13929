#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "zomd/oracle.hpp"
#include "zomd/types.hpp"

namespace zomd {

/// Coordinate central differences at x.
///   m_i = (f(x + eps e_i) - f(x - eps e_i)) / (2 eps)
///   r_i = (f(x + eps e_i) + f(x - eps e_i) - 2 f(x)) / (2 eps)
struct CentralDifferences {
  Vector m;
  Vector r;
  double f_center = 0.0;
};

/// Uses 2d evaluations when f_center is supplied, 2d + 1 otherwise.
CentralDifferences central_differences(const ObjectiveOracle& oracle, const Vector& x,
                                       double epsilon,
                                       std::optional<double> f_center = std::nullopt);

/// Robust dominance scaling 1 + R(1+s)/(M(rho-s)) with rho = sqrt(1 - R^2/M^2).
/// Throws InfeasibleError when M <= R or rho <= s (x belongs to the floor region).
double compute_alpha(double M, double R, double c);

/// x in V_{eps,c}  <=>  M <= ((1 - s)/(1 + s)) R,  s = sqrt(1 - c^2).
bool v_membership(double M, double R, double c);

/// c = 2 sqrt(mu L) / (mu + L).
double star_c_from_mu_L(double mu, double L);

struct FieldDiagnostics {
  Vector m;
  Vector r;
  double M = 0.0;
  double R = 0.0;
  double alpha = 1.0;
  bool in_V = false;
  bool feasible = true;
};

struct FiniteDiffField {
  const ObjectiveOracle* oracle = nullptr;
  double epsilon = 1e-3;
  double c = 1.0;
  bool reuse_center = true;
};

struct FieldEvaluation {
  Vector omega;
  FieldDiagnostics diag;
  double f_center = 0.0;
};

/// Omega_{eps,c}(x) = alpha m(x). When alpha is infeasible the field falls back to m(x)
/// with diag.feasible = false. The supplied center value is only used when reuse_center is set.
FieldEvaluation omega_fd(const FiniteDiffField& field, const Vector& x,
                         std::optional<double> f_center = std::nullopt);

/// Omega(x) = sum_k ((f(x + eps u_k) - f(x - eps u_k)) / (2 eps)) u_k over the columns of
/// `directions`, which must be orthonormal to 1e-10.
Vector directional_field(const ObjectiveOracle& oracle, const Vector& x, const Matrix& directions,
                         double epsilon);

struct StencilPoint {
  double weight = 0.0;
  Vector offset;
};

/// Omega(x) = (1/eps) sum_j a_j f(x + eps s_j) s_j.
Vector stencil_field(const ObjectiveOracle& oracle, const Vector& x,
                     const std::vector<StencilPoint>& stencil, double epsilon);

/// Symmetric coordinate stencil {(1/2, e_i), (1/2, -e_i)}, which reproduces central differences.
std::vector<StencilPoint> coordinate_stencil(Index dim);

/// Vector field sample handed to the descent loop.
struct FieldSample {
  Vector omega;
  std::optional<FieldDiagnostics> diag;
};

/// x, j (1-based iteration), f(x) -> Omega(x).
using VectorField = std::function<FieldSample(const Vector&, std::size_t, double)>;

VectorField analytic_gradient_field(const ObjectiveOracle& oracle);
VectorField fd_coordinate_field(const FiniteDiffField& field);
/// With block_size < columns, iteration j uses block ((j - 1) mod n_blocks).
VectorField fd_directional_field(const ObjectiveOracle& oracle, Matrix directions, double epsilon,
                                 Index block_size = 0);
VectorField fd_stencil_field(const ObjectiveOracle& oracle, std::vector<StencilPoint> stencil,
                             double epsilon);

}  // namespace zomd
