#include "zomd/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zomd/conic.hpp"

namespace zomd {

CentralDifferences central_differences(const ObjectiveOracle& oracle, const Vector& x,
                                       double epsilon, std::optional<double> f_center) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("central_differences: epsilon must be > 0");
  const Index d = x.size();
  CentralDifferences out;
  out.f_center = f_center ? *f_center : oracle.evaluate(x);
  out.m.resize(d);
  out.r.resize(d);
  Vector probe = x;
  for (Index i = 0; i < d; ++i) {
    probe(i) = x(i) + epsilon;
    const double plus = oracle.evaluate(probe);
    probe(i) = x(i) - epsilon;
    const double minus = oracle.evaluate(probe);
    probe(i) = x(i);
    out.m(i) = (plus - minus) / (2.0 * epsilon);
    out.r(i) = (plus + minus - 2.0 * out.f_center) / (2.0 * epsilon);
  }
  return out;
}

double compute_alpha(double M, double R, double c) {
  if (M < 0.0 || R < 0.0) throw std::invalid_argument("compute_alpha: M and R must be >= 0");
  return conic::robust_alpha(M, R, c);
}

bool v_membership(double M, double R, double c) {
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("v_membership: c must lie in (0, 1]");
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  return M <= (1.0 - s) / (1.0 + s) * R;
}

double star_c_from_mu_L(double mu, double L) {
  if (!(mu > 0.0) || !(mu <= L)) throw std::invalid_argument("star_c_from_mu_L: need 0 < mu <= L");
  return 2.0 * std::sqrt(mu * L) / (mu + L);
}

FieldEvaluation omega_fd(const FiniteDiffField& field, const Vector& x,
                         std::optional<double> f_center) {
  if (field.oracle == nullptr) throw std::invalid_argument("omega_fd: field has no oracle");
  if (!(field.c > 0.0 && field.c <= 1.0)) throw std::invalid_argument("omega_fd: c must lie in (0, 1]");
  CentralDifferences cd = central_differences(*field.oracle, x, field.epsilon,
                                              field.reuse_center ? f_center : std::nullopt);
  FieldEvaluation out;
  out.f_center = cd.f_center;
  FieldDiagnostics& diag = out.diag;
  diag.M = cd.m.norm();
  diag.R = cd.r.norm();
  diag.in_V = v_membership(diag.M, diag.R, field.c);
  try {
    diag.alpha = compute_alpha(diag.M, diag.R, field.c);
    diag.feasible = true;
  } catch (const InfeasibleError&) {
    diag.alpha = 1.0;
    diag.feasible = false;
  }
  out.omega = diag.alpha * cd.m;
  diag.m = std::move(cd.m);
  diag.r = std::move(cd.r);
  return out;
}

Vector directional_field(const ObjectiveOracle& oracle, const Vector& x, const Matrix& directions,
                         double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("directional_field: epsilon must be > 0");
  if (directions.rows() != x.size())
    throw std::invalid_argument("directional_field: direction dimension mismatch");
  const Index k = directions.cols();
  const Matrix gram = directions.transpose() * directions;
  if ((gram - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("directional_field: directions are not orthonormal");
  Vector omega = Vector::Zero(x.size());
  for (Index j = 0; j < k; ++j) {
    const auto u = directions.col(j);
    const double plus = oracle.evaluate(x + epsilon * u);
    const double minus = oracle.evaluate(x - epsilon * u);
    omega += ((plus - minus) / (2.0 * epsilon)) * u;
  }
  return omega;
}

Vector stencil_field(const ObjectiveOracle& oracle, const Vector& x,
                     const std::vector<StencilPoint>& stencil, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("stencil_field: epsilon must be > 0");
  Vector omega = Vector::Zero(x.size());
  for (const StencilPoint& p : stencil) {
    require_same_dim(p.offset, x, "stencil_field");
    omega += (p.weight * oracle.evaluate(x + epsilon * p.offset)) * p.offset;
  }
  return omega / epsilon;
}

std::vector<StencilPoint> coordinate_stencil(Index dim) {
  std::vector<StencilPoint> stencil;
  stencil.reserve(static_cast<std::size_t>(2 * dim));
  for (Index i = 0; i < dim; ++i) {
    stencil.push_back({0.5, Vector::Unit(dim, i)});
    stencil.push_back({0.5, -Vector::Unit(dim, i)});
  }
  return stencil;
}

VectorField analytic_gradient_field(const ObjectiveOracle& oracle) {
  if (!oracle.has_gradient())
    throw std::invalid_argument("analytic_gradient_field: oracle has no gradient");
  return [&oracle](const Vector& x, std::size_t, double) {
    return FieldSample{oracle.gradient(x), std::nullopt};
  };
}

VectorField fd_coordinate_field(const FiniteDiffField& field) {
  if (field.oracle == nullptr) throw std::invalid_argument("fd_coordinate_field: no oracle");
  return [field](const Vector& x, std::size_t, double f_x) {
    FieldEvaluation e = omega_fd(field, x, f_x);
    return FieldSample{std::move(e.omega), std::move(e.diag)};
  };
}

VectorField fd_directional_field(const ObjectiveOracle& oracle, Matrix directions, double epsilon,
                                 Index block_size) {
  const Index total = directions.cols();
  if (total < 1) throw std::invalid_argument("fd_directional_field: empty direction set");
  if (block_size <= 0 || block_size > total) block_size = total;
  const Index n_blocks = (total + block_size - 1) / block_size;
  return [&oracle, directions = std::move(directions), epsilon, block_size, n_blocks, total](
             const Vector& x, std::size_t j, double) {
    const Index b = static_cast<Index>((j == 0 ? 0 : j - 1) % static_cast<std::size_t>(n_blocks));
    const Index first = b * block_size;
    const Index width = std::min(block_size, total - first);
    return FieldSample{directional_field(oracle, x, directions.middleCols(first, width), epsilon),
                       std::nullopt};
  };
}

VectorField fd_stencil_field(const ObjectiveOracle& oracle, std::vector<StencilPoint> stencil,
                             double epsilon) {
  return [&oracle, stencil = std::move(stencil), epsilon](const Vector& x, std::size_t, double) {
    return FieldSample{stencil_field(oracle, x, stencil, epsilon), std::nullopt};
  };
}

}  // namespace zomd
