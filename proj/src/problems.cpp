#include "zomd/problems.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace zomd {

const char* to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::QuadraticSpectrum:
      return "quadratic-spectrum";
    case ProblemKind::LogSumExp:
      return "log-sum-exp";
    case ProblemKind::SimplexQuadratic:
      return "simplex-quadratic";
  }
  return "unknown";
}

ProblemKind parse_problem_kind(const std::string& text) {
  if (text == "quadratic-spectrum" || text == "quadratic") return ProblemKind::QuadraticSpectrum;
  if (text == "log-sum-exp") return ProblemKind::LogSumExp;
  if (text == "simplex-quadratic") return ProblemKind::SimplexQuadratic;
  throw std::invalid_argument("unknown problem '" + text +
                              "' (expected quadratic-spectrum | log-sum-exp | simplex-quadratic)");
}

void ProblemSpec::validate() const {
  if (dim < 1) throw std::invalid_argument("problem: dim must be >= 1");
  if (!(mu > 0.0 && mu <= L)) throw std::invalid_argument("problem: need 0 < mu <= L");
  if (!std::isfinite(L)) throw std::invalid_argument("problem: L must be finite");
  if (kind != ProblemKind::LogSumExp && dim == 1 && mu != L)
    throw std::invalid_argument("problem: a 1-d quadratic cannot attain both mu and L, set mu = L");
  if (kind == ProblemKind::LogSumExp) {
    if (!(tau > 0.0)) throw std::invalid_argument("problem: tau must be > 0");
    if (terms < 1) throw std::invalid_argument("problem: terms must be >= 1");
  }
  if (declared_L && !(*declared_L >= mu))
    throw std::invalid_argument("problem: declared_L must be >= mu");
}

Matrix spectrum_matrix(Index dim, double mu, double L, std::uint64_t seed, Matrix* eigenvectors) {
  Vector lambda(dim);
  if (dim == 1) {
    lambda(0) = L;
  } else {
    const double ratio = std::log(L / mu);
    for (Index k = 0; k < dim; ++k) {
      lambda(k) = mu * std::exp(ratio * static_cast<double>(k) / static_cast<double>(dim - 1));
    }
    lambda(0) = mu;
    lambda(dim - 1) = L;
  }
  const Matrix Q = random_orthogonal(dim, seed);
  Matrix A = Q * lambda.asDiagonal() * Q.transpose();
  A = 0.5 * (A + A.transpose()).eval();
  if (eigenvectors) *eigenvectors = Q;
  return A;
}

namespace {

Problem make_quadratic(const ProblemSpec& spec) {
  Matrix Q;
  auto A = std::make_shared<const Matrix>(spectrum_matrix(spec.dim, spec.mu, spec.L, spec.seed, &Q));
  ObjectiveOracle oracle(
      spec.dim, [A](const Vector& x) { return 0.5 * x.dot(*A * x); }, "quadratic-spectrum");
  oracle.with_gradient([A](const Vector& x) -> Vector { return *A * x; })
      .with_minimizer(Vector::Zero(spec.dim))
      .with_moduli(spec.mu, spec.declared_L.value_or(spec.L));
  return Problem{spec, std::move(oracle), *A, Q, std::nullopt};
}

Problem make_simplex_quadratic(const ProblemSpec& spec) {
  Matrix Q;
  auto A = std::make_shared<const Matrix>(
      spectrum_matrix(spec.dim, spec.mu, spec.L, spec.seed, &Q));
  // interior point of the simplex, kept away from the faces
  Rng rng(spec.seed ^ 0x5A17C0DEULL);
  Vector p(spec.dim);
  for (Index i = 0; i < spec.dim; ++i) p(i) = -std::log(1.0 - rng.uniform());
  p /= p.sum();
  p = 0.5 * p + Vector::Constant(spec.dim, 0.5 / static_cast<double>(spec.dim));
  auto center = std::make_shared<const Vector>(p);

  ObjectiveOracle oracle(
      spec.dim,
      [A, center](const Vector& x) {
        const Vector d = x - *center;
        return 0.5 * d.dot(*A * d);
      },
      "simplex-quadratic");
  oracle.with_gradient([A, center](const Vector& x) -> Vector { return *A * (x - *center); })
      .with_minimizer(p)
      .with_moduli(spec.mu, spec.declared_L.value_or(spec.L))
      .with_domain([](const Vector& x) { return (x.array() > 0.0).all(); });
  return Problem{spec, std::move(oracle), *A, Q, std::nullopt};
}

struct LseData {
  Matrix A;  // terms x dim
  Vector b;
  double tau;
  double mu;

  double value(const Vector& x) const {
    const Vector z = (A * x - b) / tau;
    const double zmax = z.maxCoeff();
    return tau * (zmax + std::log((z.array() - zmax).exp().sum())) + 0.5 * mu * x.squaredNorm();
  }

  Vector gradient(const Vector& x) const {
    const Vector z = (A * x - b) / tau;
    Vector w = (z.array() - z.maxCoeff()).exp().matrix();
    w /= w.sum();
    return A.transpose() * w + mu * x;
  }
};

Problem make_log_sum_exp(const ProblemSpec& spec) {
  Rng rng(spec.seed);
  auto data = std::make_shared<LseData>();
  data->tau = spec.tau;
  data->mu = spec.mu;
  data->A.resize(spec.terms, spec.dim);
  data->b.resize(spec.terms);
  for (Index k = 0; k < spec.terms; ++k) {
    for (Index i = 0; i < spec.dim; ++i) data->A(k, i) = rng.normal();
    data->b(k) = rng.normal();
  }
  // curvature of the lse part is at most max_k ||a_k||^2 / tau
  const double max_row_sq = data->A.rowwise().squaredNorm().maxCoeff();
  const double target = (spec.L - spec.mu) * spec.tau;
  data->A *= max_row_sq > 0.0 ? std::sqrt(target / max_row_sq) : 0.0;

  // reference minimizer
  constexpr double kTol = 1e-12;
  constexpr std::size_t kMaxIter = 2'000'000;
  ReferenceSolve ref;
  ref.tolerance = kTol;
  Vector x = Vector::Zero(spec.dim);
  Vector g = data->gradient(x);
  while (g.norm() > kTol && ref.iterations < kMaxIter) {
    x -= g / spec.L;
    g = data->gradient(x);
    ++ref.iterations;
  }
  ref.grad_norm = g.norm();

  std::shared_ptr<const LseData> cdata = data;
  ObjectiveOracle oracle(
      spec.dim, [cdata](const Vector& v) { return cdata->value(v); }, "log-sum-exp");
  oracle.with_gradient([cdata](const Vector& v) { return cdata->gradient(v); })
      .with_minimizer(x)
      .with_moduli(spec.mu, spec.declared_L.value_or(spec.L));
  return Problem{spec, std::move(oracle), std::nullopt, std::nullopt, ref};
}

}  // namespace

Problem make_problem(const ProblemSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case ProblemKind::QuadraticSpectrum:
      return make_quadratic(spec);
    case ProblemKind::LogSumExp:
      return make_log_sum_exp(spec);
    case ProblemKind::SimplexQuadratic:
      return make_simplex_quadratic(spec);
  }
  throw std::logic_error("make_problem: unhandled kind");
}

Vector default_start(const Problem& problem) {
  const Index d = problem.spec.dim;
  if (problem.spec.kind == ProblemKind::SimplexQuadratic) {
    return Vector::Constant(d, 1.0 / static_cast<double>(d));
  }
  Rng rng(problem.spec.seed ^ 0x9D2C5680ULL);
  return *problem.oracle.known_minimizer() + rng.normal_vector(d);
}

}  // namespace zomd
