#include "zomd/certify.hpp"

#include <cmath>
#include <limits>

#include "zomd/fields.hpp"

namespace zomd::certify {

double delta_ratio(const Vector& omega, const Vector& grad, const NormPair& norms) {
  require_same_dim(omega, grad, "delta_ratio");
  const Vector diff = omega - grad;
  const double num = norms.dual(diff);
  if (num == 0.0) return 0.0;
  const double den = norms.dual(omega);
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

void FeasibilityInputs::validate() const {
  if (!(sigma > 0.0 && sigma <= beta)) throw std::invalid_argument("feasibility: need 0 < sigma <= beta");
  if (!(L > 0.0)) throw std::invalid_argument("feasibility: L must be > 0");
  if (!(delta >= 0.0)) throw std::invalid_argument("feasibility: delta must be >= 0");
}

double eta_feasible_max(const FeasibilityInputs& in) {
  in.validate();
  if (in.delta >= in.sigma / (2.0 * in.beta)) return 0.0;
  return (in.sigma * in.sigma / (in.L * in.beta)) * (1.0 - (2.0 * in.beta / in.sigma) * in.delta);
}

double kantorovich_cos(double mu, double L) {
  if (!(mu > 0.0 && mu <= L)) throw std::invalid_argument("kantorovich_cos: need 0 < mu <= L");
  return 2.0 * std::sqrt(mu * L) / (mu + L);
}

TightnessInstance tightness_instance(double mu, double L) {
  if (!(mu > 0.0 && mu <= L)) throw std::invalid_argument("tightness_instance: need 0 < mu <= L");
  TightnessInstance t;
  t.A = Eigen::Vector2d(L, mu).asDiagonal();
  t.v = Eigen::Vector2d(std::sqrt(mu), std::sqrt(L));
  const Vector av = t.A * t.v;
  t.cos_theta = av.dot(t.v) / (av.norm() * t.v.norm());
  return t;
}

double floor_radius(double mu, double L, double epsilon, Index d) {
  if (!(mu > 0.0 && mu <= L)) throw std::invalid_argument("floor_radius: need 0 < mu <= L");
  if (!(epsilon > 0.0)) throw std::invalid_argument("floor_radius: epsilon must be > 0");
  if (d < 1) throw std::invalid_argument("floor_radius: d must be >= 1");
  return (mu + L) / (2.0 * mu) * epsilon * std::sqrt(static_cast<double>(d));
}

namespace {

double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double result = 0.0;
  double f = 1.0 / static_cast<double>(base);
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= static_cast<double>(base);
  }
  return result;
}

constexpr std::uint64_t kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                                     59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113};

}  // namespace

std::vector<Vector> sphere_mesh(Index d, std::size_t count) {
  std::vector<Vector> dirs;
  for (Index i = 0; i < d; ++i) {
    dirs.push_back(Vector::Unit(d, i));
    dirs.push_back(-Vector::Unit(d, i));
  }
  if (d == 1) return dirs;
  if (d == 2) {
    for (std::size_t k = 0; k < count; ++k) {
      const double phi = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(count);
      dirs.push_back(Eigen::Vector2d(std::cos(phi), std::sin(phi)));
    }
  } else if (d == 3) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < count; ++k) {
      const double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(count);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * static_cast<double>(k);
      dirs.push_back(Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), z));
    }
  } else {
    // Halton points pushed through Box-Muller, normalized
    const std::size_t n_primes = sizeof kPrimes / sizeof kPrimes[0];
    for (std::size_t k = 1; k <= count; ++k) {
      Vector g(d);
      for (Index i = 0; i < d; i += 2) {
        const std::uint64_t b1 = kPrimes[static_cast<std::size_t>(i) % n_primes];
        const std::uint64_t b2 = kPrimes[static_cast<std::size_t>(i + 1) % n_primes];
        const double u1 = std::max(radical_inverse(k, b1), 1e-12);
        const double u2 = radical_inverse(k, b2);
        const double rad = std::sqrt(-2.0 * std::log(u1));
        g(i) = rad * std::cos(2.0 * M_PI * u2);
        if (i + 1 < d) g(i + 1) = rad * std::sin(2.0 * M_PI * u2);
      }
      const double n = g.norm();
      if (n > 0.0) dirs.push_back(g / n);
    }
  }
  return dirs;
}

FloorEstimate floor_value(const ObjectiveOracle& oracle, double radius, std::size_t mesh,
                          const std::vector<Vector>& extra_directions) {
  const auto& x_star = oracle.known_minimizer();
  if (!x_star) throw std::invalid_argument("floor_value: oracle has no known minimizer");
  if (!(radius >= 0.0)) throw std::invalid_argument("floor_value: radius must be >= 0");
  const double f_star = *oracle.optimal_value();

  FloorEstimate est;
  est.radius = radius;
  if (oracle.L_smooth()) est.analytic_bound = 0.5 * *oracle.L_smooth() * radius * radius;
  est.sample_count = 1;  // the center contributes 0
  if (radius == 0.0) return est;

  std::vector<Vector> dirs = sphere_mesh(oracle.dim(), mesh);
  for (const Vector& e : extra_directions) {
    require_same_dim(e, *x_star, "floor_value");
    const double n = e.norm();
    if (n > 0.0) {
      dirs.push_back(e / n);
      dirs.push_back(-e / n);
    }
  }
  for (const Vector& u : dirs) {
    for (double scale : {1.0, 0.5}) {
      const Vector x = *x_star + (scale * radius) * u;
      if (!oracle.in_domain(x)) continue;
      est.floor_value = std::max(est.floor_value, oracle.evaluate_uncounted(x) - f_star);
      ++est.sample_count;
    }
  }
  return est;
}

FdErrorCheck fd_error_check(const ObjectiveOracle& oracle, const Vector& x, double epsilon) {
  if (!oracle.L_smooth()) throw std::invalid_argument("fd_error_check: oracle declares no L");
  const CentralDifferences cd = central_differences(oracle, x, epsilon);
  FdErrorCheck out;
  out.err = (cd.m - oracle.gradient(x)).norm();
  out.bound = *oracle.L_smooth() * epsilon * std::sqrt(static_cast<double>(x.size())) / 2.0;
  out.ok = out.err <= out.bound * (1.0 + 1e-9);
  return out;
}

DistanceThresholdCheck distance_threshold_check(const ObjectiveOracle& oracle, const Vector& x,
                                                double epsilon) {
  if (!oracle.mu() || !oracle.L_smooth() || !oracle.known_minimizer())
    throw std::invalid_argument("distance_threshold_check: needs mu, L and a known minimizer");
  const double mu = *oracle.mu(), L = *oracle.L_smooth();
  DistanceThresholdCheck out;
  out.distance = (x - *oracle.known_minimizer()).norm();
  out.threshold = floor_radius(mu, L, epsilon, x.size());
  const CentralDifferences cd = central_differences(oracle, x, epsilon);
  out.M = cd.m.norm();
  out.R = cd.r.norm();
  out.outside = out.distance > out.threshold;
  out.ok = !out.outside || out.M > (mu / L) * out.R;
  return out;
}

DownwardClosedScan downward_closed_scan(const ObjectiveOracle& oracle, const Vector& x,
                                        const Vector& s, const std::vector<double>& eta_grid) {
  require_same_dim(x, s, "downward_closed_scan");
  for (std::size_t k = 1; k < eta_grid.size(); ++k) {
    if (eta_grid[k] < eta_grid[k - 1])
      throw std::invalid_argument("downward_closed_scan: grid must be ascending");
  }
  const double f_x = oracle.evaluate(x);
  const double s_sq = s.squaredNorm();
  const double slack = 1e-12 * std::max(1.0, std::abs(f_x));
  DownwardClosedScan out;
  bool seen_infeasible = false;
  for (double eta : eta_grid) {
    double h = 0.0;
    if (eta != 0.0) {
      const Vector y = x - eta * s;
      h = oracle.in_domain(y) ? oracle.evaluate(y) - f_x + 0.5 * eta * s_sq
                              : std::numeric_limits<double>::infinity();
    }
    const bool ok = h <= slack;
    if (ok && seen_infeasible) out.is_interval = false;
    if (!ok) seen_infeasible = true;
    out.h.push_back(h);
    out.feasible.push_back(ok);
  }
  return out;
}

double hessian_norm_estimate(const ObjectiveOracle& oracle, const Vector& x, std::uint64_t seed,
                             int iterations, double h) {
  Rng rng(seed);
  Vector v = rng.unit_vector(x.size());
  double lambda = 0.0;
  for (int k = 0; k < iterations; ++k) {
    const Vector hv = (oracle.gradient(x + h * v) - oracle.gradient(x - h * v)) / (2.0 * h);
    lambda = v.dot(hv);
    const double n = hv.norm();
    if (n == 0.0) break;
    v = hv / n;
  }
  return lambda;
}

}  // namespace zomd::certify
