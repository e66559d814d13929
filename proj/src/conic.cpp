#include "zomd/conic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace zomd::conic {

namespace {

// Deterministic unit vector orthogonal to the unit vector u (d >= 2).
Vector orthogonal_unit(const Vector& u) {
  Index pick = 0;
  u.cwiseAbs().minCoeff(&pick);
  Vector e = Vector::Unit(u.size(), pick);
  e -= e.dot(u) * u;
  return e / e.norm();
}

// Random unit vector orthogonal to the unit vector u (d >= 2).
Vector random_orthogonal_unit(const Vector& u, Rng& rng) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    Vector e = rng.normal_vector(u.size());
    e -= e.dot(u) * u;
    const double n = e.norm();
    if (n > 1e-8) return e / n;
  }
  return orthogonal_unit(u);
}

// Smallest alpha with <u, alpha m - x> >= s ||alpha m - x||, u = x/||x||.
double required_alpha(const Vector& m, const Vector& x, double s) {
  const double q = x.norm();
  const double mx = m.dot(x);
  const double p = mx / q;
  const double msq = m.squaredNorm();
  const double a = p * p - s * s * msq;
  const double b = p * q - s * s * mx;
  const double c = q * q * (1.0 - s * s);
  if (p <= 0.0 || a <= 0.0) return std::numeric_limits<double>::infinity();
  const double disc = std::max(b * b - a * c, 0.0);
  return std::max((b + std::sqrt(disc)) / a, q / p);
}

}  // namespace

ConeSpec::ConeSpec(Vector axis, double c) : axis_(std::move(axis)), c_(c) {
  const double n = axis_.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("ConeSpec: zero axis");
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("ConeSpec: c must lie in (0, 1]");
  direction_ = axis_ / n;
  s_ = std::sqrt(std::max(0.0, 1.0 - c * c));
}

bool cone_contains(const ConeSpec& cone, const Vector& y) {
  require_same_dim(cone.axis(), y, "cone_contains");
  const double yn = y.norm();
  if (yn == 0.0) return true;
  return cone.direction().dot(y) >= cone.c() * yn - kConeTolerance * yn;
}

bool dual_cone_contains(const ConeSpec& cone, const Vector& w) {
  require_same_dim(cone.axis(), w, "dual_cone_contains");
  const double wn = w.norm();
  return cone.direction().dot(w) >= cone.s() * wn - kConeTolerance * wn;
}

std::pair<double, Vector> worst_cone_direction(const ConeSpec& cone, const Vector& w) {
  require_same_dim(cone.axis(), w, "worst_cone_direction");
  const Vector& u = cone.direction();
  const double a = u.dot(w);
  if (u.size() == 1) return {a, u};
  Vector perp = w - a * u;
  perp -= perp.dot(u) * u;
  double b = perp.norm();
  // a residual at rounding level carries no direction
  if (b <= 1e-14 * w.norm()) b = 0.0;
  const Vector e = b > 0.0 ? Vector(-perp / b) : orthogonal_unit(u);
  // <w, cos(phi) u + sin(phi) e> = a cos(phi) - b sin(phi) = ||w|| cos(phi + psi)
  const double theta = std::acos(std::clamp(cone.c(), -1.0, 1.0));
  const double psi = std::atan2(b, a);
  double phi = theta;
  if (psi <= M_PI && psi + theta >= M_PI) {
    phi = M_PI - psi;
  } else {
    const double at_axis = a;
    const double at_edge = a * std::cos(theta) - b * std::sin(theta);
    phi = at_axis <= at_edge ? 0.0 : theta;
  }
  const Vector y = std::cos(phi) * u + std::sin(phi) * e;
  return {w.dot(y), y};
}

const char* describe(Infeasibility reason) {
  switch (reason) {
    case Infeasibility::None:
      return "feasible";
    case Infeasibility::UncertaintyTooLarge:
      return "uncertainty radius must be smaller than ||m|| (M > R)";
    case Infeasibility::ConeTooWide:
      return "cone too wide: need rho = sqrt(1 - R^2/||m||^2) > s = sqrt(1 - c^2)";
  }
  return "unknown";
}

DominanceProblem DominanceProblem::from_box(const Vector& l, const Vector& h, double c) {
  auto [center, radius] = box_to_ball(l, h);
  return DominanceProblem{std::move(center), radius, c};
}

double DominanceProblem::s() const { return std::sqrt(std::max(0.0, 1.0 - c * c)); }

double DominanceProblem::rho() const {
  const double mn = m.norm();
  if (!(mn > radius)) return 0.0;
  const double ratio = radius / mn;
  return std::sqrt(1.0 - ratio * ratio);
}

Infeasibility DominanceProblem::feasibility() const {
  const double mn = m.norm();
  if (!(mn > radius)) return Infeasibility::UncertaintyTooLarge;
  if (!(rho() - s() >= kDegenerateGap)) return Infeasibility::ConeTooWide;
  return Infeasibility::None;
}

double robust_alpha(double m_norm, double radius, double c) {
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("robust_alpha: c must lie in (0, 1]");
  if (radius < 0.0) throw std::invalid_argument("robust_alpha: negative radius");
  DominanceProblem p{Vector::Constant(1, m_norm), radius, c};
  const Infeasibility why = p.feasibility();
  if (why != Infeasibility::None) throw InfeasibleError(describe(why));
  const double s = p.s();
  return 1.0 + radius * (1.0 + s) / (m_norm * (p.rho() - s));
}

double min_dominance_alpha(const DominanceProblem& problem) {
  return robust_alpha(problem.m.norm(), problem.radius, problem.c);
}

double tight_dominance_alpha(double m_norm, double radius, double c) {
  DominanceProblem p{Vector::Constant(1, m_norm), radius, c};
  const Infeasibility why = p.feasibility();
  if (why != Infeasibility::None) throw InfeasibleError(describe(why));
  if (radius == 0.0) return 1.0;
  const double s = p.s();
  const Vector m = Eigen::Vector2d(m_norm, 0.0);
  auto requirement = [&](double r, double phi) {
    const Vector x = m + r * Vector(Eigen::Vector2d(std::cos(phi), std::sin(phi)));
    return required_alpha(m, x, s);
  };

  // coarse scan, then zoom around the maximizer
  double best = 1.0, best_r = 0.0, best_phi = 0.0;
  const int nr = 64, nphi = 2048;
  for (int i = 0; i <= nr; ++i) {
    const double r = radius * i / nr;
    for (int j = 0; j <= nphi; ++j) {
      const double phi = M_PI * j / nphi;
      const double a = requirement(r, phi);
      if (a > best) {
        best = a;
        best_r = r;
        best_phi = phi;
      }
    }
  }
  double dr = radius / nr, dphi = M_PI / nphi;
  for (int round = 0; round < 40; ++round) {
    const double r0 = best_r, phi0 = best_phi;
    for (int i = -4; i <= 4; ++i) {
      const double r = std::clamp(r0 + dr * i / 4.0, 0.0, radius);
      for (int j = -4; j <= 4; ++j) {
        const double phi = phi0 + dphi * j / 4.0;
        const double a = requirement(r, phi);
        if (a > best) {
          best = a;
          best_r = r;
          best_phi = phi;
        }
      }
    }
    dr *= 0.5;
    dphi *= 0.5;
  }
  return best;
}

DominanceCheck verify_dominance(const DominanceProblem& problem, double alpha,
                                std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("verify_dominance: n_samples must be >= 1");
  if (!(problem.c > 0.0 && problem.c <= 1.0))
    throw std::invalid_argument("verify_dominance: c must lie in (0, 1]");
  const Vector& m = problem.m;
  const Index d = m.size();
  const double mn = m.norm();
  if (!(mn > 0.0)) throw std::invalid_argument("verify_dominance: m must be nonzero");
  const double radius = problem.radius;
  const Vector m_hat = m / mn;
  const Vector target = alpha * m;
  Rng rng(seed);

  DominanceCheck result;
  auto examine = [&](const Vector& x) {
    const double xn = x.norm();
    if (xn < 1e-300) return;  // C(0, c) is undefined; nothing to dominate
    const ConeSpec cone(x, problem.c);
    const Vector w = target - x;
    const double wn = w.norm();
    ++result.points_checked;
    if (wn == 0.0) return;

    auto record = [&](double inner, const Vector& y) {
      const double ratio = inner / (wn * y.norm());
      if (ratio < result.worst_ratio) {
        result.worst_ratio = ratio;
        if (ratio < -kDominanceTolerance) {
          result.holds = false;
          result.witness_x = x;
          result.witness_y = y;
        }
      }
    };

    auto [worst, y_star] = worst_cone_direction(cone, w);
    record(worst, y_star);
    if (d >= 2) {
      // one boundary and one interior sample of the cone
      const Vector e = random_orthogonal_unit(cone.direction(), rng);
      const double theta = std::acos(problem.c);
      const Vector y_edge = std::cos(theta) * cone.direction() + std::sin(theta) * e;
      record(w.dot(y_edge), y_edge);
      const double phi = theta * rng.uniform();
      const Vector y_in = std::cos(phi) * cone.direction() + std::sin(phi) * e;
      record(w.dot(y_in), y_in);
    }
  };

  const std::size_t n_mesh = d >= 2 ? n_samples / 2 : 0;
  const std::size_t n_shell = (n_samples - n_mesh) / 2;
  const std::size_t n_inner = n_samples - n_mesh - n_shell;

  if (d >= 2) {
    // great circle through m: by rotational symmetry about m it represents every plane
    const Vector e = orthogonal_unit(m_hat);
    for (std::size_t k = 0; k < n_mesh; ++k) {
      const double phi = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n_mesh);
      examine(m + radius * (std::cos(phi) * m_hat + std::sin(phi) * e));
    }
  }
  for (std::size_t k = 0; k < n_shell; ++k) examine(m + radius * rng.unit_vector(d));
  for (std::size_t k = 0; k < n_inner; ++k) {
    const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
    examine(m + r * rng.unit_vector(d));
  }
  return result;
}

Witness worst_case_witness(double radius, double s, double rho, double t) {
  if (!(radius > 0.0)) throw std::invalid_argument("worst_case_witness: R must be positive");
  if (!(s >= 0.0 && s < 1.0)) throw std::invalid_argument("worst_case_witness: s must lie in [0, 1)");
  if (!(rho > s && rho < 1.0))
    throw std::invalid_argument("worst_case_witness: need s < rho < 1");
  const double threshold = radius * (1.0 + s) / (rho - s);
  if (!(t > 0.0 && t < threshold)) {
    throw std::invalid_argument("worst_case_witness: need 0 < t < R(1+s)/(rho-s) = " +
                                std::to_string(threshold));
  }
  Witness out;
  out.u_hat = Eigen::Vector2d(1.0, 0.0);
  out.u = Eigen::Vector2d(rho, std::sqrt(1.0 - rho * rho));
  out.o = radius * out.u;
  out.w = t * out.u_hat - out.o;
  out.lhs = out.u.dot(out.w);
  out.rhs = s * out.w.norm();
  out.violates = out.lhs < out.rhs;
  return out;
}

std::vector<DominanceProblem> dominance_grid(double min_gap) {
  const double norms[] = {0.5, 1.0, 2.0, 4.0, 8.0};
  const double ratios[] = {0.1, 0.25, 0.4, 0.55, 0.7};
  const double fractions[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  const Vector axis = Eigen::Vector3d(1.0, 2.0, 2.0) / 3.0;
  std::vector<DominanceProblem> grid;
  for (double n : norms) {
    for (double q : ratios) {
      const double rho = std::sqrt(1.0 - q * q);
      for (double f : fractions) {
        const double s = f * (rho - min_gap);
        grid.push_back(DominanceProblem{n * axis, q * n, std::sqrt(1.0 - s * s)});
      }
    }
  }
  return grid;
}

double alignment_bound(double m_norm, double radius) {
  if (!(radius >= 0.0 && radius < m_norm))
    throw std::invalid_argument("alignment_bound: need 0 <= R < ||m||");
  const double ratio = radius / m_norm;
  return std::sqrt(1.0 - ratio * ratio);
}

std::pair<Vector, double> box_to_ball(const Vector& l, const Vector& h) {
  require_same_dim(l, h, "box_to_ball");
  if ((h.array() < l.array()).any()) throw std::invalid_argument("box_to_ball: need l <= h");
  return {0.5 * (l + h), (0.5 * (h - l)).norm()};
}

}  // namespace zomd::conic
