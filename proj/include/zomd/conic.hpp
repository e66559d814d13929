#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "zomd/types.hpp"

namespace zomd::conic {

/// Cosine slack on cone membership tests (relative to the norm product).
inline constexpr double kConeTolerance = 1e-12;
/// Relative slack used by the sampling dominance verifier.
inline constexpr double kDominanceTolerance = 1e-9;
/// rho - s below this is treated as infeasible (the scaling diverges).
inline constexpr double kDegenerateGap = 1e-8;

/// Circular cone C(axis, c) = { y : <axis, y> >= c ||axis|| ||y|| }.
class ConeSpec {
 public:
  ConeSpec(Vector axis, double c);

  const Vector& axis() const { return axis_; }
  /// Unit axis.
  const Vector& direction() const { return direction_; }
  double c() const { return c_; }
  /// sqrt(1 - c^2), the cosine threshold of the dual cone.
  double s() const { return s_; }

 private:
  Vector axis_;
  Vector direction_;
  double c_;
  double s_;
};

bool cone_contains(const ConeSpec& cone, const Vector& y);
/// Membership in the dual cone: <axis/||axis||, w> >= s ||w||.
bool dual_cone_contains(const ConeSpec& cone, const Vector& w);

/// min over unit y in C(axis, c) of <w, y>, with the minimizing y.
std::pair<double, Vector> worst_cone_direction(const ConeSpec& cone, const Vector& w);

enum class Infeasibility { None, UncertaintyTooLarge, ConeTooWide };

const char* describe(Infeasibility reason);

/// Ball-uncertainty dominance problem: find alpha with <alpha m, y> >= <x, y> for every x in
/// B(m, radius) and every y in C(x, c).
struct DominanceProblem {
  Vector m;
  double radius = 0.0;
  double c = 1.0;

  /// Box [l, h] relaxed to the ball B((l+h)/2, ||(h-l)/2||).
  static DominanceProblem from_box(const Vector& l, const Vector& h, double c);

  double s() const;
  /// sqrt(1 - R^2/||m||^2); zero when R >= ||m||.
  double rho() const;
  Infeasibility feasibility() const;
};

/// Closed-form robust scaling
///
///     alpha = 1 + R (1 + s) / (||m|| (rho - s)),  s = sqrt(1 - c^2), rho = sqrt(1 - R^2/||m||^2),
///
/// which guarantees dominance over the whole ball whenever ||m|| > R and rho > s.
/// Throws InfeasibleError naming the violated condition.
double min_dominance_alpha(const DominanceProblem& problem);

/// Same formula on scalars (used by the finite-difference field). R = 0 gives exactly 1.
double robust_alpha(double m_norm, double radius, double c);

/// Numerically exact smallest alpha for the ball model, by maximizing the per-point
/// requirement over a plane through m (the problem is rotation invariant about m).
/// Always <= min_dominance_alpha.
double tight_dominance_alpha(double m_norm, double radius, double c);

struct DominanceCheck {
  bool holds = true;
  std::size_t points_checked = 0;
  /// Smallest observed value of <alpha m - x, y> / (||alpha m - x|| ||y||).
  double worst_ratio = 1.0;
  std::optional<Vector> witness_x;
  std::optional<Vector> witness_y;
};

/// Deterministic sampling verifier. Points x are drawn on and inside the sphere ||x - m|| = R
/// (a dense mesh on a great circle through m plus seeded random points); for each x the
/// analytically worst y on the boundary of C(x, c) is checked, together with seeded boundary
/// and interior y samples.
DominanceCheck verify_dominance(const DominanceProblem& problem, double alpha,
                                std::size_t n_samples, std::uint64_t seed);

struct Witness {
  Vector u;
  Vector u_hat;
  Vector o;
  Vector w;        // t u_hat - o
  double lhs = 0;  // <u, w>
  double rhs = 0;  // s ||w||
  /// lhs < rhs, i.e. w lies outside the dual cone around u.
  bool violates = false;
};

/// Two-plane construction u_hat = e1, u = rho e1 + sqrt(1 - rho^2) e2, o = R u, w = t u_hat - o.
/// Requires R > 0, 0 <= s < rho < 1 and 0 < t < R (1 + s) / (rho - s). The inequality values
/// are evaluated exactly and reported in `violates`.
Witness worst_case_witness(double radius, double s, double rho, double t);

/// Deterministic 5 x 5 x 5 grid of dominance problems in R^3: ||m|| in {0.5, 1, 2, 4, 8},
/// R/||m|| in {0.1, 0.25, 0.4, 0.55, 0.7}, and five cone parameters per pair chosen so that
/// rho - s >= min_gap.
std::vector<DominanceProblem> dominance_grid(double min_gap = 0.05);

/// inf over ||x - m|| <= R of <x/||x||, m/||m||> = sqrt(1 - R^2/||m||^2).
double alignment_bound(double m_norm, double radius);

/// Midpoint and radius of the smallest Euclidean ball containing the box [l, h].
std::pair<Vector, double> box_to_ball(const Vector& l, const Vector& h);

}  // namespace zomd::conic
