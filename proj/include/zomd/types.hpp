#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace zomd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// A point left the domain of a mirror map or objective.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problem data violates the feasibility conditions of a geometric construction.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require_same_dim(const Vector& a, const Vector& b, const char* what) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                                ")");
  }
}

/// Seeded generator with a fixed sampling recipe, so that identical seeds give identical
/// streams regardless of the standard library in use.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  Vector normal_vector(Index d) {
    Vector v(d);
    for (Index i = 0; i < d; ++i) v(i) = normal();
    return v;
  }

  /// Uniform direction on the unit sphere in R^d.
  Vector unit_vector(Index d) {
    Vector v = normal_vector(d);
    double n = v.norm();
    while (n == 0.0) {
      v = normal_vector(d);
      n = v.norm();
    }
    return v / n;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Seeded orthogonal matrix (QR of a Gaussian matrix with the sign convention diag(R) > 0).
Matrix random_orthogonal(Index d, std::uint64_t seed);

}  // namespace zomd
