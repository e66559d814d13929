#pragma once

#include <optional>
#include <string>

#include "zomd/types.hpp"

namespace zomd {

enum class DomainKind { FullSpace, PositiveOrthant };
enum class NormPairKind { Euclidean, L1Linf };

/// Primal/dual norm pair. For L1Linf the primal norm is l1 and the dual is l-infinity.
struct NormPair {
  NormPairKind kind = NormPairKind::Euclidean;

  double primal(const Vector& x) const;
  double dual(const Vector& z) const;
};

/// Distance-generating function Phi together with its gradient map, the inverse of that map,
/// its conjugate and the induced Bregman divergence.
///
/// Two generators are shipped: the Euclidean 1/2 ||x||^2 and the negative entropy
/// sum x_i log x_i on the positive orthant. Moduli sigma/beta are declared with respect to the
/// norm pair; the entropy map only declares sigma = 1 (w.r.t. l1) when restricted to the
/// probability simplex and has no finite beta.
class MirrorMap {
 public:
  static MirrorMap euclidean();
  static MirrorMap entropy(bool restrict_to_simplex = false);

  const std::string& name() const { return name_; }
  DomainKind domain() const { return domain_; }
  NormPair norm_pair() const { return norm_pair_; }
  std::optional<double> sigma() const { return sigma_; }
  std::optional<double> beta() const { return beta_; }

  bool in_domain(const Vector& x) const;
  /// Throws DomainError when x is outside the domain.
  void check_domain(const Vector& x) const;

  double potential(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  Vector gradient_inverse(const Vector& theta) const;
  /// Phi*(theta)
  double conjugate(const Vector& theta) const;

  /// D_Phi(x || y) = Phi(x) - Phi(y) - <grad Phi(y), x - y>
  double bregman(const Vector& x, const Vector& y) const;
  /// D_{Phi*}(a || b) on the dual side.
  double conjugate_bregman(const Vector& theta_a, const Vector& theta_b) const;

 private:
  enum class Kind { Euclidean, Entropy };

  MirrorMap(Kind kind, std::string name, DomainKind domain, NormPair norms,
            std::optional<double> sigma, std::optional<double> beta);

  Kind kind_;
  std::string name_;
  DomainKind domain_;
  NormPair norm_pair_;
  std::optional<double> sigma_;
  std::optional<double> beta_;
};

inline MirrorMap euclidean_mirror() { return MirrorMap::euclidean(); }
inline MirrorMap entropy_mirror(bool restrict_to_simplex = false) {
  return MirrorMap::entropy(restrict_to_simplex);
}

/// Entropy coordinates at or below this value are rejected.
inline constexpr double kEntropyFloor = 1e-300;

/// D_{f,Omega}(x || y) = <Omega(y), y - x> - f(y) + f(x).
double d_f_omega(double f_at_x, double f_at_y, const Vector& omega_at_y, const Vector& x,
                 const Vector& y);

}  // namespace zomd
