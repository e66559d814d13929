#include "zomd/geometry.hpp"

#include <utility>

namespace zomd {

double NormPair::primal(const Vector& x) const {
  return kind == NormPairKind::Euclidean ? x.norm() : x.lpNorm<1>();
}

double NormPair::dual(const Vector& z) const {
  return kind == NormPairKind::Euclidean ? z.norm() : z.lpNorm<Eigen::Infinity>();
}

MirrorMap::MirrorMap(Kind kind, std::string name, DomainKind domain, NormPair norms,
                     std::optional<double> sigma, std::optional<double> beta)
    : kind_(kind),
      name_(std::move(name)),
      domain_(domain),
      norm_pair_(norms),
      sigma_(sigma),
      beta_(beta) {}

MirrorMap MirrorMap::euclidean() {
  return MirrorMap(Kind::Euclidean, "euclidean", DomainKind::FullSpace,
                   NormPair{NormPairKind::Euclidean}, 1.0, 1.0);
}

MirrorMap MirrorMap::entropy(bool restrict_to_simplex) {
  // Pinsker: 1-strongly convex w.r.t. l1 on the simplex. No global smoothness modulus.
  std::optional<double> sigma;
  if (restrict_to_simplex) sigma = 1.0;
  return MirrorMap(Kind::Entropy, restrict_to_simplex ? "entropy-simplex" : "entropy",
                   DomainKind::PositiveOrthant, NormPair{NormPairKind::L1Linf}, sigma,
                   std::nullopt);
}

bool MirrorMap::in_domain(const Vector& x) const {
  if (!x.allFinite()) return false;
  if (domain_ == DomainKind::FullSpace) return true;
  return (x.array() > kEntropyFloor).all();
}

void MirrorMap::check_domain(const Vector& x) const {
  if (!in_domain(x)) {
    throw DomainError(name_ + " mirror: point outside the domain (coordinates must be finite" +
                      std::string(domain_ == DomainKind::PositiveOrthant ? " and > 1e-300)" : ")"));
  }
}

double MirrorMap::potential(const Vector& x) const {
  check_domain(x);
  if (kind_ == Kind::Euclidean) return 0.5 * x.squaredNorm();
  return (x.array() * x.array().log()).sum();
}

Vector MirrorMap::gradient(const Vector& x) const {
  check_domain(x);
  if (kind_ == Kind::Euclidean) return x;
  return (x.array().log() + 1.0).matrix();
}

Vector MirrorMap::gradient_inverse(const Vector& theta) const {
  if (!theta.allFinite()) throw DomainError(name_ + " mirror: non-finite dual point");
  if (kind_ == Kind::Euclidean) return theta;
  Vector x = (theta.array() - 1.0).exp().matrix();
  check_domain(x);
  return x;
}

double MirrorMap::conjugate(const Vector& theta) const {
  if (kind_ == Kind::Euclidean) return 0.5 * theta.squaredNorm();
  return (theta.array() - 1.0).exp().sum();
}

double MirrorMap::bregman(const Vector& x, const Vector& y) const {
  require_same_dim(x, y, "bregman");
  check_domain(x);
  check_domain(y);
  if (kind_ == Kind::Euclidean) return 0.5 * (x - y).squaredNorm();
  // generalized KL divergence
  return (x.array() * (x.array() / y.array()).log() - x.array() + y.array()).sum();
}

double MirrorMap::conjugate_bregman(const Vector& theta_a, const Vector& theta_b) const {
  require_same_dim(theta_a, theta_b, "conjugate_bregman");
  const Vector grad_b = gradient_inverse(theta_b);  // grad Phi* = (grad Phi)^{-1}
  return conjugate(theta_a) - conjugate(theta_b) - grad_b.dot(theta_a - theta_b);
}

double d_f_omega(double f_at_x, double f_at_y, const Vector& omega_at_y, const Vector& x,
                 const Vector& y) {
  require_same_dim(x, y, "d_f_omega");
  require_same_dim(omega_at_y, y, "d_f_omega");
  return omega_at_y.dot(y - x) - f_at_y + f_at_x;
}

}  // namespace zomd
