#include "zomd/oracle.hpp"

#include <utility>

namespace zomd {

ObjectiveOracle::ObjectiveOracle(Index dim, Function f, std::string name)
    : dim_(dim),
      f_(std::move(f)),
      name_(std::move(name)),
      counter_(std::make_unique<std::atomic<std::uint64_t>>(0)) {
  if (dim_ < 1) throw std::invalid_argument("ObjectiveOracle: dimension must be positive");
  if (!f_) throw std::invalid_argument("ObjectiveOracle: empty objective");
}

bool ObjectiveOracle::in_domain(const Vector& x) const {
  if (x.size() != dim_ || !x.allFinite()) return false;
  return !guard_ || guard_(x);
}

double ObjectiveOracle::evaluate_uncounted(const Vector& x) const {
  if (x.size() != dim_) {
    throw std::invalid_argument(name_ + ": expected dimension " + std::to_string(dim_) +
                                ", got " + std::to_string(x.size()));
  }
  if (!in_domain(x)) throw DomainError(name_ + ": point outside the objective domain");
  return f_(x);
}

double ObjectiveOracle::evaluate(const Vector& x) const {
  const double value = evaluate_uncounted(x);
  counter_->fetch_add(1, std::memory_order_relaxed);
  return value;
}

Vector ObjectiveOracle::gradient(const Vector& x) const {
  if (!gradient_) throw std::logic_error(name_ + ": no analytic gradient attached");
  if (!in_domain(x)) throw DomainError(name_ + ": point outside the objective domain");
  return gradient_(x);
}

std::optional<double> ObjectiveOracle::optimal_value() const {
  if (!minimizer_) return std::nullopt;
  return f_(*minimizer_);
}

ObjectiveOracle& ObjectiveOracle::with_gradient(Gradient g) {
  gradient_ = std::move(g);
  return *this;
}

ObjectiveOracle& ObjectiveOracle::with_minimizer(Vector x_star) {
  if (x_star.size() != dim_) throw std::invalid_argument(name_ + ": minimizer dimension mismatch");
  minimizer_ = std::move(x_star);
  return *this;
}

ObjectiveOracle& ObjectiveOracle::with_moduli(std::optional<double> mu, std::optional<double> L) {
  if (mu && *mu <= 0) throw std::invalid_argument(name_ + ": mu must be positive");
  if (L && *L <= 0) throw std::invalid_argument(name_ + ": L must be positive");
  if (mu && L && *mu > *L) throw std::invalid_argument(name_ + ": require mu <= L");
  mu_ = mu;
  L_ = L;
  return *this;
}

ObjectiveOracle& ObjectiveOracle::with_domain(DomainGuard guard) {
  guard_ = std::move(guard);
  return *this;
}

}  // namespace zomd
