#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "zomd/types.hpp"

namespace zomd {

/// Zeroth-order objective with evaluation accounting.
///
/// Every call to evaluate() bumps an atomic counter, so stencil points may be evaluated
/// from several threads. The analytic gradient and the metadata (minimizer, moduli) exist
/// for verification only and are never charged to the budget.
class ObjectiveOracle {
 public:
  using Function = std::function<double(const Vector&)>;
  using Gradient = std::function<Vector(const Vector&)>;
  using DomainGuard = std::function<bool(const Vector&)>;

  ObjectiveOracle(Index dim, Function f, std::string name = "objective");

  ObjectiveOracle(ObjectiveOracle&&) noexcept = default;
  ObjectiveOracle& operator=(ObjectiveOracle&&) noexcept = default;

  Index dim() const { return dim_; }
  const std::string& name() const { return name_; }

  /// f(x); throws DomainError outside the guard, std::invalid_argument on dimension mismatch.
  double evaluate(const Vector& x) const;
  std::uint64_t eval_count() const { return counter_->load(std::memory_order_relaxed); }
  void reset_count() const { counter_->store(0); }

  /// Uncounted evaluation for verification code.
  double evaluate_uncounted(const Vector& x) const;

  bool has_gradient() const { return static_cast<bool>(gradient_); }
  /// Throws std::logic_error when no analytic gradient was attached.
  Vector gradient(const Vector& x) const;

  bool in_domain(const Vector& x) const;

  const std::optional<Vector>& known_minimizer() const { return minimizer_; }
  /// f(x_*) computed without charging the counter.
  std::optional<double> optimal_value() const;
  std::optional<double> mu() const { return mu_; }
  std::optional<double> L_smooth() const { return L_; }

  ObjectiveOracle& with_gradient(Gradient g);
  ObjectiveOracle& with_minimizer(Vector x_star);
  /// Requires 0 < mu <= L.
  ObjectiveOracle& with_moduli(std::optional<double> mu, std::optional<double> L);
  ObjectiveOracle& with_domain(DomainGuard guard);

 private:
  Index dim_;
  Function f_;
  std::string name_;
  Gradient gradient_;
  DomainGuard guard_;
  std::optional<Vector> minimizer_;
  std::optional<double> mu_;
  std::optional<double> L_;
  std::unique_ptr<std::atomic<std::uint64_t>> counter_;
};

}  // namespace zomd
