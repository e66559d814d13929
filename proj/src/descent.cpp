#include "zomd/descent.hpp"

#include <stdexcept>

namespace zomd {

const char* to_string(StepRule rule) {
  switch (rule) {
    case StepRule::Fixed:
      return "fixed";
    case StepRule::GeometricGrid:
      return "geometric-grid";
    case StepRule::Backtracking:
      return "backtracking";
  }
  return "unknown";
}

StepRule parse_step_rule(const std::string& text) {
  if (text == "fixed") return StepRule::Fixed;
  if (text == "geometric-grid" || text == "grid") return StepRule::GeometricGrid;
  if (text == "backtracking") return StepRule::Backtracking;
  throw std::invalid_argument("unknown step rule '" + text +
                              "' (expected fixed | geometric-grid | backtracking)");
}

void StepConfig::validate() const {
  if (!(eta0 > 0.0)) throw std::invalid_argument("step: eta0 must be > 0");
  if (!(grid_factor > 1.0)) throw std::invalid_argument("step: grid_factor must be > 1");
  if (grid_width < 0) throw std::invalid_argument("step: grid_width must be >= 0");
  if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("step: shrink must lie in (0,1)");
  if (max_probes < 1) throw std::invalid_argument("step: max_probes must be >= 1");
}

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Completed:
      return "completed";
    case RunStatus::GapReached:
      return "gap-reached";
    case RunStatus::StoppedUncertified:
      return "stopped-uncertified";
    case RunStatus::DomainEscape:
      return "domain-escape";
  }
  return "unknown";
}

Vector mirror_step(const MirrorMap& map, const Vector& x, const Vector& omega, double eta) {
  require_same_dim(x, omega, "mirror_step");
  if (!(eta >= 0.0)) throw std::invalid_argument("mirror_step: eta must be >= 0");
  map.check_domain(x);
  if (eta == 0.0) return x;
  return map.gradient_inverse(map.gradient(x) - eta * omega);
}

CertificateCheck certificate(const MirrorMap& map, const ObjectiveOracle& oracle,
                             const Vector& omega_at_x, const Vector& x, double f_x,
                             const Vector& x_next, double eta) {
  CertificateCheck out;
  out.f_next = oracle.evaluate(x_next);
  out.lhs = eta * d_f_omega(out.f_next, f_x, omega_at_x, x_next, x);
  out.rhs = map.bregman(x_next, x);
  out.pass = certificate_passes(out.lhs, out.rhs);
  return out;
}

namespace {

struct Probe {
  double eta = 0.0;
  bool ok = false;  // reached the certificate (no domain failure)
  Vector x_next;
  CertificateCheck check;
};

Probe probe(const MirrorMap& map, const ObjectiveOracle& oracle, const Vector& x, double f_x,
            const Vector& omega, double eta) {
  Probe p;
  p.eta = eta;
  try {
    p.x_next = mirror_step(map, x, omega, eta);
    p.check = certificate(map, oracle, omega, x, f_x, p.x_next, eta);
    p.ok = true;
  } catch (const DomainError&) {
    p.ok = false;
    p.check.pass = false;
  }
  return p;
}

StepSelection finish(const Probe& p, int probes) {
  if (!p.ok) throw DomainError("no probed stepsize keeps the iterate inside the domain");
  StepSelection s;
  s.eta = p.eta;
  s.probes = probes;
  s.pass = p.check.pass;
  s.x_next = p.x_next;
  s.check = p.check;
  return s;
}

}  // namespace

StepSelection select_stepsize(const StepConfig& config, const MirrorMap& map,
                              const ObjectiveOracle& oracle, const Vector& x, double f_x,
                              const Vector& omega, double eta_prev) {
  config.validate();
  if (!(eta_prev > 0.0)) throw std::invalid_argument("select_stepsize: eta_prev must be > 0");

  switch (config.rule) {
    case StepRule::Fixed:
      return finish(probe(map, oracle, x, f_x, omega, config.eta0), 1);

    case StepRule::GeometricGrid: {
      // probed in ascending order; the merge keeps the largest passing candidate
      std::vector<Probe> probes;
      for (int k = -config.grid_width; k <= config.grid_width; ++k) {
        probes.push_back(probe(map, oracle, x, f_x, omega, eta_prev * std::pow(config.grid_factor, k)));
      }
      const int count = static_cast<int>(probes.size());
      for (auto it = probes.rbegin(); it != probes.rend(); ++it) {
        if (it->ok && it->check.pass) return finish(*it, count);
      }
      for (const Probe& p : probes) {
        if (p.ok) return finish(p, count);
      }
      return finish(probes.front(), count);
    }

    case StepRule::Backtracking: {
      double eta = eta_prev * config.grid_factor;
      Probe last;
      int count = 0;
      for (; count < config.max_probes; eta *= config.shrink) {
        last = probe(map, oracle, x, f_x, omega, eta);
        ++count;
        if (last.ok && last.check.pass) break;
      }
      return finish(last, count);
    }
  }
  throw std::logic_error("select_stepsize: unhandled rule");
}

bool TrajectoryRecord::all_certified() const {
  for (const TrajectoryRow& row : rows) {
    if (row.cert_pass && !*row.cert_pass) return false;
  }
  return true;
}

std::size_t TrajectoryRecord::certified_prefix() const {
  std::size_t k = 0;
  while (k + 1 < rows.size() && rows[k].cert_pass.value_or(false)) ++k;
  return k;
}

TrajectoryRecord run(const MirrorMap& map, const ObjectiveOracle& oracle, const VectorField& field,
                     const StepConfig& config, const Vector& x1, const RunOptions& options) {
  config.validate();
  if (options.t_max < 1) throw std::invalid_argument("run: t_max must be >= 1");
  if (options.gap_tol && !oracle.known_minimizer())
    throw std::invalid_argument("run: gap_tol stopping needs a known minimizer");
  map.check_domain(x1);

  const std::uint64_t base = oracle.eval_count();
  auto evals = [&] { return oracle.eval_count() - base; };
  const std::optional<double> f_star = oracle.optimal_value();

  TrajectoryRecord record;
  record.rows.reserve(options.t_max);
  {
    TrajectoryRow first;
    first.iter = 1;
    first.x = x1;
    first.f = oracle.evaluate(x1);
    first.evals_cum = evals();
    record.rows.push_back(std::move(first));
  }

  double eta_prev = config.eta0;
  for (std::size_t j = 1; j < options.t_max; ++j) {
    TrajectoryRow& row = record.rows.back();
    if (options.gap_tol && row.f - *f_star <= *options.gap_tol) {
      record.status = RunStatus::GapReached;
      break;
    }
    StepSelection step;
    try {
      FieldSample sample = field(row.x, j, row.f);
      row.diag = std::move(sample.diag);
      row.omega = std::move(sample.omega);
      step = select_stepsize(config, map, oracle, row.x, row.f, *row.omega, eta_prev);
    } catch (const DomainError& e) {
      record.status = RunStatus::DomainEscape;
      record.message = e.what();
      row.evals_cum = evals();
      break;
    }
    row.eta = step.eta;
    row.cert_lhs = step.check.lhs;
    row.cert_rhs = step.check.rhs;
    row.cert_pass = step.pass;
    row.probes = step.probes;
    row.evals_cum = evals();
    if (!step.pass && options.stop_on_uncertified) {
      record.status = RunStatus::StoppedUncertified;
      record.message = "certificate failed at iteration " + std::to_string(j);
      break;
    }
    if (step.pass && step.eta > 0.0) eta_prev = step.eta;

    TrajectoryRow next;
    next.iter = j + 1;
    next.x = std::move(step.x_next);
    next.f = step.check.f_next;
    next.evals_cum = evals();
    record.rows.push_back(std::move(next));
  }
  if (record.status == RunStatus::Completed && options.gap_tol &&
      record.rows.back().f - *f_star <= *options.gap_tol) {
    record.status = RunStatus::GapReached;
  }
  return record;
}

CertificateReport last_iterate_bound(const TrajectoryRecord& record, const MirrorMap& map,
                                     const Vector& x_star, double floor_term,
                                     std::optional<double> f_star) {
  if (record.rows.empty()) throw std::invalid_argument("last_iterate_bound: empty record");
  CertificateReport report;
  report.total_steps = record.steps();
  report.all_certified = record.all_certified();
  report.certified_steps = record.certified_prefix();
  for (std::size_t j = 0; j < report.certified_steps; ++j) report.sum_eta += *record.rows[j].eta;
  if (!(report.sum_eta > 0.0))
    throw std::domain_error("last_iterate_bound: no certified step, the rate term is undefined");
  report.bregman_to_start = map.bregman(x_star, record.rows.front().x);
  report.rate_term = report.bregman_to_start / report.sum_eta;
  report.floor_term = floor_term;
  report.bound = std::max(report.rate_term, floor_term);
  report.f_star = f_star;
  if (f_star) {
    report.achieved_gap = record.rows[report.certified_steps].f - *f_star;
    report.final_gap = record.rows.back().f - *f_star;
  }
  return report;
}

}  // namespace zomd
