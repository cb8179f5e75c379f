#include "oplab/targets.hpp"

#include "oplab/dynamic_programming.hpp"
#include "oplab/operators.hpp"

#include <algorithm>
#include <stdexcept>

namespace oplab {

TargetEvaluator::TargetEvaluator(const UpdateRuleSpec& rule, const Policy& target,
                                 const Policy& behaviour, double gamma)
    : rule_(rule),
      target_(target),
      behaviour_(behaviour),
      mixed_(mixture(target, behaviour, rule.alpha)),
      gamma_(gamma) {
  rule_.validate();
  if (rule_.trace_based()) trace_ = trace_coefficients(rule_, target_, behaviour_);
}

double TargetEvaluator::bootstrap(const QTable& q, const Trajectory& traj, std::size_t t,
                                  const Policy& policy) const {
  if (t + 1 >= traj.size() && traj.terminated) return 0.0;
  return q.expected(traj.next_state(t), policy);
}

double TargetEvaluator::ratio(const Step& step) const {
  const double mu = behaviour_(step.state, step.action);
  if (mu == 0.0) {
    throw std::invalid_argument("importance weighting: observed action has zero behaviour probability");
  }
  return target_(step.state, step.action) / mu;
}

double TargetEvaluator::nstep_target(const QTable& q, const Trajectory& traj, std::size_t anchor) const {
  const std::size_t end = std::min(traj.size(), anchor + static_cast<std::size_t>(rule_.n));
  const bool weighted = rule_.kind == RuleKind::NStepImportanceWeighted;
  double discount = 1.0;
  double rho = 1.0;
  double total = 0.0;
  for (std::size_t s = anchor; s < end; ++s) {
    if (weighted && s > anchor) rho *= ratio(traj.steps[s]);
    total += rho * discount * traj.steps[s].reward;
    discount *= gamma_;
  }
  return total + rho * discount * bootstrap(q, traj, end - 1, target_);
}

double TargetEvaluator::operator()(const QTable& q, const Trajectory& traj) const {
  if (traj.steps.empty()) throw std::invalid_argument("target: empty trajectory");
  if (rule_.n_step()) return nstep_target(q, traj, 0);
  const Step& first = traj.steps.front();
  double total = q(first.state, first.action);
  double weight = 1.0;
  for (std::size_t s = 0; s < traj.size(); ++s) {
    const Step& step = traj.steps[s];
    if (s > 0) weight *= gamma_ * trace_(step.state * q.n_actions + step.action);
    const double delta = step.reward + gamma_ * bootstrap(q, traj, s, mixed_) - q(step.state, step.action);
    total += weight * delta;
  }
  return total;
}

void TargetEvaluator::suffix_targets(const QTable& q, const Trajectory& traj,
                                     std::vector<double>& out) const {
  const std::size_t len = traj.size();
  out.resize(len);
  if (rule_.n_step()) {
    for (std::size_t t = 0; t < len; ++t) out[t] = nstep_target(q, traj, t);
    return;
  }
  double tail = 0.0;
  for (std::size_t t = len; t-- > 0;) {
    const Step& step = traj.steps[t];
    const double qsa = q(step.state, step.action);
    const double delta = step.reward + gamma_ * bootstrap(q, traj, t, mixed_) - qsa;
    double g = delta;
    if (t + 1 < len) {
      const Step& next = traj.steps[t + 1];
      g += gamma_ * trace_(next.state * q.n_actions + next.action) * tail;
    }
    tail = g;
    out[t] = qsa + g;
  }
}

double target(const UpdateRuleSpec& rule, const QTable& q, const Trajectory& traj,
              const Policy& target_policy, const Policy& behaviour, double gamma) {
  return TargetEvaluator(rule, target_policy, behaviour, gamma)(q, traj);
}

Trajectory suffix(const Trajectory& traj, std::size_t t) {
  if (t >= traj.size()) throw std::out_of_range("suffix: anchor beyond trajectory");
  Trajectory out;
  out.steps.assign(traj.steps.begin() + static_cast<std::ptrdiff_t>(t), traj.steps.end());
  out.final_state = traj.final_state;
  out.terminated = traj.terminated;
  out.horizon_cap = traj.horizon_cap;
  return out;
}

}  // namespace oplab
