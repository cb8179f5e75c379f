#include "oplab/td_learning.hpp"

#include "oplab/dynamic_programming.hpp"

#include <algorithm>
#include <stdexcept>

namespace oplab {

TdLearner::TdLearner(const Mdp& mdp, const UpdateRuleSpec& rule, const Policy& target,
                     const Policy& behaviour, TdConfig cfg, RngStream rng, std::optional<QTable> q0)
    : mdp_(mdp),
      rule_(rule),
      target_(target),
      behaviour_(behaviour),
      cfg_(std::move(cfg)),
      rng_(rng),
      evaluator_(rule, target, behaviour, mdp.gamma()),
      q_(q0 ? std::move(*q0) : QTable(mdp.n_states(), mdp.n_actions())) {
  check_dimensions(mdp, target);
  check_dimensions(mdp, behaviour);
  check_dimensions(mdp, q_);
  if (!(cfg_.learning_rate >= 0.0 && cfg_.learning_rate <= 1.0)) {
    throw std::invalid_argument("TdLearner: learning rate outside [0, 1]");
  }
  if (cfg_.segment_length < 1) throw std::invalid_argument("TdLearner: segment length must be positive");
}

void TdLearner::set_policies(const Policy& target, const Policy& behaviour) {
  check_dimensions(mdp_, target);
  check_dimensions(mdp_, behaviour);
  target_ = target;
  behaviour_ = behaviour;
  evaluator_ = TargetEvaluator(rule_, target_, behaviour_, mdp_.gamma());
}

void TdLearner::set_rule(const UpdateRuleSpec& rule) {
  rule_ = rule;
  evaluator_ = TargetEvaluator(rule_, target_, behaviour_, mdp_.gamma());
}

Trajectory TdLearner::next_rollout(int max_steps) {
  RngStream rng = rng_.derive(rollouts_++);
  Trajectory traj = sample_trajectory(mdp_, behaviour_, std::nullopt, max_steps, rng, cfg_.noise);
  env_steps_ += static_cast<long>(traj.size());
  return traj;
}

void TdLearner::update(const Trajectory& traj, double step_size) {
  if (traj.steps.empty()) return;
  if (cfg_.anchors == UpdateAnchors::FirstStep) {
    const Step& s = traj.steps.front();
    const double g = evaluator_(q_, traj);
    q_(s.state, s.action) += step_size * (g - q_(s.state, s.action));
    return;
  }
  evaluator_.suffix_targets(q_, traj, scratch_);
  for (std::size_t t = 0; t < traj.size(); ++t) {
    const Step& s = traj.steps[t];
    q_(s.state, s.action) += step_size * (scratch_[t] - q_(s.state, s.action));
  }
}

void TdLearner::learn(long steps) {
  // A first-step update only reads as much of the rollout as its rule needs.
  const int cap = cfg_.anchors == UpdateAnchors::FirstStep ? evaluator_.rollout_length(cfg_.segment_length)
                                                           : cfg_.segment_length;
  long remaining = steps;
  while (remaining > 0) {
    const int len = static_cast<int>(std::min<long>(remaining, cap));
    const Trajectory traj = next_rollout(len);
    remaining -= static_cast<long>(traj.size());
    update(traj, cfg_.learning_rate);
  }
}

std::vector<ErrorPoint> td_eval_loop(const Mdp& mdp, const UpdateRuleSpec& rule, const Policy& target,
                                     const Policy& behaviour, const TdEvalConfig& cfg, RngStream rng) {
  if (cfg.n_steps < 0 || cfg.eval_every < 1) throw std::invalid_argument("td_eval_loop: bad step counts");
  const Eigen::VectorXd truth = exact_q(mdp, target).values;
  TdLearner learner(mdp, rule, target, behaviour, cfg.td, rng);
  std::vector<ErrorPoint> curve;
  curve.push_back({0, truth.norm()});
  while (learner.env_steps() < cfg.n_steps) {
    learner.learn(std::min(cfg.eval_every, cfg.n_steps - learner.env_steps()));
    curve.push_back({learner.env_steps(), (learner.q().values - truth).norm()});
  }
  return curve;
}

}  // namespace oplab
