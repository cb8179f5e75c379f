#include "oplab/control.hpp"

#include "oplab/dynamic_programming.hpp"

#include <stdexcept>

namespace oplab {

void ControlConfig::validate() const {
  if (rounds < 0) throw std::invalid_argument("ControlConfig: rounds must be nonnegative");
  if (env_steps_per_round < 1) throw std::invalid_argument("ControlConfig: env_steps_per_round must be positive");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("ControlConfig: epsilon outside [0, 1]");
  rule.validate();
}

double suboptimality(const Mdp& mdp, const Policy& policy) {
  check_dimensions(mdp, policy);
  const Policy best = optimal_policy(mdp);
  const Eigen::VectorXd v_best = state_values(best, exact_q(mdp, best));
  const Eigen::VectorXd v = state_values(policy, exact_q(mdp, policy));
  return v_best.mean() - v.mean();
}

ControlResult policy_iteration(const Mdp& mdp, const ControlConfig& cfg) {
  cfg.validate();
  const Policy uniform = Policy::uniform(mdp.n_states(), mdp.n_actions());
  const Policy best = optimal_policy(mdp);
  const double best_value = state_values(best, exact_q(mdp, best)).mean();
  const auto gap = [&](const Policy& p) { return best_value - state_values(p, exact_q(mdp, p)).mean(); };

  QTable q(mdp.n_states(), mdp.n_actions());
  Policy greedy_policy = greedy(q);
  Policy behaviour = uniform;

  CtraceState ctrace;
  ctrace.phi = cfg.phi0;
  ctrace.target_rate = cfg.target_rate;
  ctrace.gamma = mdp.gamma();
  ctrace.schedule = cfg.phi_schedule;

  const auto current_alpha = [&] { return cfg.mode == EvaluationMode::Ctrace ? ctrace.alpha() : cfg.rule.alpha; };

  std::vector<ControlPoint> curve;
  curve.push_back({0, 0, gap(greedy_policy), current_alpha()});

  const UpdateRuleSpec initial_rule =
      cfg.mode == EvaluationMode::Ctrace ? UpdateRuleSpec::retrace(ctrace.alpha()) : cfg.rule;
  TdLearner learner(mdp, initial_rule, greedy_policy, behaviour, cfg.td, cfg.rng, q);

  for (int round = 1; round <= cfg.rounds; ++round) {
    const double alpha = current_alpha();
    switch (cfg.mode) {
      case EvaluationMode::Exact:
        q = exact_q(mdp, mixture(greedy_policy, behaviour, cfg.rule.alpha));
        break;
      case EvaluationMode::Rule:
        learner.set_policies(greedy_policy, behaviour);
        learner.learn(cfg.env_steps_per_round);
        q = learner.q();
        break;
      case EvaluationMode::Ctrace: {
        learner.set_policies(greedy_policy, behaviour);
        long remaining = cfg.env_steps_per_round;
        while (remaining > 0) {
          learner.set_rule(UpdateRuleSpec::retrace(ctrace.alpha()));
          const int len = static_cast<int>(std::min<long>(remaining, cfg.td.segment_length));
          const Trajectory traj = learner.next_rollout(len);
          remaining -= static_cast<long>(traj.size());
          const std::optional<int> cut =
              traj.terminated ? std::nullopt : std::optional<int>(static_cast<int>(traj.size()) - 1);
          const double c_hat =
              contraction_estimate(traj, ctrace.alpha(), greedy_policy, behaviour, mdp.gamma(), cut);
          learner.update(traj, cfg.td.learning_rate);
          ctrace = rm_step(ctrace, c_hat, cut);
        }
        q = learner.q();
        break;
      }
    }
    greedy_policy = greedy(q);
    if (cfg.behaviour == BehaviourSchedule::GreedyEpsilon) behaviour = epsilon_greedy(q, cfg.epsilon);
    const long steps = cfg.mode == EvaluationMode::Exact ? 0 : learner.env_steps();
    curve.push_back({round, steps, gap(greedy_policy), alpha});
  }
  return {greedy_policy, q, std::move(curve)};
}

}  // namespace oplab
