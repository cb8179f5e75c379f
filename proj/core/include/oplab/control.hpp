#pragma once

#include "oplab/ctrace.hpp"
#include "oplab/mdp.hpp"
#include "oplab/rng.hpp"
#include "oplab/td_learning.hpp"
#include "oplab/update_rule.hpp"

#include <vector>

namespace oplab {

enum class EvaluationMode {
  // Sampled evaluation with a fixed update rule.
  Rule,
  // alpha-Retrace with alpha adapted per rollout toward a target rate.
  Ctrace,
  // Q set to the exact action values of the mixed target each round.
  Exact,
};

enum class BehaviourSchedule { FixedUniform, GreedyEpsilon };

struct ControlConfig {
  int rounds = 200;
  long env_steps_per_round = 100;
  EvaluationMode mode = EvaluationMode::Rule;
  // The evaluation rule. For trace rules alpha is the mixture weight on the
  // greedy policy; Exact mode evaluates mixture(greedy, mu, rule.alpha).
  UpdateRuleSpec rule = UpdateRuleSpec::retrace(1.0);
  // C-trace mode.
  double target_rate = 0.0;
  StepSchedule phi_schedule;
  double phi0 = 0.0;
  BehaviourSchedule behaviour = BehaviourSchedule::FixedUniform;
  double epsilon = 0.1;
  TdConfig td;
  RngStream rng{0};

  void validate() const;
};

struct ControlPoint {
  int round = 0;
  long env_steps_total = 0;
  double suboptimality = 0.0;
  // Mixture weight in use during the round (C-trace reports its current alpha).
  double alpha = 0.0;
};

struct ControlResult {
  Policy policy;
  QTable q;
  std::vector<ControlPoint> curve;
};

// Modified policy iteration. Round 0 records the greedy policy of Q = 0;
// each later round evaluates the current target for env_steps_per_round
// steps continuing from the current Q, then takes the greedy policy of Q and
// updates the behaviour per the schedule.
ControlResult policy_iteration(const Mdp& mdp, const ControlConfig& cfg);

// Mean optimal state value minus mean state value of the policy, over a
// uniformly random initial state.
double suboptimality(const Mdp& mdp, const Policy& policy);

}  // namespace oplab
