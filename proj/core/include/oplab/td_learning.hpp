#pragma once

#include "oplab/mdp.hpp"
#include "oplab/rng.hpp"
#include "oplab/targets.hpp"
#include "oplab/trajectory.hpp"
#include "oplab/update_rule.hpp"

#include <optional>
#include <vector>

namespace oplab {

enum class UpdateAnchors {
  // Every visited pair gets the forward-view target of its own suffix.
  EveryVisit,
  // Only the first pair of each rollout is updated; n-step rules roll out n
  // steps.
  FirstStep,
};

struct TdConfig {
  double learning_rate = 0.1;
  // Rollouts end at termination or after this many steps.
  int segment_length = 100;
  UpdateAnchors anchors = UpdateAnchors::EveryVisit;
  RewardNoise noise;
};

// Tabular learner applying Q(x, a) <- Q(x, a) + lr (target - Q(x, a)).
//
// Targets for one rollout are all computed from the table as it was before
// the rollout, then applied in visit order. Rollout i draws from
// rng.derive(i).
class TdLearner {
 public:
  TdLearner(const Mdp& mdp, const UpdateRuleSpec& rule, const Policy& target, const Policy& behaviour,
            TdConfig cfg, RngStream rng, std::optional<QTable> q0 = std::nullopt);

  void set_policies(const Policy& target, const Policy& behaviour);
  void set_rule(const UpdateRuleSpec& rule);

  // Consumes exactly `steps` environment steps with the configured rate.
  void learn(long steps);

  // Samples the next rollout of at most max_steps steps from the initial
  // distribution and counts its steps.
  Trajectory next_rollout(int max_steps);

  // Applies the updates of one rollout with the given step size.
  void update(const Trajectory& traj, double step_size);

  const QTable& q() const { return q_; }
  long env_steps() const { return env_steps_; }
  const Policy& target() const { return target_; }
  const Policy& behaviour() const { return behaviour_; }
  const UpdateRuleSpec& rule() const { return rule_; }

 private:
  const Mdp& mdp_;
  UpdateRuleSpec rule_;
  Policy target_;
  Policy behaviour_;
  TdConfig cfg_;
  RngStream rng_;
  TargetEvaluator evaluator_;
  QTable q_;
  long env_steps_ = 0;
  std::uint64_t rollouts_ = 0;
  std::vector<double> scratch_;
};

struct ErrorPoint {
  long env_steps = 0;
  double l2_error = 0.0;
};

struct TdEvalConfig {
  TdConfig td;
  long n_steps = 100000;
  long eval_every = 1000;
};

// Learns from Q = 0 and records ||Q - Q^target||_2 at env step 0 and after
// every eval_every steps (and at n_steps).
std::vector<ErrorPoint> td_eval_loop(const Mdp& mdp, const UpdateRuleSpec& rule, const Policy& target,
                                     const Policy& behaviour, const TdEvalConfig& cfg, RngStream rng);

}  // namespace oplab
