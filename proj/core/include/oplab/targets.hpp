#pragma once

#include "oplab/mdp.hpp"
#include "oplab/trajectory.hpp"
#include "oplab/update_rule.hpp"

#include <vector>

namespace oplab {

// Scalar update targets of each rule for the first pair of a trajectory.
//
//   uncorrected   sum_{s<n} gamma^s r_s + gamma^n E_pi Q(x_n)
//   importance    sum_{s<n} rho_{1:s} gamma^s r_s + rho_{1:n-1} gamma^n E_pi Q(x_n)
//   Retrace       Q(x_0, a_0) + sum_s gamma^s (prod_{u=1..s} c_u) Delta_s
//   TreeBackup    same as Retrace with c_u = lambda pi_alpha(a_u|x_u)
//
// Delta_s = r_s + gamma E_{pi_alpha} Q(x_{s+1}) - Q(x_s, a_s). Bootstrap values
// at terminal states are 0. When a truncated rollout is shorter than n, the
// n-step targets bootstrap from the last available state.
class TargetEvaluator {
 public:
  TargetEvaluator(const UpdateRuleSpec& rule, const Policy& target, const Policy& behaviour,
                  double gamma);

  double operator()(const QTable& q, const Trajectory& traj) const;

  // Target for every anchor t, treating steps t.. as the trajectory. Trace
  // rules use the backward recursion G_t = Delta_t + gamma c_{t+1} G_{t+1}.
  void suffix_targets(const QTable& q, const Trajectory& traj, std::vector<double>& out) const;

  // Rollout length the rule needs: n for n-step rules, `horizon` otherwise.
  int rollout_length(int horizon) const { return rule_.n_step() ? rule_.n : horizon; }

  const UpdateRuleSpec& rule() const { return rule_; }

 private:
  double nstep_target(const QTable& q, const Trajectory& traj, std::size_t anchor) const;
  double bootstrap(const QTable& q, const Trajectory& traj, std::size_t t, const Policy& policy) const;
  double ratio(const Step& step) const;

  UpdateRuleSpec rule_;
  Policy target_;
  Policy behaviour_;
  Policy mixed_;
  Eigen::VectorXd trace_;
  double gamma_;
};

double target(const UpdateRuleSpec& rule, const QTable& q, const Trajectory& traj,
              const Policy& target_policy, const Policy& behaviour, double gamma);

// Steps t.. of a trajectory as a trajectory of its own.
Trajectory suffix(const Trajectory& traj, std::size_t t);

}  // namespace oplab
