#pragma once

#include "oplab/mdp.hpp"
#include "oplab/update_rule.hpp"
#include "oplab/variance.hpp"

namespace oplab {

// Both sides of the error decomposition
//
//   E||T^Q - Q^pi||_inf <= E||T^Q - TQ||_2^2 ^(1/2) + G ||Q - Qf||_inf + ||Qf - Q^pi||_2
//
// and of its squared form
//
//   E||T^Q - Q^pi||_2^2 <= 3 [E||T^Q - TQ||_2^2 + G^2 |X||A| ||Q - Qf||_inf^2 + ||Qf - Q^pi||_2^2]
//
// where T^Q is a random table holding one sampled target per state-action
// pair, T the rule's exact operator with sup contraction rate G and fixed
// point Qf.
struct DecompositionReport {
  long replicates = 0;

  double lhs = 0.0;
  double lhs_se = 0.0;
  double root_variance = 0.0;
  double root_variance_se = 0.0;
  double contraction_term = 0.0;
  double bias_term = 0.0;
  // ||Qf - Q^pi||_inf, the value the left side takes without noise at Q = Qf.
  double bias_inf = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double std_error = 0.0;
  bool holds = false;

  double lhs_squared = 0.0;
  double lhs_squared_se = 0.0;
  double variance = 0.0;
  double variance_se = 0.0;
  double rhs_squared = 0.0;
  double slack_squared = 0.0;
  bool holds_squared = false;
};

// Replicate k samples the trajectory for pair p from
// mc.rng.derive(k * n_pairs + p); mc.n_trajectories is the number of
// replicates. A side "holds" when lhs <= rhs + 3 standard errors.
DecompositionReport decomposition_check(const Mdp& mdp, const UpdateRuleSpec& rule, const Policy& target,
                                        const Policy& behaviour, const QTable& q0, const McConfig& mc);

}  // namespace oplab
