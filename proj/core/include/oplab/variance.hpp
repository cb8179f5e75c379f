#pragma once

#include "oplab/mdp.hpp"
#include "oplab/rng.hpp"
#include "oplab/trajectory.hpp"
#include "oplab/update_rule.hpp"

#include <span>

namespace oplab {

enum class TailPolicy {
  // Rollouts stop at the horizon; the neglected tail is bounded by
  // gamma^H R_max / (1 - gamma).
  Absorb,
  // Trace products are closed analytically after termination (used by the
  // contraction estimator).
  AnalyticTail,
};

struct McConfig {
  int n_trajectories = 5000;
  int horizon = 100;
  RngStream rng{0};
  TailPolicy tail = TailPolicy::Absorb;
  double truncation_tolerance = 0.05;
  RewardNoise noise;
  int jobs = 1;

  // gamma^horizon R_max / (1 - gamma).
  double truncation_bound(const Mdp& mdp) const;
  // Checks counts and, for Absorb, that truncation_bound <= truncation_tolerance.
  void validate(const Mdp& mdp) const;
};

struct VarianceEstimate {
  double mean_square = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
  // Bound on the bias from truncating rollouts (0 for n-step rules).
  double truncation_bound = 0.0;
};

// Mean and standard error of the mean of a sample.
VarianceEstimate summarize_squares(std::span<const double> squares);

// E_{(x0,a0)~nu} E_mu[(That Q - T Q)(x0, a0)^2], with T Q from the exact
// operator. Trajectory k uses the stream cfg.rng.derive(k).
VarianceEstimate variance(const Mdp& mdp, const UpdateRuleSpec& rule, const QTable& q,
                          const StateActionDist& nu, const Policy& target, const Policy& behaviour,
                          const McConfig& cfg);

}  // namespace oplab
