#pragma once

#include "oplab/mdp.hpp"
#include "oplab/rng.hpp"

#include <optional>
#include <vector>

namespace oplab {

struct Step {
  int state = 0;
  int action = 0;
  double reward = 0.0;
};

// A behaviour-policy rollout. `final_state` is the state reached after the
// last recorded step: a terminal state when `terminated`, otherwise the
// bootstrap state of a truncated rollout.
struct Trajectory {
  std::vector<Step> steps;
  int final_state = 0;
  bool terminated = false;
  int horizon_cap = 0;

  std::size_t size() const { return steps.size(); }
  // State following step t.
  int next_state(std::size_t t) const {
    return t + 1 < steps.size() ? steps[t + 1].state : final_state;
  }
};

// Additive zero-mean reward noise applied by the sampler. Off by default.
struct RewardNoise {
  enum class Kind { None, Gaussian, Rademacher };
  Kind kind = Kind::None;
  // Standard deviation, either one value for all pairs or one per pair.
  std::vector<double> scale;

  static RewardNoise gaussian(double stddev) { return {Kind::Gaussian, {stddev}}; }
  static RewardNoise rademacher(double magnitude) { return {Kind::Rademacher, {magnitude}}; }
  bool active() const { return kind != Kind::None; }
  double draw(int pair, RngStream& rng) const;
};

// Rolls out `behaviour` for at most `horizon` steps. The first pair is
// `start` when given, otherwise the state is drawn from the initial
// distribution and the action from the behaviour. A rollout that starts in a
// terminal state records that single step with reward 0 and terminates.
Trajectory sample_trajectory(const Mdp& mdp, const Policy& behaviour,
                             std::optional<StateAction> start, int horizon, RngStream& rng,
                             const RewardNoise& noise = {});

}  // namespace oplab
