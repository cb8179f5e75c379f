#pragma once

#include "oplab/mdp.hpp"
#include "oplab/rng.hpp"

#include <optional>

namespace oplab {

struct GeneratorOptions {
  double gamma = 0.9;
  // Uniform over states when unset.
  std::optional<Eigen::VectorXd> initial_dist;
};

// Transition rows ~ Dirichlet(1, ..., 1), rewards ~ Uniform[-1, 1], no
// terminal states.
Mdp gen_dirichlet_uniform(int n_states, int n_actions, RngStream& rng,
                          const GeneratorOptions& options = {});

// Garnet MDP: every row puts mass 1/branching on `branching` distinct states
// drawn without replacement; floor(n_states / 10) rewarding states pay 1 for
// every action taken in them.
Mdp gen_garnet(int n_states, int n_actions, int branching, RngStream& rng,
               const GeneratorOptions& options = {});

struct ChainOptions {
  double gamma = 0.9;
  double right_reward = -1.0;
  double goal_reward = 50.0;
  double left_reward = 0.0;
};

// Deterministic chain. State index i is the (i + 1)-th cell; the last state is
// terminal. Action 0 moves left (staying put in state 0), action 1 moves
// right. The initial distribution is uniform over non-terminal states.
Mdp gen_chain(int n_states, const ChainOptions& options = {});

inline constexpr int kChainLeft = 0;
inline constexpr int kChainRight = 1;

}  // namespace oplab
