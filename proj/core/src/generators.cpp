#include "oplab/generators.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>

namespace oplab {

namespace {

Eigen::VectorXd initial_or_uniform(const GeneratorOptions& options, int n_states) {
  if (options.initial_dist) return *options.initial_dist;
  return Eigen::VectorXd::Constant(n_states, 1.0 / n_states);
}

// First k entries of a partial Fisher-Yates shuffle of 0..n-1.
std::vector<int> sample_without_replacement(int n, int k, RngStream& rng) {
  std::vector<int> items(static_cast<std::size_t>(n));
  std::iota(items.begin(), items.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n - i)));
    std::swap(items[static_cast<std::size_t>(i)], items[static_cast<std::size_t>(j)]);
  }
  items.resize(static_cast<std::size_t>(k));
  return items;
}

}  // namespace

Mdp gen_dirichlet_uniform(int n_states, int n_actions, RngStream& rng,
                          const GeneratorOptions& options) {
  if (n_states < 1 || n_actions < 1) {
    throw std::invalid_argument("gen_dirichlet_uniform: dimensions must be positive");
  }
  const int pairs = n_states * n_actions;
  RowMatrix transition(pairs, n_states);
  for (int i = 0; i < pairs; ++i) {
    for (int y = 0; y < n_states; ++y) transition(i, y) = rng.exponential();
    transition.row(i) /= transition.row(i).sum();
  }
  Eigen::VectorXd reward(pairs);
  for (int i = 0; i < pairs; ++i) reward(i) = rng.uniform(-1.0, 1.0);
  return Mdp(n_states, n_actions, std::move(transition), std::move(reward), options.gamma,
             initial_or_uniform(options, n_states), std::vector<bool>(static_cast<std::size_t>(n_states), false));
}

Mdp gen_garnet(int n_states, int n_actions, int branching, RngStream& rng,
               const GeneratorOptions& options) {
  if (n_states < 1 || n_actions < 1) throw std::invalid_argument("gen_garnet: dimensions must be positive");
  if (branching < 1 || branching > n_states) {
    throw std::invalid_argument("gen_garnet: branching factor must lie in [1, n_states]");
  }
  const int pairs = n_states * n_actions;
  RowMatrix transition = RowMatrix::Zero(pairs, n_states);
  for (int i = 0; i < pairs; ++i) {
    for (int y : sample_without_replacement(n_states, branching, rng)) {
      transition(i, y) = 1.0 / branching;
    }
  }
  Eigen::VectorXd reward = Eigen::VectorXd::Zero(pairs);
  for (int x : sample_without_replacement(n_states, n_states / 10, rng)) {
    for (int a = 0; a < n_actions; ++a) reward(x * n_actions + a) = 1.0;
  }
  return Mdp(n_states, n_actions, std::move(transition), std::move(reward), options.gamma,
             initial_or_uniform(options, n_states), std::vector<bool>(static_cast<std::size_t>(n_states), false));
}

Mdp gen_chain(int n_states, const ChainOptions& options) {
  if (n_states < 2) throw std::invalid_argument("gen_chain: need at least 2 states");
  const int n_actions = 2;
  const int goal = n_states - 1;
  RowMatrix transition = RowMatrix::Zero(n_states * n_actions, n_states);
  Eigen::VectorXd reward = Eigen::VectorXd::Zero(n_states * n_actions);
  for (int x = 0; x < n_states; ++x) {
    const int left = x * n_actions + kChainLeft;
    const int right = x * n_actions + kChainRight;
    if (x == goal) {
      transition(left, x) = 1.0;
      transition(right, x) = 1.0;
      continue;
    }
    transition(left, x == 0 ? 0 : x - 1) = 1.0;
    reward(left) = options.left_reward;
    transition(right, x + 1) = 1.0;
    reward(right) = x + 1 == goal ? options.goal_reward : options.right_reward;
  }
  Eigen::VectorXd initial = Eigen::VectorXd::Constant(n_states, 1.0 / goal);
  initial(goal) = 0.0;
  std::vector<bool> terminal(static_cast<std::size_t>(n_states), false);
  terminal.back() = true;
  return Mdp(n_states, n_actions, std::move(transition), std::move(reward), options.gamma,
             std::move(initial), std::move(terminal));
}

}  // namespace oplab
