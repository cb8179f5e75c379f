#pragma once

#include <Eigen/Dense>

#include <vector>

namespace oplab {

class RngStream;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Tolerance for probability rows summing to one.
inline constexpr double kProbabilityTolerance = 1e-12;

struct StateAction {
  int state = 0;
  int action = 0;

  friend bool operator==(const StateAction&, const StateAction&) = default;
};

// A finite MDP with a dense transition tensor.
//
// transition() is the (n_states * n_actions) x n_states matrix whose row
// pair_index(x, a) is P(. | x, a). Terminal states are absorbing with zero
// reward for every action; the constructor rejects anything else.
class Mdp {
 public:
  Mdp(int n_states, int n_actions, RowMatrix transition, Eigen::VectorXd reward, double gamma,
      Eigen::VectorXd initial_dist, std::vector<bool> terminal);

  int n_states() const { return n_states_; }
  int n_actions() const { return n_actions_; }
  int n_pairs() const { return n_states_ * n_actions_; }
  int pair_index(int state, int action) const { return state * n_actions_ + action; }
  StateAction pair_of(int index) const { return {index / n_actions_, index % n_actions_}; }

  const RowMatrix& transition() const { return transition_; }
  double transition(int state, int action, int next) const {
    return transition_(pair_index(state, action), next);
  }
  const Eigen::VectorXd& reward() const { return reward_; }
  double reward(int state, int action) const { return reward_(pair_index(state, action)); }
  double gamma() const { return gamma_; }
  const Eigen::VectorXd& initial_dist() const { return initial_dist_; }
  const std::vector<bool>& terminal() const { return terminal_; }
  bool is_terminal(int state) const { return terminal_[static_cast<std::size_t>(state)]; }
  bool episodic() const;
  // Largest absolute reward.
  double r_max() const;

  Mdp with_gamma(double gamma) const;
  Mdp with_initial_dist(Eigen::VectorXd initial_dist) const;

 private:
  int n_states_;
  int n_actions_;
  RowMatrix transition_;
  Eigen::VectorXd reward_;
  double gamma_;
  Eigen::VectorXd initial_dist_;
  std::vector<bool> terminal_;
};

// Per-state action distributions, stored as an n_states x n_actions matrix.
class Policy {
 public:
  explicit Policy(Eigen::MatrixXd probs);

  static Policy uniform(int n_states, int n_actions);
  // Point mass on actions[x] in every state x.
  static Policy deterministic(const std::vector<int>& actions, int n_actions);
  // Each row an independent Dirichlet(1, ..., 1) draw.
  static Policy dirichlet(int n_states, int n_actions, RngStream& rng);

  int n_states() const { return static_cast<int>(probs_.rows()); }
  int n_actions() const { return static_cast<int>(probs_.cols()); }
  double operator()(int state, int action) const { return probs_(state, action); }
  const Eigen::MatrixXd& probs() const { return probs_; }

  friend bool operator==(const Policy& a, const Policy& b) { return a.probs_ == b.probs_; }

 private:
  Eigen::MatrixXd probs_;
};

// Action values indexed by pair_index(x, a).
struct QTable {
  int n_states = 0;
  int n_actions = 0;
  Eigen::VectorXd values;

  QTable() = default;
  QTable(int n_states, int n_actions, double fill = 0.0);
  QTable(int n_states, int n_actions, Eigen::VectorXd values);

  double operator()(int state, int action) const { return values(state * n_actions + action); }
  double& operator()(int state, int action) { return values(state * n_actions + action); }
  // Expected value of the row under a policy.
  double expected(int state, const Policy& policy) const;
};

// Nonnegative weights over state-action pairs summing to one.
struct StateActionDist {
  int n_states = 0;
  int n_actions = 0;
  Eigen::VectorXd weights;

  StateActionDist(int n_states, int n_actions, Eigen::VectorXd weights);

  double operator()(int state, int action) const { return weights(state * n_actions + action); }
  static StateActionDist uniform(int n_states, int n_actions);
  // Start state from the MDP's initial distribution, action from the policy.
  static StateActionDist initial_pairs(const Mdp& mdp, const Policy& behaviour);
};

void check_dimensions(const Mdp& mdp, const Policy& policy);
void check_dimensions(const Mdp& mdp, const QTable& q);

}  // namespace oplab
