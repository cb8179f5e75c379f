#include "oplab/mdp.hpp"

#include "oplab/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace oplab {

namespace {

void check_distribution(const Eigen::Ref<const Eigen::VectorXd>& row, double tol,
                        const std::string& what) {
  for (Eigen::Index i = 0; i < row.size(); ++i) {
    if (!(row(i) >= 0.0 && row(i) <= 1.0)) {
      throw std::invalid_argument(what + ": entry outside [0, 1]");
    }
  }
  if (std::abs(row.sum() - 1.0) > tol) throw std::invalid_argument(what + ": does not sum to 1");
}

}  // namespace

Mdp::Mdp(int n_states, int n_actions, RowMatrix transition, Eigen::VectorXd reward, double gamma,
         Eigen::VectorXd initial_dist, std::vector<bool> terminal)
    : n_states_(n_states),
      n_actions_(n_actions),
      transition_(std::move(transition)),
      reward_(std::move(reward)),
      gamma_(gamma),
      initial_dist_(std::move(initial_dist)),
      terminal_(std::move(terminal)) {
  if (n_states < 1 || n_actions < 1) throw std::invalid_argument("Mdp: dimensions must be positive");
  const int pairs = n_states * n_actions;
  if (transition_.rows() != pairs || transition_.cols() != n_states) {
    throw std::invalid_argument("Mdp: transition has wrong shape");
  }
  if (reward_.size() != pairs) throw std::invalid_argument("Mdp: reward has wrong size");
  if (initial_dist_.size() != n_states) throw std::invalid_argument("Mdp: initial_dist has wrong size");
  if (terminal_.size() != static_cast<std::size_t>(n_states)) {
    throw std::invalid_argument("Mdp: terminal mask has wrong size");
  }
  if (!(gamma_ >= 0.0 && gamma_ < 1.0)) throw std::invalid_argument("Mdp: gamma must lie in [0, 1)");
  for (int i = 0; i < pairs; ++i) {
    check_distribution(transition_.row(i).transpose(), kProbabilityTolerance,
                       "Mdp: transition row " + std::to_string(i));
    if (!std::isfinite(reward_(i))) throw std::invalid_argument("Mdp: reward is not finite");
  }
  check_distribution(initial_dist_, kProbabilityTolerance, "Mdp: initial_dist");
  for (int x = 0; x < n_states; ++x) {
    if (!terminal_[static_cast<std::size_t>(x)]) continue;
    for (int a = 0; a < n_actions; ++a) {
      if (transition_(pair_index(x, a), x) != 1.0 || reward_(pair_index(x, a)) != 0.0) {
        throw std::invalid_argument("Mdp: terminal state " + std::to_string(x) +
                                    " must be absorbing with zero reward");
      }
    }
  }
}

bool Mdp::episodic() const {
  for (bool t : terminal_) {
    if (t) return true;
  }
  return false;
}

double Mdp::r_max() const { return reward_.cwiseAbs().maxCoeff(); }

Mdp Mdp::with_gamma(double gamma) const {
  return Mdp(n_states_, n_actions_, transition_, reward_, gamma, initial_dist_, terminal_);
}

Mdp Mdp::with_initial_dist(Eigen::VectorXd initial_dist) const {
  return Mdp(n_states_, n_actions_, transition_, reward_, gamma_, std::move(initial_dist), terminal_);
}

Policy::Policy(Eigen::MatrixXd probs) : probs_(std::move(probs)) {
  if (probs_.rows() < 1 || probs_.cols() < 1) throw std::invalid_argument("Policy: empty table");
  for (Eigen::Index x = 0; x < probs_.rows(); ++x) {
    check_distribution(probs_.row(x).transpose(), kProbabilityTolerance,
                       "Policy: row " + std::to_string(x));
  }
}

Policy Policy::uniform(int n_states, int n_actions) {
  return Policy(Eigen::MatrixXd::Constant(n_states, n_actions, 1.0 / n_actions));
}

Policy Policy::deterministic(const std::vector<int>& actions, int n_actions) {
  Eigen::MatrixXd probs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(actions.size()), n_actions);
  for (std::size_t x = 0; x < actions.size(); ++x) {
    if (actions[x] < 0 || actions[x] >= n_actions) {
      throw std::invalid_argument("Policy::deterministic: action out of range");
    }
    probs(static_cast<Eigen::Index>(x), actions[x]) = 1.0;
  }
  return Policy(std::move(probs));
}

Policy Policy::dirichlet(int n_states, int n_actions, RngStream& rng) {
  if (n_states < 1 || n_actions < 1) throw std::invalid_argument("Policy::dirichlet: bad dimensions");
  Eigen::MatrixXd probs(n_states, n_actions);
  for (int x = 0; x < n_states; ++x) {
    for (int a = 0; a < n_actions; ++a) probs(x, a) = rng.exponential();
    probs.row(x) /= probs.row(x).sum();
  }
  return Policy(std::move(probs));
}

QTable::QTable(int n_states_, int n_actions_, double fill)
    : n_states(n_states_),
      n_actions(n_actions_),
      values(Eigen::VectorXd::Constant(n_states_ * n_actions_, fill)) {}

QTable::QTable(int n_states_, int n_actions_, Eigen::VectorXd values_)
    : n_states(n_states_), n_actions(n_actions_), values(std::move(values_)) {
  if (values.size() != n_states * n_actions) throw std::invalid_argument("QTable: wrong size");
}

double QTable::expected(int state, const Policy& policy) const {
  double total = 0.0;
  for (int a = 0; a < n_actions; ++a) total += policy(state, a) * (*this)(state, a);
  return total;
}

StateActionDist::StateActionDist(int n_states_, int n_actions_, Eigen::VectorXd weights_)
    : n_states(n_states_), n_actions(n_actions_), weights(std::move(weights_)) {
  if (weights.size() != n_states * n_actions) throw std::invalid_argument("StateActionDist: wrong size");
  if ((weights.array() < 0.0).any()) throw std::invalid_argument("StateActionDist: negative weight");
  if (std::abs(weights.sum() - 1.0) > 1e-10) {
    throw std::invalid_argument("StateActionDist: weights do not sum to 1");
  }
}

StateActionDist StateActionDist::uniform(int n_states, int n_actions) {
  const int pairs = n_states * n_actions;
  return {n_states, n_actions, Eigen::VectorXd::Constant(pairs, 1.0 / pairs)};
}

StateActionDist StateActionDist::initial_pairs(const Mdp& mdp, const Policy& behaviour) {
  check_dimensions(mdp, behaviour);
  Eigen::VectorXd w(mdp.n_pairs());
  for (int x = 0; x < mdp.n_states(); ++x) {
    for (int a = 0; a < mdp.n_actions(); ++a) {
      w(mdp.pair_index(x, a)) = mdp.initial_dist()(x) * behaviour(x, a);
    }
  }
  w /= w.sum();
  return {mdp.n_states(), mdp.n_actions(), std::move(w)};
}

void check_dimensions(const Mdp& mdp, const Policy& policy) {
  if (policy.n_states() != mdp.n_states() || policy.n_actions() != mdp.n_actions()) {
    throw std::invalid_argument("policy dimensions do not match the MDP");
  }
}

void check_dimensions(const Mdp& mdp, const QTable& q) {
  if (q.n_states != mdp.n_states() || q.n_actions != mdp.n_actions()) {
    throw std::invalid_argument("Q-table dimensions do not match the MDP");
  }
}

}  // namespace oplab
