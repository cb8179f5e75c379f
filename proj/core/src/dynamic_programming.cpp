#include "oplab/dynamic_programming.hpp"

#include <cmath>
#include <stdexcept>

namespace oplab {

Eigen::MatrixXd bootstrap_transition(const Mdp& mdp) {
  Eigen::MatrixXd p = mdp.transition();
  for (int x = 0; x < mdp.n_states(); ++x) {
    if (!mdp.is_terminal(x)) continue;
    p.col(x).setZero();
    for (int a = 0; a < mdp.n_actions(); ++a) p.row(mdp.pair_index(x, a)).setZero();
  }
  return p;
}

Eigen::MatrixXd policy_matrix(const Policy& policy) {
  const int n_states = policy.n_states();
  const int n_actions = policy.n_actions();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_states, n_states * n_actions);
  for (int x = 0; x < n_states; ++x) {
    for (int a = 0; a < n_actions; ++a) m(x, x * n_actions + a) = policy(x, a);
  }
  return m;
}

Eigen::MatrixXd pair_transition(const Mdp& mdp, const Policy& policy) {
  check_dimensions(mdp, policy);
  return bootstrap_transition(mdp) * policy_matrix(policy);
}

QTable bellman_op(const Mdp& mdp, const Policy& policy, const QTable& q) {
  check_dimensions(mdp, q);
  const Eigen::VectorXd out = mdp.reward() + mdp.gamma() * (pair_transition(mdp, policy) * q.values);
  return {mdp.n_states(), mdp.n_actions(), out};
}

QTable exact_q(const Mdp& mdp, const Policy& policy) {
  const int n = mdp.n_pairs();
  const Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(n, n) - mdp.gamma() * pair_transition(mdp, policy);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  Eigen::VectorXd q = lu.solve(mdp.reward());
  // One round of iterative refinement keeps the Bellman residual near machine precision.
  q += lu.solve(mdp.reward() - system * q);
  if (!q.allFinite()) throw std::runtime_error("exact_q: singular evaluation system");
  return {mdp.n_states(), mdp.n_actions(), std::move(q)};
}

Eigen::VectorXd state_values(const Policy& policy, const QTable& q) {
  return policy_matrix(policy) * q.values;
}

Policy optimal_policy(const Mdp& mdp, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("optimal_policy: tolerance must be positive");
  const Eigen::MatrixXd p = bootstrap_transition(mdp);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(mdp.n_states());
  QTable q(mdp.n_states(), mdp.n_actions());
  for (;;) {
    q.values = mdp.reward() + mdp.gamma() * (p * v);
    Eigen::VectorXd next(mdp.n_states());
    for (int x = 0; x < mdp.n_states(); ++x) {
      next(x) = q.values.segment(x * mdp.n_actions(), mdp.n_actions()).maxCoeff();
    }
    const double change = (next - v).cwiseAbs().maxCoeff();
    v = std::move(next);
    if (change <= tol) break;
  }
  q.values = mdp.reward() + mdp.gamma() * (p * v);
  return greedy(q);
}

Policy greedy(const QTable& q) {
  std::vector<int> actions(static_cast<std::size_t>(q.n_states));
  for (int x = 0; x < q.n_states; ++x) {
    int best = 0;
    for (int a = 1; a < q.n_actions; ++a) {
      if (q(x, a) > q(x, best)) best = a;
    }
    actions[static_cast<std::size_t>(x)] = best;
  }
  return Policy::deterministic(actions, q.n_actions);
}

Policy mixture(const Policy& pi, const Policy& mu, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("mixture: alpha outside [0, 1]");
  if (pi.n_states() != mu.n_states() || pi.n_actions() != mu.n_actions()) {
    throw std::invalid_argument("mixture: policy dimensions differ");
  }
  if (alpha == 1.0) return pi;
  if (alpha == 0.0) return mu;
  return Policy(mu.probs() + alpha * (pi.probs() - mu.probs()));
}

Policy epsilon_greedy(const QTable& q, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon_greedy: epsilon outside [0, 1]");
  return mixture(Policy::uniform(q.n_states, q.n_actions), greedy(q), epsilon);
}

StateActionDist discounted_visitation(const Mdp& mdp, const Policy& policy, StateAction start) {
  check_dimensions(mdp, policy);
  const int n = mdp.n_pairs();
  if (start.state < 0 || start.state >= mdp.n_states() || start.action < 0 ||
      start.action >= mdp.n_actions()) {
    throw std::invalid_argument("discounted_visitation: start pair out of range");
  }
  const Eigen::MatrixXd chain = Eigen::MatrixXd(mdp.transition()) * policy_matrix(policy);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(mdp.pair_index(start.state, start.action)) = 1.0 - mdp.gamma();
  const Eigen::MatrixXd system = (Eigen::MatrixXd::Identity(n, n) - mdp.gamma() * chain).transpose();
  Eigen::VectorXd d = system.partialPivLu().solve(rhs);
  // Clear round-off negatives; the solve is exact up to rounding.
  d = d.cwiseMax(0.0);
  d /= d.sum();
  return {mdp.n_states(), mdp.n_actions(), std::move(d)};
}

}  // namespace oplab
