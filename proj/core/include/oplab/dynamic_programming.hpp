#pragma once

#include "oplab/mdp.hpp"

namespace oplab {

// P with transitions out of and into terminal states removed: bootstrap
// values at terminal states are treated as 0 everywhere.
Eigen::MatrixXd bootstrap_transition(const Mdp& mdp);

// n_states x n_pairs matrix mapping Q to the policy's state values.
Eigen::MatrixXd policy_matrix(const Policy& policy);

// State-action transition matrix P^pi used by the evaluation operators.
Eigen::MatrixXd pair_transition(const Mdp& mdp, const Policy& policy);

// (T^pi Q)(x, a) = r(x, a) + gamma * sum P(x'|x, a) pi(a'|x') Q(x', a').
QTable bellman_op(const Mdp& mdp, const Policy& policy, const QTable& q);

// Q^pi from the direct solve of (I - gamma P^pi) Q = r.
QTable exact_q(const Mdp& mdp, const Policy& policy);

// V(x) = sum_a pi(a|x) Q(x, a).
Eigen::VectorXd state_values(const Policy& policy, const QTable& q);

// Deterministic greedy policy from value iteration run until successive
// iterates differ by at most tol in sup norm. Ties go to the lowest action.
Policy optimal_policy(const Mdp& mdp, double tol = 1e-12);

// Point mass on the first maximizing action of each row.
Policy greedy(const QTable& q);

// alpha * pi + (1 - alpha) * mu, row-wise.
Policy mixture(const Policy& pi, const Policy& mu, double alpha);

// (1 - epsilon) * greedy(q) + epsilon * uniform.
Policy epsilon_greedy(const QTable& q, double epsilon);

// (1 - gamma) sum_t gamma^t Pr((X_t, A_t) = (x, a)) from the given start pair,
// following the policy through the absorbing chain.
StateActionDist discounted_visitation(const Mdp& mdp, const Policy& policy, StateAction start);

}  // namespace oplab
