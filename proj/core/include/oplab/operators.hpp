#pragma once

#include "oplab/mdp.hpp"
#include "oplab/update_rule.hpp"

#include <optional>

namespace oplab {

// Exact matrix form T Q = A Q + b of an evaluation operator over
// state-action pairs.
struct AffineOperator {
  Eigen::MatrixXd linear_part;
  Eigen::VectorXd offset;
  double gamma = 0.0;
  int n_states = 0;
  int n_actions = 0;
  UpdateRuleSpec rule;
  std::optional<Policy> target;
  std::optional<Policy> behaviour;

  QTable apply(const QTable& q) const;
};

// T^pi.
AffineOperator one_step_operator(const Mdp& mdp, const Policy& policy);

// outer(inner(Q)).
AffineOperator compose(const AffineOperator& outer, const AffineOperator& inner);

// Expected-update operator of a rule evaluating `target` from data generated
// by `behaviour`:
//
//   uncorrected n-step      (T^mu)^(n-1) T^pi
//   importance-weighted     (T^pi)^n
//   Retrace / TreeBackup    Q + (I - gamma P_c)^-1 (T^{pi_alpha} Q - Q)
//
// where pi_alpha = alpha pi + (1 - alpha) mu and P_c has entries
// P(x'|x, a) mu(a'|x') c(x', a') with the rule's trace coefficient c.
//
// Throws std::invalid_argument for importance weighting when the behaviour
// assigns zero probability to an action the target takes at a non-terminal
// state.
AffineOperator build_operator(const Mdp& mdp, const UpdateRuleSpec& rule, const Policy& target,
                              const Policy& behaviour);

// Per-pair trace coefficient of a trace rule:
//   Retrace     lambda ((1 - alpha) + alpha min(1, pi / mu)), with min(1, pi/0) = 1
//   TreeBackup  lambda pi_alpha
Eigen::VectorXd trace_coefficients(const UpdateRuleSpec& rule, const Policy& target,
                                   const Policy& behaviour);

struct ContractionProfile {
  Eigen::VectorXd per_pair;
  double sup_rate = 0.0;
  double nu_avg = 0.0;
};

// Absolute row sums of the linear part: the exact sup-norm Lipschitz
// constant of each output coordinate.
ContractionProfile contraction_profile(const AffineOperator& op, const StateActionDist& nu);

// Largest absolute row sum.
double sup_contraction(const AffineOperator& op);

// Solves (I - A) Q = b. Throws std::domain_error if the operator is not a
// sup-norm contraction.
QTable fixed_point(const AffineOperator& op);

// || Q^target - fixed_point(op) ||_2.
double fixed_point_bias(const AffineOperator& op, const Mdp& mdp, const Policy& target);

// Closed form of the alpha-Retrace per-pair contraction rate,
//   1 - (1 - gamma) [(I - gamma P_c)^-1 1](x, a),
// on the absorbing chain, with traces frozen (c = 1) once a terminal state is
// reached. Agrees with contraction_profile of the Retrace operator.
Eigen::VectorXd retrace_contraction_rates(const Mdp& mdp, const Policy& target,
                                          const Policy& behaviour, double alpha,
                                          double lambda = 1.0);

// C_nu(alpha) for alpha-Retrace.
double averaged_contraction(const Mdp& mdp, const Policy& target, const Policy& behaviour,
                            double alpha, const StateActionDist& nu);

// Bisection for the alpha with averaged_contraction(alpha) = rate. Returns 1
// when rate >= C_nu(1) and 0 when rate <= C_nu(0).
double solve_alpha_for_rate(const Mdp& mdp, const Policy& target, const Policy& behaviour,
                            const StateActionDist& nu, double rate, double tol = 1e-13);

// Whether pi1 and pi2 differ at some non-terminal state visited with positive
// probability at a step t >= 1 after (x, a), following mu. Visits at t = 0
// never meet a trace coefficient, so they cannot change the contraction rate.
bool distinguishable(const Mdp& mdp, const Policy& pi1, const Policy& pi2, const Policy& mu,
                     StateAction start, double tol = 1e-12);

// Greedy actions of Q that beat the runner-up by more than margin everywhere.
bool unique_greedy(const QTable& q, double margin = 1e-9);

struct AlphaSearchResult {
  double alpha = 1.0;
  double sup_rate = 0.0;
  double sup_rate_at_one = 0.0;
  // A value below 1 with the greedy policy of Q^pi was found.
  bool found = false;
};

// Smallest alpha on the grid 0, 0.05, ..., 0.95 whose alpha-Retrace fixed
// point has the greedy policy of Q^pi; failing that, alpha = 1 - 2^-k for
// k = 5..40.
AlphaSearchResult search_alpha(const Mdp& mdp, const Policy& target, const Policy& behaviour);

}  // namespace oplab
