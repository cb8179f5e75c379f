#include "oplab/operators.hpp"

#include "oplab/dynamic_programming.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace oplab {

namespace {

AffineOperator make_operator(const Mdp& mdp, const UpdateRuleSpec& rule, Eigen::MatrixXd linear,
                             Eigen::VectorXd offset) {
  AffineOperator op;
  op.linear_part = std::move(linear);
  op.offset = std::move(offset);
  op.gamma = mdp.gamma();
  op.n_states = mdp.n_states();
  op.n_actions = mdp.n_actions();
  op.rule = rule;
  return op;
}

void check_importance_support(const Mdp& mdp, const Policy& target, const Policy& behaviour) {
  for (int x = 0; x < mdp.n_states(); ++x) {
    if (mdp.is_terminal(x)) continue;
    for (int a = 0; a < mdp.n_actions(); ++a) {
      if (target(x, a) > 0.0 && behaviour(x, a) == 0.0) {
        throw std::invalid_argument("importance weighting: behaviour probability is zero where the target is positive (state " +
                                    std::to_string(x) + ", action " + std::to_string(a) + ")");
      }
    }
  }
}

// Entries mu(a'|x') c(x', a') laid out like policy_matrix.
Eigen::MatrixXd weighted_behaviour(const Policy& behaviour, const Eigen::VectorXd& c) {
  Eigen::MatrixXd weighted = policy_matrix(behaviour);
  for (Eigen::Index j = 0; j < weighted.cols(); ++j) weighted.col(j) *= c(j);
  return weighted;
}

// (I - gamma P_c) over the given transition matrix with coefficients c.
Eigen::MatrixXd trace_system(const Eigen::MatrixXd& p, const Policy& behaviour,
                             const Eigen::VectorXd& c, double gamma) {
  const Eigen::Index n = p.rows();
  return Eigen::MatrixXd::Identity(n, n) - gamma * (p * weighted_behaviour(behaviour, c));
}

AffineOperator trace_operator(const Mdp& mdp, const UpdateRuleSpec& rule, const Policy& target,
                              const Policy& behaviour) {
  const Policy mixed = mixture(target, behaviour, rule.alpha);
  const Eigen::VectorXd c = trace_coefficients(rule, target, behaviour);
  const Eigen::MatrixXd p = bootstrap_transition(mdp);
  const Eigen::MatrixXd system = trace_system(p, behaviour, c, mdp.gamma());
  // pi_alpha(a'|x') - mu(a'|x') c(x', a') is entrywise nonnegative.
  const Eigen::MatrixXd rhs =
      mdp.gamma() * (p * (policy_matrix(mixed) - weighted_behaviour(behaviour, c)));
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  return make_operator(mdp, rule, lu.solve(rhs), lu.solve(mdp.reward()));
}

}  // namespace

QTable AffineOperator::apply(const QTable& q) const {
  if (q.values.size() != offset.size()) throw std::invalid_argument("AffineOperator: Q-table size mismatch");
  return {n_states, n_actions, linear_part * q.values + offset};
}

AffineOperator one_step_operator(const Mdp& mdp, const Policy& policy) {
  return make_operator(mdp, UpdateRuleSpec::uncorrected(1), mdp.gamma() * pair_transition(mdp, policy),
                       mdp.reward());
}

AffineOperator compose(const AffineOperator& outer, const AffineOperator& inner) {
  if (outer.linear_part.cols() != inner.linear_part.rows()) {
    throw std::invalid_argument("compose: dimension mismatch");
  }
  AffineOperator op = outer;
  op.linear_part = outer.linear_part * inner.linear_part;
  op.offset = outer.linear_part * inner.offset + outer.offset;
  return op;
}

Eigen::VectorXd trace_coefficients(const UpdateRuleSpec& rule, const Policy& target,
                                   const Policy& behaviour) {
  rule.validate();
  if (!rule.trace_based()) throw std::invalid_argument("trace_coefficients: not a trace rule");
  const int ns = target.n_states();
  const int na = target.n_actions();
  Eigen::VectorXd c(ns * na);
  for (int x = 0; x < ns; ++x) {
    for (int a = 0; a < na; ++a) {
      const double pi = target(x, a);
      const double mu = behaviour(x, a);
      double coeff;
      if (rule.kind == RuleKind::Retrace) {
        const double clipped = mu > 0.0 ? std::min(1.0, pi / mu) : 1.0;
        coeff = (1.0 - rule.alpha) + rule.alpha * clipped;
      } else {
        coeff = rule.alpha * pi + (1.0 - rule.alpha) * mu;
      }
      c(x * na + a) = rule.lambda * coeff;
    }
  }
  return c;
}

AffineOperator build_operator(const Mdp& mdp, const UpdateRuleSpec& rule, const Policy& target,
                              const Policy& behaviour) {
  rule.validate();
  check_dimensions(mdp, target);
  check_dimensions(mdp, behaviour);
  AffineOperator op;
  switch (rule.kind) {
    case RuleKind::NStepUncorrected: {
      const AffineOperator step_mu = one_step_operator(mdp, behaviour);
      op = one_step_operator(mdp, target);
      for (int i = 1; i < rule.n; ++i) op = compose(step_mu, op);
      break;
    }
    case RuleKind::NStepImportanceWeighted: {
      check_importance_support(mdp, target, behaviour);
      const AffineOperator step_pi = one_step_operator(mdp, target);
      op = step_pi;
      for (int i = 1; i < rule.n; ++i) op = compose(step_pi, op);
      break;
    }
    case RuleKind::Retrace:
    case RuleKind::TreeBackup:
      op = trace_operator(mdp, rule, target, behaviour);
      break;
  }
  op.rule = rule;
  op.target = target;
  op.behaviour = behaviour;
  return op;
}

double sup_contraction(const AffineOperator& op) {
  return op.linear_part.cwiseAbs().rowwise().sum().maxCoeff();
}

ContractionProfile contraction_profile(const AffineOperator& op, const StateActionDist& nu) {
  if (nu.weights.size() != op.offset.size()) {
    throw std::invalid_argument("contraction_profile: distribution size mismatch");
  }
  ContractionProfile profile;
  profile.per_pair = op.linear_part.cwiseAbs().rowwise().sum();
  profile.sup_rate = profile.per_pair.maxCoeff();
  profile.nu_avg = nu.weights.dot(profile.per_pair);
  return profile;
}

QTable fixed_point(const AffineOperator& op) {
  if (!(sup_contraction(op) < 1.0)) throw std::domain_error("fixed_point: operator is not contractive");
  const Eigen::Index n = op.offset.size();
  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - op.linear_part;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  Eigen::VectorXd q = lu.solve(op.offset);
  q += lu.solve(op.offset - system * q);
  return {op.n_states, op.n_actions, std::move(q)};
}

double fixed_point_bias(const AffineOperator& op, const Mdp& mdp, const Policy& target) {
  return (exact_q(mdp, target).values - fixed_point(op).values).norm();
}

Eigen::VectorXd retrace_contraction_rates(const Mdp& mdp, const Policy& target,
                                          const Policy& behaviour, double alpha, double lambda) {
  check_dimensions(mdp, target);
  check_dimensions(mdp, behaviour);
  Eigen::VectorXd c = trace_coefficients(UpdateRuleSpec::retrace(alpha, lambda), target, behaviour);
  for (int x = 0; x < mdp.n_states(); ++x) {
    if (!mdp.is_terminal(x)) continue;
    for (int a = 0; a < mdp.n_actions(); ++a) c(mdp.pair_index(x, a)) = 1.0;
  }
  const Eigen::MatrixXd system = trace_system(Eigen::MatrixXd(mdp.transition()), behaviour, c, mdp.gamma());
  // gamma (I - gamma P_c)^{-1} P^mu (1 - c): zero exactly when every c is 1
  Eigen::VectorXd shortfall(mdp.n_states());
  for (int y = 0; y < mdp.n_states(); ++y) {
    double w = 0.0;
    for (int b = 0; b < mdp.n_actions(); ++b) w += behaviour(y, b) * (1.0 - c(mdp.pair_index(y, b)));
    shortfall(y) = w;
  }
  const Eigen::VectorXd rhs = mdp.gamma() * (mdp.transition() * shortfall);
  return system.partialPivLu().solve(rhs);
}

double averaged_contraction(const Mdp& mdp, const Policy& target, const Policy& behaviour,
                            double alpha, const StateActionDist& nu) {
  const AffineOperator op = build_operator(mdp, UpdateRuleSpec::retrace(alpha), target, behaviour);
  return contraction_profile(op, nu).nu_avg;
}

double solve_alpha_for_rate(const Mdp& mdp, const Policy& target, const Policy& behaviour,
                            const StateActionDist& nu, double rate, double tol) {
  if (rate >= averaged_contraction(mdp, target, behaviour, 1.0, nu)) return 1.0;
  if (rate <= averaged_contraction(mdp, target, behaviour, 0.0, nu)) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (averaged_contraction(mdp, target, behaviour, mid, nu) < rate) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

bool distinguishable(const Mdp& mdp, const Policy& pi1, const Policy& pi2, const Policy& mu,
                     StateAction start, double tol) {
  check_dimensions(mdp, pi1);
  check_dimensions(mdp, pi2);
  check_dimensions(mdp, mu);
  std::vector<bool> seen(static_cast<std::size_t>(mdp.n_states()), false);
  for (int next = 0; next < mdp.n_states(); ++next) {
    if (mdp.transition(start.state, start.action, next) <= 0.0) continue;
    for (int a = 0; a < mdp.n_actions(); ++a) {
      if (mu(next, a) <= 0.0) continue;
      const StateActionDist d = discounted_visitation(mdp, mu, {next, a});
      for (int x = 0; x < mdp.n_states(); ++x) {
        if (d.weights.segment(x * mdp.n_actions(), mdp.n_actions()).sum() > 1e-14) {
          seen[static_cast<std::size_t>(x)] = true;
        }
      }
    }
  }
  for (int x = 0; x < mdp.n_states(); ++x) {
    if (!seen[static_cast<std::size_t>(x)] || mdp.is_terminal(x)) continue;
    if ((pi1.probs().row(x) - pi2.probs().row(x)).cwiseAbs().maxCoeff() > tol) return true;
  }
  return false;
}

bool unique_greedy(const QTable& q, double margin) {
  for (int x = 0; x < q.n_states; ++x) {
    const Eigen::VectorXd row = q.values.segment(x * q.n_actions, q.n_actions);
    int best = 0;
    row.maxCoeff(&best);
    for (int a = 0; a < q.n_actions; ++a) {
      if (a != best && row(best) - row(a) <= margin) return false;
    }
  }
  return true;
}

AlphaSearchResult search_alpha(const Mdp& mdp, const Policy& target, const Policy& behaviour) {
  const Policy want = greedy(exact_q(mdp, target));
  auto rate_if_match = [&](double alpha) -> std::optional<double> {
    const AffineOperator op = build_operator(mdp, UpdateRuleSpec::retrace(alpha), target, behaviour);
    if (!(greedy(fixed_point(op)) == want)) return std::nullopt;
    return sup_contraction(op);
  };
  AlphaSearchResult result;
  result.sup_rate_at_one = sup_contraction(build_operator(mdp, UpdateRuleSpec::retrace(1.0), target, behaviour));
  result.sup_rate = result.sup_rate_at_one;
  std::vector<double> candidates;
  for (int i = 0; i < 20; ++i) candidates.push_back(0.05 * i);
  for (int k = 5; k <= 40; ++k) candidates.push_back(1.0 - std::ldexp(1.0, -k));
  for (double alpha : candidates) {
    if (const auto rate = rate_if_match(alpha)) {
      result.alpha = alpha;
      result.sup_rate = *rate;
      result.found = true;
      break;
    }
  }
  return result;
}

}  // namespace oplab
