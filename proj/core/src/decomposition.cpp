#include "oplab/decomposition.hpp"

#include "oplab/dynamic_programming.hpp"
#include "oplab/operators.hpp"
#include "oplab/parallel.hpp"
#include "oplab/targets.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oplab {

namespace {

// Root of a mean with its delta-method standard error.
std::pair<double, double> root_of(const VarianceEstimate& est) {
  const double root = std::sqrt(est.mean_square);
  const double se = root > 0.0 ? est.std_error / (2.0 * root) : std::sqrt(est.std_error);
  return {root, se};
}

}  // namespace

DecompositionReport decomposition_check(const Mdp& mdp, const UpdateRuleSpec& rule, const Policy& target,
                                        const Policy& behaviour, const QTable& q0, const McConfig& mc) {
  if (rule.trace_based()) {
    mc.validate(mdp);
  } else if (mc.n_trajectories < 1) {
    throw std::invalid_argument("decomposition_check: n_trajectories must be positive");
  }
  check_dimensions(mdp, q0);
  const AffineOperator op = build_operator(mdp, rule, target, behaviour);
  const double rate = sup_contraction(op);
  const QTable fixed = fixed_point(op);
  const Eigen::VectorXd truth = exact_q(mdp, target).values;
  const Eigen::VectorXd expected = op.apply(q0).values;

  const TargetEvaluator evaluate(rule, target, behaviour, mdp.gamma());
  const int length = evaluate.rollout_length(mc.horizon);
  const int pairs = mdp.n_pairs();

  std::vector<double> sup_errors(static_cast<std::size_t>(mc.n_trajectories));
  std::vector<double> sq_errors(sup_errors.size());
  std::vector<double> sq_noise(sup_errors.size());
  parallel_for(sup_errors.size(), mc.jobs, [&](std::size_t k) {
    Eigen::VectorXd table(pairs);
    for (int p = 0; p < pairs; ++p) {
      RngStream rng = mc.rng.derive(static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(pairs) +
                                    static_cast<std::uint64_t>(p));
      const Trajectory traj = sample_trajectory(mdp, behaviour, mdp.pair_of(p), length, rng, mc.noise);
      table(p) = evaluate(q0, traj);
    }
    sup_errors[k] = (table - truth).lpNorm<Eigen::Infinity>();
    sq_errors[k] = (table - truth).squaredNorm();
    sq_noise[k] = (table - expected).squaredNorm();
  });

  DecompositionReport r;
  r.replicates = mc.n_trajectories;
  const VarianceEstimate lhs = summarize_squares(sup_errors);
  const VarianceEstimate lhs_sq = summarize_squares(sq_errors);
  const VarianceEstimate noise = summarize_squares(sq_noise);
  const auto [root, root_se] = root_of(noise);
  const double distance = (q0.values - fixed.values).lpNorm<Eigen::Infinity>();

  r.lhs = lhs.mean_square;
  r.lhs_se = lhs.std_error;
  r.root_variance = root;
  r.root_variance_se = root_se;
  r.contraction_term = rate * distance;
  r.bias_term = (fixed.values - truth).norm();
  r.bias_inf = (fixed.values - truth).lpNorm<Eigen::Infinity>();
  r.rhs = r.root_variance + r.contraction_term + r.bias_term;
  r.slack = r.rhs - r.lhs;
  r.std_error = std::hypot(r.lhs_se, r.root_variance_se);
  r.holds = r.lhs <= r.rhs + 3.0 * r.std_error;

  r.lhs_squared = lhs_sq.mean_square;
  r.lhs_squared_se = lhs_sq.std_error;
  r.variance = noise.mean_square;
  r.variance_se = noise.std_error;
  r.rhs_squared = 3.0 * (r.variance + rate * rate * pairs * distance * distance + r.bias_term * r.bias_term);
  r.slack_squared = r.rhs_squared - r.lhs_squared;
  r.holds_squared = r.lhs_squared <= r.rhs_squared + 3.0 * std::hypot(r.lhs_squared_se, 3.0 * r.variance_se);
  return r;
}

}  // namespace oplab
