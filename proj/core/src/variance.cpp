#include "oplab/variance.hpp"

#include "oplab/operators.hpp"
#include "oplab/parallel.hpp"
#include "oplab/targets.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oplab {

double McConfig::truncation_bound(const Mdp& mdp) const {
  return std::pow(mdp.gamma(), horizon) * mdp.r_max() / (1.0 - mdp.gamma());
}

void McConfig::validate(const Mdp& mdp) const {
  if (n_trajectories < 1) throw std::invalid_argument("McConfig: n_trajectories must be positive");
  if (horizon < 1) throw std::invalid_argument("McConfig: horizon must be positive");
  if (tail == TailPolicy::Absorb && truncation_bound(mdp) > truncation_tolerance) {
    throw std::invalid_argument("McConfig: horizon too short for the truncation tolerance");
  }
}

VarianceEstimate summarize_squares(std::span<const double> squares) {
  VarianceEstimate est;
  est.n_samples = static_cast<long>(squares.size());
  if (squares.empty()) return est;
  double sum = 0.0;
  for (double v : squares) sum += v;
  const double mean = sum / static_cast<double>(squares.size());
  double ss = 0.0;
  for (double v : squares) ss += (v - mean) * (v - mean);
  est.mean_square = mean;
  if (squares.size() > 1) {
    const double n = static_cast<double>(squares.size());
    est.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return est;
}

VarianceEstimate variance(const Mdp& mdp, const UpdateRuleSpec& rule, const QTable& q,
                          const StateActionDist& nu, const Policy& target, const Policy& behaviour,
                          const McConfig& cfg) {
  if (rule.trace_based()) {
    cfg.validate(mdp);
  } else if (cfg.n_trajectories < 1) {
    throw std::invalid_argument("McConfig: n_trajectories must be positive");
  }
  check_dimensions(mdp, q);
  if (nu.weights.size() != mdp.n_pairs()) throw std::invalid_argument("variance: distribution size mismatch");
  const QTable expected = build_operator(mdp, rule, target, behaviour).apply(q);
  const TargetEvaluator evaluate(rule, target, behaviour, mdp.gamma());
  const int length = evaluate.rollout_length(cfg.horizon);
  const std::span<const double> weights(nu.weights.data(), static_cast<std::size_t>(nu.weights.size()));

  std::vector<double> squares(static_cast<std::size_t>(cfg.n_trajectories));
  parallel_for(squares.size(), cfg.jobs, [&](std::size_t k) {
    RngStream rng = cfg.rng.derive(k);
    const StateAction start = mdp.pair_of(rng.categorical(weights));
    const Trajectory traj = sample_trajectory(mdp, behaviour, start, length, rng, cfg.noise);
    const double diff = evaluate(q, traj) - expected(start.state, start.action);
    squares[k] = diff * diff;
  });
  VarianceEstimate est = summarize_squares(squares);
  if (rule.trace_based()) est.truncation_bound = cfg.truncation_bound(mdp);
  return est;
}

}  // namespace oplab
