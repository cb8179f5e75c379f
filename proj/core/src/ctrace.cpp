#include "oplab/ctrace.hpp"

#include "oplab/dynamic_programming.hpp"
#include "oplab/operators.hpp"
#include "oplab/targets.hpp"
#include "oplab/update_rule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace oplab {

double alpha_of(double phi) {
  if (phi >= 0.0) return 1.0 / (1.0 + std::exp(-phi));
  const double e = std::exp(phi);
  return e / (1.0 + e);
}

double phi_of(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("phi_of: alpha must lie in (0, 1)");
  return std::log(alpha) - std::log1p(-alpha);
}

double contraction_estimate(const Trajectory& traj, double alpha, const Policy& target,
                            const Policy& behaviour, double gamma, std::optional<int> truncation) {
  if (traj.steps.empty()) throw std::invalid_argument("contraction_estimate: empty trajectory");
  if (truncation && *truncation < 0) throw std::invalid_argument("contraction_estimate: negative truncation");
  const std::size_t last =
      truncation ? std::min<std::size_t>(static_cast<std::size_t>(*truncation), traj.size() - 1)
                 : traj.size() - 1;
  // Summed as (1 - gamma) sum_t gamma^t (1 - trace_t), so unit traces give exactly 0.
  double trace = 1.0;
  double discount = 1.0;
  double acc = 0.0;
  for (std::size_t t = 1; t <= last; ++t) {
    const Step& s = traj.steps[t];
    const double mu = behaviour(s.state, s.action);
    if (mu <= 0.0) throw std::invalid_argument("contraction_estimate: behaviour probability 0 on observed action");
    const double clipped = std::min(1.0, target(s.state, s.action) / mu);
    trace *= (1.0 - alpha) + alpha * clipped;
    discount *= gamma;
    acc += (1.0 - gamma) * discount * (1.0 - trace);
  }
  if (truncation) {
    // Steps past termination keep the trace frozen; everything past N counts
    // as a zero trace.
    double beyond = discount * gamma;
    if (traj.terminated && static_cast<std::size_t>(*truncation) > last) {
      const double frozen = std::pow(gamma, *truncation - static_cast<int>(last));
      acc += (1.0 - trace) * discount * gamma * (1.0 - frozen);
      beyond *= frozen;
    }
    return acc + beyond;
  }
  // Frozen-trace tail. Exact after termination; for a cut rollout it is off
  // by at most gamma^(T+1), and exact whenever the remaining traces are 1.
  return acc + (1.0 - trace) * discount * gamma;
}

double StepSchedule::operator()(long k) const {
  return scale / std::pow(static_cast<double>(k) + 1.0, exponent);
}

double CtraceState::effective_target(std::optional<int> truncation) const {
  if (!truncation) return target_rate;
  return std::max(target_rate, std::pow(gamma, *truncation));
}

CtraceState rm_step(const CtraceState& state, double c_hat, std::optional<int> truncation) {
  CtraceState next = state;
  next.phi = state.phi - state.schedule(state.iteration) * (c_hat - state.effective_target(truncation));
  if (next.phi > kPhiLimit || next.phi < -kPhiLimit) {
    next.phi = std::clamp(next.phi, -kPhiLimit, kPhiLimit);
    ++next.clamp_events;
  }
  ++next.iteration;
  return next;
}

CtraceResult ctrace_eval_loop(const Mdp& mdp, const Policy& target, const Policy& behaviour,
                              const CtraceEvalConfig& cfg, RngStream rng) {
  check_dimensions(mdp, target);
  check_dimensions(mdp, behaviour);
  if (cfg.n_episodes < 0 || cfg.max_episode_length < 1 || cfg.log_every < 1) {
    throw std::invalid_argument("ctrace_eval_loop: bad episode settings");
  }
  const StateActionDist nu = StateActionDist::initial_pairs(mdp, behaviour);
  CtraceResult result;
  result.c_nu_at_one = averaged_contraction(mdp, target, behaviour, 1.0, nu);
  if (result.c_nu_at_one < cfg.target_rate) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "target rate %.6g exceeds C_nu(1) = %.6g; alpha will drift to 1",
                  cfg.target_rate, result.c_nu_at_one);
    result.warning = buf;
  }
  result.alpha_star = solve_alpha_for_rate(mdp, target, behaviour, nu, cfg.target_rate);
  const Eigen::VectorXd q_star = exact_q(mdp, mixture(target, behaviour, result.alpha_star)).values;
  result.q_star_norm_inf = q_star.lpNorm<Eigen::Infinity>();

  CtraceState state;
  state.phi = std::clamp(cfg.phi0, -kPhiLimit, kPhiLimit);
  state.target_rate = cfg.target_rate;
  state.gamma = mdp.gamma();
  state.schedule = cfg.schedule;
  const StepSchedule q_schedule = cfg.q_schedule.value_or(cfg.schedule);

  QTable q(mdp.n_states(), mdp.n_actions());
  std::vector<double> targets;
  for (long k = 0; k < cfg.n_episodes; ++k) {
    RngStream episode_rng = rng.derive(static_cast<std::uint64_t>(k));
    const Trajectory traj =
        sample_trajectory(mdp, behaviour, std::nullopt, cfg.max_episode_length, episode_rng, cfg.noise);
    const double alpha = state.alpha();
    const double c_hat = contraction_estimate(traj, alpha, target, behaviour, mdp.gamma(), cfg.truncation);

    const TargetEvaluator evaluate(UpdateRuleSpec::retrace(alpha), target, behaviour, mdp.gamma());
    evaluate.suffix_targets(q, traj, targets);
    const double step = q_schedule(k);
    for (std::size_t t = 0; t < traj.size(); ++t) {
      const Step& s = traj.steps[t];
      q(s.state, s.action) += step * (targets[t] - q(s.state, s.action));
    }
    state = rm_step(state, c_hat, cfg.truncation);

    if ((k + 1) % cfg.log_every == 0 || k + 1 == cfg.n_episodes) {
      CtraceLogRow row;
      row.episode = k + 1;
      row.phi = state.phi;
      row.alpha = state.alpha();
      row.c_hat = c_hat;
      row.exact_c_nu = averaged_contraction(mdp, target, behaviour, row.alpha, nu);
      row.q_error_inf = (q.values - q_star).lpNorm<Eigen::Infinity>();
      result.log.push_back(row);
    }
  }
  result.state = state;
  result.q = std::move(q);
  return result;
}

}  // namespace oplab
