#pragma once

#include "oplab/mdp.hpp"
#include "oplab/rng.hpp"
#include "oplab/trajectory.hpp"

#include <optional>
#include <string>
#include <vector>

namespace oplab {

// 1 / (1 + exp(-phi)).
double alpha_of(double phi);
// Inverse of alpha_of on (0, 1).
double phi_of(double alpha);

// Per-trajectory estimate of the alpha-Retrace contraction rate
//
//   1 - (1 - gamma) sum_{t=0}^{T} gamma^t prod_{s=1}^{t} c_s,
//   c_s = (1 - alpha) + alpha min(1, pi(a_s|x_s) / mu(a_s|x_s)).
//
// Without truncation the infinite tail is closed with the trace frozen,
// adding (prod c) gamma^(T+1) / (1 - gamma). After termination this is exact,
// so the estimate is unbiased for the exact rate; on a rollout cut at the
// horizon the error is at most gamma^(T+1). With a truncation N the sum stops
// at t = N (steps after termination count with c = 1). Throws std::invalid_argument when the
// behaviour gives an observed action probability 0.
double contraction_estimate(const Trajectory& traj, double alpha, const Policy& target,
                            const Policy& behaviour, double gamma,
                            std::optional<int> truncation = std::nullopt);

// eps_k = scale / (k + 1)^exponent.
struct StepSchedule {
  double scale = 0.5;
  double exponent = 0.7;

  double operator()(long k) const;
};

inline constexpr double kPhiLimit = 20.0;

struct CtraceState {
  double phi = 0.0;
  double target_rate = 0.0;
  double gamma = 0.9;
  StepSchedule schedule;
  long iteration = 0;
  long clamp_events = 0;

  double alpha() const { return alpha_of(phi); }
  // max(target_rate, gamma^N) under truncation N, else target_rate.
  double effective_target(std::optional<int> truncation = std::nullopt) const;
};

// phi <- phi - eps_k (c_hat - target), clamped to [-20, 20].
CtraceState rm_step(const CtraceState& state, double c_hat, std::optional<int> truncation = std::nullopt);

struct CtraceEvalConfig {
  double target_rate = 0.0;
  StepSchedule schedule;
  // Step sizes for the Q updates; the phi schedule is used when unset.
  std::optional<StepSchedule> q_schedule;
  long n_episodes = 10000;
  // Episodes are cut after this many steps.
  int max_episode_length = 10000;
  // Use the truncated estimator and target with this N.
  std::optional<int> truncation;
  double phi0 = 0.0;
  // Write a log row every log_every episodes (and for the last one).
  long log_every = 1;
  RewardNoise noise;
};

struct CtraceLogRow {
  long episode = 0;
  double phi = 0.0;
  double alpha = 0.0;
  double c_hat = 0.0;
  double exact_c_nu = 0.0;
  double q_error_inf = 0.0;
};

struct CtraceResult {
  std::vector<CtraceLogRow> log;
  CtraceState state;
  QTable q;
  // Offline root of C_nu(alpha) = target_rate, and the value the Q error is
  // measured against.
  double alpha_star = 0.0;
  double q_star_norm_inf = 0.0;
  double c_nu_at_one = 0.0;
  // Set when C_nu(1) < target_rate, so no root exists.
  std::optional<std::string> warning;
};

// Episode k: roll out the behaviour from the initial distribution, estimate
// the contraction at alpha(phi_k), apply alpha(phi_k)-Retrace updates at every
// visited pair with step eps_k, then take the Robbins-Monro step. nu is the
// initial distribution times the behaviour. Episode k draws from
// rng.derive(k).
CtraceResult ctrace_eval_loop(const Mdp& mdp, const Policy& target, const Policy& behaviour,
                              const CtraceEvalConfig& cfg, RngStream rng);

}  // namespace oplab
