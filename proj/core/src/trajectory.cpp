#include "oplab/trajectory.hpp"

#include <algorithm>
#include <span>
#include <stdexcept>

namespace oplab {

double RewardNoise::draw(int pair, RngStream& rng) const {
  if (kind == Kind::None) return 0.0;
  const double s = scale.size() == 1 ? scale.front() : scale.at(static_cast<std::size_t>(pair));
  if (kind == Kind::Gaussian) return s * rng.normal();
  return rng.uniform() < 0.5 ? -s : s;
}

Trajectory sample_trajectory(const Mdp& mdp, const Policy& behaviour,
                             std::optional<StateAction> start, int horizon, RngStream& rng,
                             const RewardNoise& noise) {
  if (horizon < 1) throw std::invalid_argument("sample_trajectory: horizon must be at least 1");
  check_dimensions(mdp, behaviour);
  const int na = mdp.n_actions();

  // Behaviour rows are stored column-major; copy each row before sampling.
  std::vector<double> row(static_cast<std::size_t>(na));
  const auto sample_action = [&](int x) {
    for (int a = 0; a < na; ++a) row[static_cast<std::size_t>(a)] = behaviour(x, a);
    return rng.categorical(row);
  };

  Trajectory traj;
  traj.horizon_cap = horizon;
  traj.steps.reserve(static_cast<std::size_t>(std::min(horizon, 256)));
  int x;
  int a;
  if (start) {
    x = start->state;
    a = start->action;
    if (x < 0 || x >= mdp.n_states() || a < 0 || a >= na) {
      throw std::invalid_argument("sample_trajectory: start pair out of range");
    }
  } else {
    const Eigen::VectorXd& init = mdp.initial_dist();
    x = rng.categorical(std::span<const double>(init.data(), static_cast<std::size_t>(init.size())));
    a = sample_action(x);
  }

  const RowMatrix& p = mdp.transition();
  const auto ns = static_cast<std::size_t>(mdp.n_states());
  for (;;) {
    const int pair = mdp.pair_index(x, a);
    if (mdp.is_terminal(x)) {
      traj.steps.push_back({x, a, 0.0});
      traj.final_state = x;
      traj.terminated = true;
      break;
    }
    const double r = mdp.reward()(pair) + noise.draw(pair, rng);
    traj.steps.push_back({x, a, r});
    const int next = rng.categorical(std::span<const double>(p.row(pair).data(), ns));
    traj.final_state = next;
    if (mdp.is_terminal(next)) {
      traj.terminated = true;
      break;
    }
    if (static_cast<int>(traj.steps.size()) >= horizon) break;
    x = next;
    a = sample_action(x);
  }
  return traj;
}

}  // namespace oplab
