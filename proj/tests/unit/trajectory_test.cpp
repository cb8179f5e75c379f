#include "oplab/generators.hpp"
#include "oplab/trajectory.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace oplab {
namespace {

TEST(Trajectory, AlwaysRightOnChain4) {
  const Mdp m = gen_chain(4);
  const Policy right = Policy::deterministic({1, 1, 1, 1}, 2);
  RngStream rng(0);
  const Trajectory t = sample_trajectory(m, right, StateAction{0, kChainRight}, 100, rng);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_TRUE(t.terminated);
  EXPECT_EQ(t.final_state, 3);
  const double rewards[] = {-1.0, -1.0, 50.0};
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(t.steps[static_cast<std::size_t>(i)].state, i);
    EXPECT_EQ(t.steps[static_cast<std::size_t>(i)].action, kChainRight);
    EXPECT_EQ(t.steps[static_cast<std::size_t>(i)].reward, rewards[i]);
  }
}

TEST(Trajectory, HorizonOneGivesOneStep) {
  RngStream rng(1);
  const Mdp m = gen_dirichlet_uniform(4, 2, rng);
  const Trajectory t = sample_trajectory(m, Policy::uniform(4, 2), std::nullopt, 1, rng);
  EXPECT_EQ(t.size(), 1u);
  EXPECT_FALSE(t.terminated);
  EXPECT_EQ(t.horizon_cap, 1);
  EXPECT_THROW(sample_trajectory(m, Policy::uniform(4, 2), std::nullopt, 0, rng), std::invalid_argument);
}

TEST(Trajectory, SameSeedSameRollout) {
  RngStream env(2);
  const Mdp m = gen_dirichlet_uniform(5, 3, env);
  RngStream a(7), b(7);
  const Trajectory x = sample_trajectory(m, Policy::uniform(5, 3), std::nullopt, 50, a);
  const Trajectory y = sample_trajectory(m, Policy::uniform(5, 3), std::nullopt, 50, b);
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(x.steps[i].state, y.steps[i].state);
    EXPECT_EQ(x.steps[i].action, y.steps[i].action);
  }
  EXPECT_EQ(x.final_state, y.final_state);
}

TEST(Trajectory, StatesFollowSupport) {
  const Mdp m = gen_chain(10);
  RngStream rng(3);
  for (int k = 0; k < 200; ++k) {
    const Trajectory t = sample_trajectory(m, Policy::uniform(10, 2), std::nullopt, 60, rng);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const Step& s = t.steps[i];
      ASSERT_GT(m.transition(s.state, s.action, t.next_state(i)), 0.0);
    }
    if (t.terminated) ASSERT_TRUE(m.is_terminal(t.final_state));
  }
}

TEST(Trajectory, StartInTerminalState) {
  const Mdp m = gen_chain(3);
  RngStream rng(4);
  const Trajectory t = sample_trajectory(m, Policy::uniform(3, 2), StateAction{2, 0}, 10, rng);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_TRUE(t.terminated);
  EXPECT_EQ(t.steps[0].reward, 0.0);
}

TEST(RewardNoise, GaussianMoments) {
  const RewardNoise noise = RewardNoise::gaussian(2.0);
  RngStream rng(5);
  double s = 0.0, s2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double z = noise.draw(0, rng);
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 4.0 * 2.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 4.0, 4.0 * 4.0 * std::sqrt(2.0 / n));
  EXPECT_EQ(RewardNoise{}.draw(0, rng), 0.0);
}

TEST(RewardNoise, PerPairScale) {
  RewardNoise noise = RewardNoise::rademacher(1.0);
  noise.scale = {0.0, 3.0};
  RngStream rng(6);
  EXPECT_EQ(noise.draw(0, rng), 0.0);
  EXPECT_EQ(std::abs(noise.draw(1, rng)), 3.0);
}

}  // namespace
}  // namespace oplab
