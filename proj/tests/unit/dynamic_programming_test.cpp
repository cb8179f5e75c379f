#include "oplab/dynamic_programming.hpp"
#include "oplab/generators.hpp"
#include "oplab/trajectory.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace oplab {
namespace {

using testing::deterministic_mdp;

TEST(BellmanOp, SelfLoopFixedPoint) {
  const Mdp m = deterministic_mdp({{0}}, {{1.0}}, 0.9);
  const QTable q(1, 1, 10.0);
  EXPECT_NEAR(bellman_op(m, Policy::uniform(1, 1), q)(0, 0), 10.0, 1e-12);
}

TEST(BellmanOp, ZeroQGivesReward) {
  const Mdp m = gen_chain(3);
  const QTable out = bellman_op(m, Policy::uniform(3, 2), QTable(3, 2));
  EXPECT_EQ(out.values, m.reward());
}

TEST(BellmanOp, TerminalBootstrapIsZero) {
  const Mdp m = gen_chain(3);
  const QTable out = bellman_op(m, Policy::uniform(3, 2), QTable(3, 2, 7.0));
  EXPECT_DOUBLE_EQ(out(1, kChainRight), 50.0);
  EXPECT_DOUBLE_EQ(out(2, kChainRight), 0.0);
  EXPECT_DOUBLE_EQ(out(0, kChainRight), -1.0 + 0.9 * 7.0);
}

TEST(ExactQ, SingleState) {
  const Mdp m = deterministic_mdp({{0}}, {{1.0}}, 0.9);
  EXPECT_NEAR(exact_q(m, Policy::uniform(1, 1))(0, 0), 10.0, 1e-12);
}

TEST(ExactQ, ZeroGamma) {
  RngStream rng(3);
  const Mdp m = gen_dirichlet_uniform(4, 2, rng).with_gamma(0.0);
  EXPECT_LT((exact_q(m, Policy::uniform(4, 2)).values - m.reward()).norm(), 1e-15);
}

TEST(ExactQ, ChainMatchesIteration) {
  const Mdp m = gen_chain(20);
  const Policy pi = optimal_policy(m);
  const Eigen::VectorXd oracle = testing::iterate_q(m, pi);
  EXPECT_LT((exact_q(m, pi).values - oracle).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(ExactQ, ResidualOnRandomMdps) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto setup = testing::random_setup(s);
    const QTable q = exact_q(setup.mdp, setup.target);
    const QTable tq = bellman_op(setup.mdp, setup.target, q);
    ASSERT_LE((q.values - tq.values).lpNorm<Eigen::Infinity>(), 1e-10) << "seed " << s;
  }
}

TEST(OptimalPolicy, SingleState) {
  const Mdp m = deterministic_mdp({{0, 0}}, {{1.0, 0.0}}, 0.9);
  const Policy p = optimal_policy(m);
  EXPECT_EQ(p(0, 0), 1.0);
}

TEST(OptimalPolicy, ChainMovesRight) {
  const Mdp m = gen_chain(20);
  const Policy p = optimal_policy(m);
  const Eigen::VectorXd v_star = testing::iterate_v_star(m);
  for (int x = 0; x < 19; ++x) {
    // right from x reaches the goal after 19 - x steps; from x = 0 the -1s outweigh the discounted 50
    double right = m.reward(x, kChainRight), left = m.reward(x, kChainLeft);
    for (int y = 0; y < 20; ++y) {
      right += 0.9 * m.transition(x, kChainRight, y) * v_star(y);
      left += 0.9 * m.transition(x, kChainLeft, y) * v_star(y);
    }
    EXPECT_EQ(p(x, kChainRight), right > left ? 1.0 : 0.0) << x;
  }
  EXPECT_EQ(p(0, kChainLeft), 1.0);
  for (int x = 1; x < 19; ++x) EXPECT_EQ(p(x, kChainRight), 1.0) << x;
  const Eigen::VectorXd v = state_values(p, exact_q(m, p));
  EXPECT_LT((v - testing::iterate_v_star(m)).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(OptimalPolicy, BeatsEveryDeterministicPolicy) {
  for (int ns : {3, 4, 5, 6}) {
    const Mdp m = gen_chain(ns);
    const Eigen::VectorXd best = state_values(optimal_policy(m), exact_q(m, optimal_policy(m)));
    const int free = ns - 1;
    for (int code = 0; code < (1 << free); ++code) {
      std::vector<int> acts(static_cast<std::size_t>(ns), 0);
      for (int x = 0; x < free; ++x) acts[static_cast<std::size_t>(x)] = (code >> x) & 1;
      const Policy p = Policy::deterministic(acts, 2);
      const Eigen::VectorXd v = state_values(p, exact_q(m, p));
      ASSERT_TRUE(((best - v).array() >= -1e-10).all()) << "ns " << ns << " code " << code;
    }
  }
}

TEST(OptimalPolicy, GreedyOnItsOwnValues) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto setup = testing::random_setup(s, 6, 3);
    const Policy p = optimal_policy(setup.mdp);
    EXPECT_EQ(greedy(exact_q(setup.mdp, p)), p) << s;
  }
}

TEST(OptimalPolicy, RejectsBadTolerance) {
  EXPECT_THROW(optimal_policy(gen_chain(3), 0.0), std::invalid_argument);
}

TEST(Visitation, SelfLoop) {
  const Mdp m = deterministic_mdp({{0}}, {{0.0}}, 0.9);
  const auto d = discounted_visitation(m, Policy::uniform(1, 1), {0, 0});
  EXPECT_NEAR(d(0, 0), 1.0, 1e-15);
}

TEST(Visitation, TinyGamma) {
  RngStream rng(4);
  const Mdp m = gen_dirichlet_uniform(4, 2, rng).with_gamma(1e-12);
  const auto d = discounted_visitation(m, Policy::uniform(4, 2), {2, 1});
  EXPECT_NEAR(d(2, 1), 1.0, 1e-10);
}

TEST(Visitation, ChainAlwaysRight) {
  const Mdp m = gen_chain(4);
  const double g = m.gamma();
  const Policy right = Policy::deterministic({1, 1, 1, 1}, 2);
  const auto d = discounted_visitation(m, right, {0, kChainRight});
  EXPECT_NEAR(d(0, 1), (1 - g), 1e-12);
  EXPECT_NEAR(d(1, 1), (1 - g) * g, 1e-12);
  EXPECT_NEAR(d(2, 1), (1 - g) * g * g, 1e-12);
  EXPECT_NEAR(d(3, 1), std::pow(g, 3), 1e-12);
  EXPECT_NEAR(d.weights.sum(), 1.0, 1e-12);
}

TEST(Visitation, MatchesMonteCarloOnChain6) {
  const Mdp m = gen_chain(6);
  const Policy mu = Policy::uniform(6, 2);
  const StateAction start{2, kChainRight};
  const auto d = discounted_visitation(m, mu, start);
  // Geometric stopping time: the pair at a Geometric(1 - gamma) step is one
  // draw from the visitation distribution.
  const int n = 100000;
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(m.n_pairs());
  RngStream rng(8);
  for (int k = 0; k < n; ++k) {
    RngStream r = rng.derive(static_cast<std::uint64_t>(k));
    int stop = 0;
    while (r.uniform() < m.gamma()) ++stop;
    const Trajectory t = sample_trajectory(m, mu, start, stop + 1, r);
    int x = t.steps.back().state;
    int a = t.steps.back().action;
    if (static_cast<int>(t.size()) < stop + 1) {
      // absorbed: the terminal state draws its action from mu
      x = t.final_state;
      a = r.categorical(std::vector<double>{mu(x, 0), mu(x, 1)});
    }
    counts(m.pair_index(x, a)) += 1.0;
  }
  for (int i = 0; i < m.n_pairs(); ++i) {
    const double p = counts(i) / n;
    const double se = std::sqrt(std::max(d.weights(i) * (1 - d.weights(i)), 1e-12) / n);
    EXPECT_NEAR(p, d.weights(i), 3.0 * se + 1e-9) << i;
  }
}

}  // namespace
}  // namespace oplab
