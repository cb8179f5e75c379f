#include "oplab/dynamic_programming.hpp"
#include "oplab/generators.hpp"
#include "oplab/td_learning.hpp"

#include <gtest/gtest.h>

namespace oplab {
namespace {

TEST(TdLearning, OnPolicyRetraceConverges) {
  const Mdp m = gen_chain(6);
  const Policy mu = Policy::uniform(6, 2);
  TdEvalConfig cfg;
  const auto curve = td_eval_loop(m, UpdateRuleSpec::retrace(1.0), mu, mu, cfg, RngStream(1));
  const double scale = exact_q(m, mu).values.norm();
  EXPECT_EQ(curve.back().env_steps, 100000);
  EXPECT_LE(curve.back().l2_error, 0.05 * scale);
}

TEST(TdLearning, ZeroRateKeepsErrorConstant) {
  const Mdp m = gen_chain(6);
  const Policy mu = Policy::uniform(6, 2);
  const Policy pi = optimal_policy(m);
  TdEvalConfig cfg;
  cfg.td.learning_rate = 0.0;
  cfg.n_steps = 5000;
  const auto curve = td_eval_loop(m, UpdateRuleSpec::retrace(1.0), pi, mu, cfg, RngStream(2));
  ASSERT_EQ(curve.size(), 6u);
  for (const auto& p : curve) EXPECT_DOUBLE_EQ(p.l2_error, exact_q(m, pi).values.norm());
}

TEST(TdLearning, CurveCadence) {
  const Mdp m = gen_chain(6);
  const Policy mu = Policy::uniform(6, 2);
  TdEvalConfig cfg;
  cfg.n_steps = 2500;
  cfg.eval_every = 1000;
  const auto curve = td_eval_loop(m, UpdateRuleSpec::uncorrected(3), mu, mu, cfg, RngStream(3));
  ASSERT_EQ(curve.size(), 4u);
  EXPECT_EQ(curve[0].env_steps, 0);
  EXPECT_EQ(curve[1].env_steps, 1000);
  EXPECT_EQ(curve[2].env_steps, 2000);
  EXPECT_EQ(curve[3].env_steps, 2500);
}

TEST(TdLearning, LearnConsumesExactBudget) {
  const Mdp m = gen_chain(10);
  const Policy mu = Policy::uniform(10, 2);
  for (auto anchors : {UpdateAnchors::EveryVisit, UpdateAnchors::FirstStep}) {
    TdConfig cfg;
    cfg.anchors = anchors;
    TdLearner learner(m, UpdateRuleSpec::uncorrected(4), mu, mu, cfg, RngStream(4));
    learner.learn(777);
    EXPECT_EQ(learner.env_steps(), 777);
    learner.learn(23);
    EXPECT_EQ(learner.env_steps(), 800);
  }
}

TEST(TdLearning, FirstStepTouchesOnePair) {
  const Mdp m = gen_chain(10);
  const Policy mu = Policy::uniform(10, 2);
  TdConfig cfg;
  cfg.anchors = UpdateAnchors::FirstStep;
  cfg.learning_rate = 1.0;
  TdLearner learner(m, UpdateRuleSpec::retrace(0.0), mu, mu, cfg, RngStream(5));
  const Trajectory t = learner.next_rollout(50);
  learner.update(t, 1.0);
  int changed = 0;
  for (int i = 0; i < m.n_pairs(); ++i) changed += learner.q().values(i) != 0.0;
  EXPECT_LE(changed, 1);
  const double g = target(UpdateRuleSpec::retrace(0.0), QTable(10, 2), t, mu, mu, m.gamma());
  EXPECT_DOUBLE_EQ(learner.q()(t.steps[0].state, t.steps[0].action), g);
}

TEST(TdLearning, EveryVisitUsesFrozenTable) {
  const Mdp m = gen_chain(8);
  const Policy mu = Policy::uniform(8, 2);
  const Policy pi = optimal_policy(m);
  const auto rule = UpdateRuleSpec::retrace(1.0);
  TdConfig cfg;
  TdLearner learner(m, rule, pi, mu, cfg, RngStream(6));
  learner.learn(300);
  const QTable before = learner.q();
  const Trajectory t = learner.next_rollout(40);
  learner.update(t, 0.1);
  // Oracle: targets from the pre-rollout table, applied in visit order.
  QTable expected = before;
  const TargetEvaluator eval(rule, pi, mu, m.gamma());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Step& s = t.steps[i];
    const double g = eval(before, suffix(t, i));
    expected(s.state, s.action) += 0.1 * (g - expected(s.state, s.action));
  }
  EXPECT_LT((learner.q().values - expected.values).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(TdLearning, Reproducible) {
  const Mdp m = gen_chain(8);
  const Policy mu = Policy::uniform(8, 2);
  TdEvalConfig cfg;
  cfg.n_steps = 5000;
  const auto a = td_eval_loop(m, UpdateRuleSpec::retrace(0.5), optimal_policy(m), mu, cfg, RngStream(7));
  const auto b = td_eval_loop(m, UpdateRuleSpec::retrace(0.5), optimal_policy(m), mu, cfg, RngStream(7));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].l2_error, b[i].l2_error);
}

TEST(TdLearning, FullTraceBeatsCutTraceEventually) {
  const Mdp m = gen_chain(20);
  const Policy pi = optimal_policy(m);
  const Policy mu = Policy::uniform(20, 2);
  TdEvalConfig cfg;
  cfg.n_steps = 100000;
  cfg.eval_every = 100000;
  const auto one = td_eval_loop(m, UpdateRuleSpec::retrace(1.0), pi, mu, cfg, RngStream(8));
  const auto zero = td_eval_loop(m, UpdateRuleSpec::retrace(0.0), pi, mu, cfg, RngStream(8));
  EXPECT_LT(one.back().l2_error, zero.back().l2_error);
}

TEST(TdLearning, RejectsBadSettings) {
  const Mdp m = gen_chain(4);
  const Policy mu = Policy::uniform(4, 2);
  TdConfig cfg;
  cfg.learning_rate = 1.5;
  EXPECT_THROW(TdLearner(m, UpdateRuleSpec::retrace(), mu, mu, cfg, RngStream(0)), std::invalid_argument);
  cfg.learning_rate = 0.1;
  cfg.segment_length = 0;
  EXPECT_THROW(TdLearner(m, UpdateRuleSpec::retrace(), mu, mu, cfg, RngStream(0)), std::invalid_argument);
  TdEvalConfig ecfg;
  ecfg.eval_every = 0;
  EXPECT_THROW(td_eval_loop(m, UpdateRuleSpec::retrace(), mu, mu, ecfg, RngStream(0)), std::invalid_argument);
}

}  // namespace
}  // namespace oplab
