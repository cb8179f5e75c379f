#include "oplab/ctrace.hpp"
#include "oplab/dynamic_programming.hpp"
#include "oplab/generators.hpp"
#include "oplab/targets.hpp"
#include "oplab/td_learning.hpp"
#include "oplab/trajectory.hpp"
#include "oplab/variance.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using namespace oplab;

void BM_SampleTrajectory(benchmark::State& state) {
  RngStream env(0, 1);
  const Mdp m = gen_garnet(20, 3, 5, env);
  const Policy mu = Policy::uniform(20, 3);
  RngStream rng(1);
  const int horizon = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_trajectory(m, mu, std::nullopt, horizon, rng));
  state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_SampleTrajectory)->Arg(100)->Arg(1000);

void BM_Target(benchmark::State& state) {
  RngStream env(0, 1), p(0, 2);
  const Mdp m = gen_garnet(20, 3, 5, env);
  const Policy pi = Policy::dirichlet(20, 3, p);
  const Policy mu = Policy::uniform(20, 3);
  RngStream rng(2);
  const Trajectory t = sample_trajectory(m, mu, std::nullopt, 100, rng);
  const QTable q(20, 3, 1.0);
  const TargetEvaluator eval(UpdateRuleSpec::retrace(0.7), pi, mu, m.gamma());
  for (auto _ : state) benchmark::DoNotOptimize(eval(q, t));
}
BENCHMARK(BM_Target);

void BM_SuffixTargets(benchmark::State& state) {
  RngStream env(0, 1), p(0, 2);
  const Mdp m = gen_garnet(20, 3, 5, env);
  const Policy pi = Policy::dirichlet(20, 3, p);
  const Policy mu = Policy::uniform(20, 3);
  RngStream rng(2);
  const Trajectory t = sample_trajectory(m, mu, std::nullopt, 100, rng);
  const QTable q(20, 3, 1.0);
  const TargetEvaluator eval(UpdateRuleSpec::retrace(0.7), pi, mu, m.gamma());
  std::vector<double> out;
  for (auto _ : state) {
    eval.suffix_targets(q, t, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_SuffixTargets);

void BM_Variance(benchmark::State& state) {
  RngStream env(0, 1), p(0, 2), b(0, 3);
  const Mdp m = gen_dirichlet_uniform(5, 3, env);
  const Policy pi = Policy::dirichlet(5, 3, p);
  const Policy mu = Policy::dirichlet(5, 3, b);
  McConfig mc;
  mc.n_trajectories = 1000;
  const auto nu = StateActionDist::initial_pairs(m, mu);
  for (auto _ : state) {
    benchmark::DoNotOptimize(variance(m, UpdateRuleSpec::retrace(1.0), QTable(5, 3), nu, pi, mu, mc));
  }
}
BENCHMARK(BM_Variance)->Unit(benchmark::kMillisecond);

void BM_TdLearn(benchmark::State& state) {
  const Mdp m = gen_chain(20);
  const Policy pi = optimal_policy(m);
  const Policy mu = Policy::uniform(20, 2);
  TdLearner learner(m, UpdateRuleSpec::retrace(0.5), pi, mu, TdConfig{}, RngStream(3));
  for (auto _ : state) learner.learn(1000);
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_TdLearn);

void BM_ContractionEstimate(benchmark::State& state) {
  const Mdp m = gen_chain(20);
  const Policy pi = optimal_policy(m);
  const Policy mu = Policy::uniform(20, 2);
  RngStream rng(4);
  const Trajectory t = sample_trajectory(m, mu, std::nullopt, 10000, rng);
  for (auto _ : state) benchmark::DoNotOptimize(contraction_estimate(t, 0.5, pi, mu, 0.9));
}
BENCHMARK(BM_ContractionEstimate);

}  // namespace
