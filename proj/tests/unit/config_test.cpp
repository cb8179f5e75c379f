#include "oplab/experiments/config.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace oplab::experiments {
namespace {

const char* kFull = R"(version: 1
command: eval-curve
seed: 7
seeds: 3
jobs: 2
bootstrap_resamples: 50
interval_level: 0.8
environment:
  kind: chain
  states: 12
  gamma: 0.95
  goal_reward: 10
policies:
  target: {kind: optimal}
  behaviour: {kind: epsilon-greedy, epsilon: 0.3}
rules:
  - {kind: retrace, alpha: 0.25}
  - {kind: uncorrected, n: 4}
  - {kind: treebackup, alpha: 1, lambda: 0.5}
evaluation:
  learning_rate: 0.2
  steps: 5000
  eval_every: 500
  segment_length: 40
  anchors: first-step
)";

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return -1;
}

TEST(Config, ParsesEverySection) {
  const RunConfig c = parse_config(kFull);
  EXPECT_EQ(c.command, CommandKind::EvalCurve);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.seeds, 3);
  EXPECT_EQ(c.jobs, 2);
  EXPECT_EQ(c.bootstrap_resamples, 50);
  EXPECT_DOUBLE_EQ(c.interval_level, 0.8);
  EXPECT_EQ(c.environment.kind, EnvironmentSpec::Kind::Chain);
  EXPECT_EQ(c.environment.states, 12);
  EXPECT_EQ(c.environment.actions, 2);
  EXPECT_DOUBLE_EQ(c.environment.gamma, 0.95);
  EXPECT_DOUBLE_EQ(c.environment.chain.gamma, 0.95);
  EXPECT_DOUBLE_EQ(c.environment.chain.goal_reward, 10.0);
  EXPECT_EQ(c.target.kind, PolicySpec::Kind::Optimal);
  EXPECT_EQ(c.behaviour.kind, PolicySpec::Kind::EpsilonGreedy);
  EXPECT_DOUBLE_EQ(c.behaviour.epsilon, 0.3);
  ASSERT_EQ(c.rules.size(), 3u);
  EXPECT_EQ(c.rules[0], UpdateRuleSpec::retrace(0.25));
  EXPECT_EQ(c.rules[1], UpdateRuleSpec::uncorrected(4));
  EXPECT_EQ(c.rules[2].kind, RuleKind::TreeBackup);
  EXPECT_DOUBLE_EQ(c.rules[2].lambda, 0.5);
  EXPECT_DOUBLE_EQ(c.evaluation.learning_rate, 0.2);
  EXPECT_EQ(c.evaluation.steps, 5000);
  EXPECT_EQ(c.evaluation.eval_every, 500);
  EXPECT_EQ(c.evaluation.segment_length, 40);
  EXPECT_EQ(c.evaluation.anchors, UpdateAnchors::FirstStep);
}

TEST(Config, Defaults) {
  const RunConfig c = parse_config("version: 1\ncommand: sweep\n");
  EXPECT_EQ(c.seeds, 1);
  EXPECT_EQ(c.environment.kind, EnvironmentSpec::Kind::Dirichlet);
  EXPECT_EQ(c.environment.states, 5);
  EXPECT_EQ(c.environment.actions, 3);
  EXPECT_EQ(c.grid.rules().size(), 20u + 3u + 29u);
  EXPECT_EQ(c.monte_carlo.trajectories, 5000);
  EXPECT_EQ(c.bootstrap_resamples, 200);
}

TEST(Config, GridPresetAndOverride) {
  const RunConfig c = parse_config("version: 1\ncommand: sweep\ngrid:\n  preset: extended\n  importance_n: [2]\n");
  EXPECT_EQ(c.grid.uncorrected_n.size(), 50u);
  EXPECT_EQ(c.grid.importance_n, std::vector<int>{2});
  EXPECT_EQ(c.grid.treebackup_alpha.size(), 29u);
}

TEST(Config, UnknownKeyReportsItsLine) {
  EXPECT_EQ(error_line("version: 1\ncommand: sweep\nsedd: 3\n"), 3);
  EXPECT_EQ(error_line("version: 1\ncommand: sweep\nmonte_carlo:\n  trajectories: 10\n  horizn: 5\n"), 5);
  EXPECT_EQ(error_line("version: 1\ncommand: analyze\nrules:\n  - {kind: retrace, n: 2}\n"), 4);
}

TEST(Config, TypeErrorReportsItsLine) {
  EXPECT_EQ(error_line("version: 1\ncommand: sweep\nseeds: many\n"), 3);
  EXPECT_EQ(error_line("version: 1\ncommand: sweep\ngrid:\n  retrace_alpha: [0.1, x]\n"), 4);
  EXPECT_EQ(error_line("version: 1\ncommand: sweep\ngrid:\n  retrace_alpha: 0.5\n"), 4);
}

TEST(Config, BadValuesReportTheirLine) {
  EXPECT_EQ(error_line("version: 1\ncommand: sweep\nenvironment:\n  kind: chain\n  gamma: 1.0\n"), 5);
  EXPECT_EQ(error_line("version: 1\ncommand: sweep\nseeds: 0\n"), 3);
  EXPECT_EQ(error_line("version: 1\ncommand: analyze\nrules:\n  - {kind: retrace, alpha: 1.5}\n"), 4);
  EXPECT_EQ(error_line("version: 1\ncommand: control\nrules:\n  - {kind: retrace}\ncontrol:\n  epsilon: 3\n"), 6);
  EXPECT_EQ(error_line("version: 1\ncommand: eval-curve\nrules:\n  - {kind: retrace}\n"
                       "evaluation:\n  steps: 10\n  learning_rate: -1\n"),
            7);
  EXPECT_EQ(error_line("version: 1\ncommand: sweep\nenvironment:\n  kind: garnet\n  states: 4\n  branching: 9\n"), 6);
  EXPECT_EQ(error_line("version: 1\ncommand: sweep\nenvironment:\n  kind: cube\n"), 4);
  EXPECT_EQ(error_line("version: 1\ncommand: analyze\n"), 0);
}

TEST(Config, MalformedDocument) {
  EXPECT_EQ(error_line("version: 1\ncommand: sweep\nseeds: [1, 2\n"), 4);
  EXPECT_THROW(parse_config(""), ConfigError);
}

TEST(Config, VersionAndCommandChecked) {
  EXPECT_EQ(error_line("version: 2\ncommand: sweep\n"), 1);
  EXPECT_EQ(error_line("version: 1\ncommand: fly\n"), 2);
  EXPECT_EQ(error_line("version: 1\nseed: 1\n"), 1);
}

TEST(Config, MessageCarriesLine) {
  try {
    parse_config("version: 1\ncommand: sweep\nseeds: -2\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("line 3: ", 0), 0u) << e.what();
    EXPECT_EQ(e.key(), "seeds");
  }
}

TEST(Config, YamlRoundTrip) {
  const RunConfig c = parse_config(kFull);
  const std::string y = to_yaml(c);
  const RunConfig d = parse_config(y);
  EXPECT_EQ(to_yaml(d), y);
  EXPECT_EQ(d.rules, c.rules);
  EXPECT_EQ(d.jobs, 1);
  RunConfig e = c;
  e.jobs = 9;
  EXPECT_EQ(to_yaml(e), y);
}

TEST(Config, RoundTripKeepsControlAndCtrace) {
  const std::string text =
      "version: 1\ncommand: control\nrules:\n  - {kind: retrace, alpha: 0.5}\ncontrol:\n  rounds: 12\n"
      "  mode: ctrace\n  behaviour: greedy-epsilon\n  epsilon: 0.2\n  target_rate: 0.31\n"
      "ctrace:\n  truncation: 8\n  q_step_scale: 0.05\n";
  const RunConfig c = parse_config(text);
  EXPECT_EQ(c.control.mode, EvaluationMode::Ctrace);
  EXPECT_EQ(c.control.behaviour, BehaviourSchedule::GreedyEpsilon);
  ASSERT_TRUE(c.control.target_rate.has_value());
  EXPECT_DOUBLE_EQ(*c.control.target_rate, 0.31);
  ASSERT_TRUE(c.ctrace.truncation.has_value());
  EXPECT_EQ(*c.ctrace.truncation, 8);
  const RunConfig d = parse_config(to_yaml(c));
  EXPECT_EQ(to_yaml(d), to_yaml(c));
  EXPECT_EQ(*d.ctrace.truncation, 8);
  EXPECT_DOUBLE_EQ(*d.ctrace.q_step_scale, 0.05);
}

TEST(Config, FilePathsResolveAgainstConfigDir) {
  const auto dir = std::filesystem::temp_directory_path() / "oplab_config_test";
  std::filesystem::create_directories(dir / "sub");
  std::ofstream(dir / "sub" / "m.json") << "{}";
  std::ofstream(dir / "run.yaml") << "version: 1\ncommand: analyze\nrules:\n  - {kind: retrace}\n"
                                     "environment:\n  kind: file\n  path: sub/m.json\n";
  const RunConfig c = load_config(dir / "run.yaml");
  EXPECT_EQ(c.environment.path, dir / "sub" / "m.json");

  std::ofstream(dir / "missing.yaml") << "version: 1\ncommand: analyze\nrules:\n  - {kind: retrace}\n"
                                         "environment:\n  kind: file\n  path: nothere.json\n";
  try {
    load_config(dir / "missing.yaml");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 7);
    EXPECT_NE(std::string(e.what()).find("missing.yaml"), std::string::npos);
  }
  EXPECT_THROW(load_config(dir / "absent.yaml"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(Config, CommandNames) {
  for (auto k : {CommandKind::GenMdp, CommandKind::Analyze, CommandKind::Sweep, CommandKind::EvalCurve,
                 CommandKind::Control, CommandKind::Ctrace}) {
    EXPECT_EQ(parse_command(command_name(k)), k);
  }
  EXPECT_FALSE(parse_command("Sweep").has_value());
}

TEST(Config, ShippedConfigsLoad) {
  for (const auto& entry : std::filesystem::directory_iterator(OPLAB_CONFIG_DIR)) {
    if (entry.path().extension() == ".yaml") EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
  }
}

}  // namespace
}  // namespace oplab::experiments
