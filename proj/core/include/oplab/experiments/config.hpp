#pragma once

#include "oplab/control.hpp"
#include "oplab/generators.hpp"
#include "oplab/mdp.hpp"
#include "oplab/td_learning.hpp"
#include "oplab/update_rule.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace oplab::experiments {

inline constexpr int kConfigVersion = 1;

// Parse or validation failure. line() is 1-based, 0 when unknown. key() is
// the dotted path of the offending setting ("control.epsilon", "rules.2")
// when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message, std::string key = {});
  int line() const { return line_; }
  const std::string& key() const { return key_; }
  const std::string& message() const { return message_; }

 private:
  int line_;
  std::string message_;
  std::string key_;
};

enum class CommandKind { GenMdp, Analyze, Sweep, EvalCurve, Control, Ctrace };

std::string_view command_name(CommandKind kind);
std::optional<CommandKind> parse_command(std::string_view name);

struct EnvironmentSpec {
  enum class Kind { Dirichlet, Garnet, Chain, File };
  Kind kind = Kind::Dirichlet;
  int states = 5;
  int actions = 3;
  int branching = 5;
  double gamma = 0.9;
  ChainOptions chain;
  std::filesystem::path path;
};

struct PolicySpec {
  enum class Kind { Uniform, Dirichlet, Optimal, EpsilonGreedy };
  Kind kind = Kind::Uniform;
  // Fixed seed for Dirichlet draws; the replicate's stream is used when unset.
  std::optional<std::uint64_t> seed;
  // EpsilonGreedy mixes the optimal policy with uniform.
  double epsilon = 0.1;
};

struct SweepGrid {
  std::vector<int> uncorrected_n;
  std::vector<int> importance_n;
  std::vector<double> retrace_alpha;
  std::vector<double> treebackup_alpha;

  // Uncorrected n = 1..20, importance n = 1..3, Retrace alpha = 0, 0.01, ...,
  // 0.1, 0.15, ..., 1.
  static SweepGrid figure1();
  // Uncorrected n = 1..50, importance n = 1..4, Retrace and TreeBackup alpha
  // on the same grid.
  static SweepGrid extended();
  std::vector<UpdateRuleSpec> rules() const;
};

struct MonteCarloSettings {
  int trajectories = 5000;
  int horizon = 100;
  double truncation_tolerance = 0.05;
};

struct EvalSettings {
  double learning_rate = 0.1;
  long steps = 100000;
  long eval_every = 1000;
  int segment_length = 100;
  UpdateAnchors anchors = UpdateAnchors::EveryVisit;
};

struct ControlSettings {
  int rounds = 200;
  long steps_per_round = 100;
  double learning_rate = 0.1;
  int segment_length = 100;
  EvaluationMode mode = EvaluationMode::Rule;
  BehaviourSchedule behaviour = BehaviourSchedule::FixedUniform;
  double epsilon = 0.1;
  // C-trace mode: the target rate is C_nu(target_alpha) under the optimal
  // policy when target_rate is unset.
  std::optional<double> target_rate;
  double target_alpha = 0.5;
  double step_scale = 0.5;
  double step_exponent = 0.7;
};

struct CtraceSettings {
  // Target rate; C_nu(target_alpha) when unset.
  std::optional<double> target_rate;
  double target_alpha = 0.5;
  long episodes = 10000;
  int max_episode_length = 10000;
  double step_scale = 0.5;
  double step_exponent = 0.7;
  std::optional<double> q_step_scale;
  std::optional<int> truncation;
  long log_every = 100;
};

struct RunConfig {
  int version = kConfigVersion;
  CommandKind command = CommandKind::Sweep;
  std::uint64_t seed = 0;
  int seeds = 1;
  int jobs = 1;
  EnvironmentSpec environment;
  PolicySpec target{PolicySpec::Kind::Dirichlet, std::nullopt, 0.1};
  PolicySpec behaviour{PolicySpec::Kind::Dirichlet, std::nullopt, 0.1};
  std::vector<UpdateRuleSpec> rules;
  SweepGrid grid = SweepGrid::figure1();
  MonteCarloSettings monte_carlo;
  EvalSettings evaluation;
  ControlSettings control;
  CtraceSettings ctrace;
  int bootstrap_resamples = 200;
  double interval_level = 0.9;

  // Throws ConfigError for inconsistent settings.
  void validate() const;
};

// Parses a YAML document. Unknown keys, type errors and bad values raise
// ConfigError with the offending line. A relative MDP file path is taken
// relative to base_dir.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

// Canonical YAML form of a config. Everything except `jobs` round-trips
// through parse_config; the worker count never affects results and is left
// out so that the config hash does not depend on it.
std::string to_yaml(const RunConfig& cfg);

}  // namespace oplab::experiments
