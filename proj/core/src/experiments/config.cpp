#include "oplab/experiments/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace oplab::experiments {

ConfigError::ConfigError(int line, const std::string& message, std::string key)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line),
      message_(message),
      key_(std::move(key)) {}

namespace {

constexpr std::pair<CommandKind, std::string_view> kCommands[] = {
    {CommandKind::GenMdp, "gen-mdp"},       {CommandKind::Analyze, "analyze"},
    {CommandKind::Sweep, "sweep"},          {CommandKind::EvalCurve, "eval-curve"},
    {CommandKind::Control, "control"},      {CommandKind::Ctrace, "ctrace"},
};

int line_of(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }

// Line of every key and list item, by dotted path.
void index_lines(const YAML::Node& node, const std::string& prefix, std::map<std::string, int>& out) {
  if (node.IsMap()) {
    for (const auto& kv : node) {
      const std::string path = prefix.empty() ? kv.first.Scalar() : prefix + "." + kv.first.Scalar();
      out[path] = line_of(kv.first);
      index_lines(kv.second, path, out);
    }
  } else if (node.IsSequence()) {
    std::size_t i = 0;
    for (const auto& item : node) {
      const std::string path = prefix + "." + std::to_string(i++);
      out[path] = line_of(item);
      index_lines(item, path, out);
    }
  }
}

template <typename T>
T convert(const YAML::Node& node, std::string_view what) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(line_of(node), "invalid value for '" + std::string(what) + "'");
  }
}

// A mapping whose keys must all be consumed.
class Section {
 public:
  Section(const YAML::Node& node, std::string name) : node_(node), name_(std::move(name)) {
    if (!node.IsMap()) throw ConfigError(line_of(node), "'" + name_ + "' must be a mapping");
  }

  YAML::Node child(const std::string& key) {
    used_.insert(key);
    return node_[key];
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    const YAML::Node n = child(key);
    if (n) out = convert<T>(n, key);
  }

  template <typename T>
  void read(const std::string& key, std::optional<T>& out) {
    const YAML::Node n = child(key);
    if (n && !n.IsNull()) out = convert<T>(n, key);
  }

  int line() const { return line_of(node_); }

  void finish() const {
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!used_.count(key)) {
        throw ConfigError(line_of(kv.first), "unknown key '" + key + "' in '" + name_ + "'");
      }
    }
  }

 private:
  YAML::Node node_;
  std::string name_;
  std::set<std::string> used_;
};

template <typename T>
std::vector<T> read_list(const YAML::Node& node, std::string_view what) {
  if (!node.IsSequence()) throw ConfigError(line_of(node), "'" + std::string(what) + "' must be a list");
  std::vector<T> out;
  for (const auto& item : node) out.push_back(convert<T>(item, what));
  return out;
}

std::string text_of(const YAML::Node& node, std::string_view what) {
  return convert<std::string>(node, what);
}

EnvironmentSpec parse_environment(const YAML::Node& node) {
  Section s(node, "environment");
  EnvironmentSpec env;
  const std::string kind = text_of(s.child("kind"), "kind");
  if (kind == "dirichlet") {
    env.kind = EnvironmentSpec::Kind::Dirichlet;
  } else if (kind == "garnet") {
    env.kind = EnvironmentSpec::Kind::Garnet;
  } else if (kind == "chain") {
    env.kind = EnvironmentSpec::Kind::Chain;
    env.states = 20;
    env.actions = 2;
  } else if (kind == "file") {
    env.kind = EnvironmentSpec::Kind::File;
  } else {
    throw ConfigError(s.line(), "unknown environment kind '" + kind + "'");
  }
  s.read("states", env.states);
  s.read("gamma", env.gamma);
  if (env.kind != EnvironmentSpec::Kind::Chain) s.read("actions", env.actions);
  if (env.kind == EnvironmentSpec::Kind::Garnet) s.read("branching", env.branching);
  if (env.kind == EnvironmentSpec::Kind::Chain) {
    s.read("right_reward", env.chain.right_reward);
    s.read("goal_reward", env.chain.goal_reward);
    s.read("left_reward", env.chain.left_reward);
  }
  if (env.kind == EnvironmentSpec::Kind::File) {
    std::string path;
    s.read("path", path);
    if (path.empty()) throw ConfigError(s.line(), "file environment needs 'path'");
    env.path = path;
  }
  s.finish();
  env.chain.gamma = env.gamma;
  return env;
}

PolicySpec parse_policy(const YAML::Node& node, std::string_view what) {
  Section s(node, std::string(what));
  PolicySpec p;
  const std::string kind = text_of(s.child("kind"), "kind");
  if (kind == "uniform") {
    p.kind = PolicySpec::Kind::Uniform;
  } else if (kind == "dirichlet") {
    p.kind = PolicySpec::Kind::Dirichlet;
    s.read("seed", p.seed);
  } else if (kind == "optimal") {
    p.kind = PolicySpec::Kind::Optimal;
  } else if (kind == "epsilon-greedy") {
    p.kind = PolicySpec::Kind::EpsilonGreedy;
    s.read("epsilon", p.epsilon);
  } else {
    throw ConfigError(s.line(), "unknown policy kind '" + kind + "'");
  }
  s.finish();
  return p;
}

UpdateRuleSpec parse_rule(const YAML::Node& node) {
  Section s(node, "rules");
  const std::string kind = text_of(s.child("kind"), "kind");
  const auto parsed = parse_rule_kind(kind);
  if (!parsed) throw ConfigError(s.line(), "unknown rule kind '" + kind + "'");
  UpdateRuleSpec rule;
  rule.kind = *parsed;
  if (rule.n_step()) {
    s.read("n", rule.n);
  } else {
    s.read("alpha", rule.alpha);
    s.read("lambda", rule.lambda);
  }
  s.finish();
  try {
    rule.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(s.line(), e.what());
  }
  return rule;
}

SweepGrid parse_grid(const YAML::Node& node) {
  Section s(node, "grid");
  SweepGrid grid = SweepGrid::figure1();
  if (const YAML::Node preset = s.child("preset")) {
    const std::string name = text_of(preset, "preset");
    if (name == "figure1") {
      grid = SweepGrid::figure1();
    } else if (name == "extended") {
      grid = SweepGrid::extended();
    } else {
      throw ConfigError(line_of(preset), "unknown grid preset '" + name + "'");
    }
  }
  if (const YAML::Node n = s.child("uncorrected_n")) grid.uncorrected_n = read_list<int>(n, "uncorrected_n");
  if (const YAML::Node n = s.child("importance_n")) grid.importance_n = read_list<int>(n, "importance_n");
  if (const YAML::Node n = s.child("retrace_alpha")) grid.retrace_alpha = read_list<double>(n, "retrace_alpha");
  if (const YAML::Node n = s.child("treebackup_alpha")) {
    grid.treebackup_alpha = read_list<double>(n, "treebackup_alpha");
  }
  s.finish();
  return grid;
}

UpdateAnchors parse_anchors(const YAML::Node& node) {
  const std::string name = text_of(node, "anchors");
  if (name == "every-visit") return UpdateAnchors::EveryVisit;
  if (name == "first-step") return UpdateAnchors::FirstStep;
  throw ConfigError(line_of(node), "unknown anchors '" + name + "'");
}

std::string_view anchors_name(UpdateAnchors a) {
  return a == UpdateAnchors::EveryVisit ? "every-visit" : "first-step";
}

std::string_view mode_name(EvaluationMode m) {
  switch (m) {
    case EvaluationMode::Rule: return "rule";
    case EvaluationMode::Ctrace: return "ctrace";
    case EvaluationMode::Exact: return "exact";
  }
  return "rule";
}

std::string_view schedule_name(BehaviourSchedule b) {
  return b == BehaviourSchedule::FixedUniform ? "fixed-uniform" : "greedy-epsilon";
}

std::string_view env_kind_name(EnvironmentSpec::Kind k) {
  switch (k) {
    case EnvironmentSpec::Kind::Dirichlet: return "dirichlet";
    case EnvironmentSpec::Kind::Garnet: return "garnet";
    case EnvironmentSpec::Kind::Chain: return "chain";
    case EnvironmentSpec::Kind::File: return "file";
  }
  return "dirichlet";
}

std::string_view policy_kind_name(PolicySpec::Kind k) {
  switch (k) {
    case PolicySpec::Kind::Uniform: return "uniform";
    case PolicySpec::Kind::Dirichlet: return "dirichlet";
    case PolicySpec::Kind::Optimal: return "optimal";
    case PolicySpec::Kind::EpsilonGreedy: return "epsilon-greedy";
  }
  return "uniform";
}

void emit_policy(YAML::Emitter& out, const char* key, const PolicySpec& p) {
  out << YAML::Key << key << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << std::string(policy_kind_name(p.kind));
  if (p.kind == PolicySpec::Kind::Dirichlet && p.seed) out << YAML::Key << "seed" << YAML::Value << *p.seed;
  if (p.kind == PolicySpec::Kind::EpsilonGreedy) out << YAML::Key << "epsilon" << YAML::Value << p.epsilon;
  out << YAML::EndMap;
}

template <typename T>
void emit_list(YAML::Emitter& out, const char* key, const std::vector<T>& values) {
  out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const T& v : values) out << v;
  out << YAML::EndSeq;
}

}  // namespace

std::string_view command_name(CommandKind kind) {
  for (const auto& [k, name] : kCommands) {
    if (k == kind) return name;
  }
  return "sweep";
}

std::optional<CommandKind> parse_command(std::string_view name) {
  for (const auto& [k, n] : kCommands) {
    if (n == name) return k;
  }
  return std::nullopt;
}

namespace {

// 0, 0.01, ..., 0.1, then 0.15, ..., 1. Large-n uncorrected points contract
// at gamma^n, which only small alphas match.
std::vector<double> alpha_grid() {
  std::vector<double> out;
  for (int i = 0; i < 10; ++i) out.push_back(i / 100.0);
  for (int i = 2; i <= 20; ++i) out.push_back(i / 20.0);
  return out;
}

}  // namespace

SweepGrid SweepGrid::figure1() {
  SweepGrid g;
  for (int n = 1; n <= 20; ++n) g.uncorrected_n.push_back(n);
  g.importance_n = {1, 2, 3};
  g.retrace_alpha = alpha_grid();
  return g;
}

SweepGrid SweepGrid::extended() {
  SweepGrid g;
  for (int n = 1; n <= 50; ++n) g.uncorrected_n.push_back(n);
  g.importance_n = {1, 2, 3, 4};
  g.retrace_alpha = alpha_grid();
  g.treebackup_alpha = g.retrace_alpha;
  return g;
}

std::vector<UpdateRuleSpec> SweepGrid::rules() const {
  std::vector<UpdateRuleSpec> out;
  for (int n : uncorrected_n) out.push_back(UpdateRuleSpec::uncorrected(n));
  for (int n : importance_n) out.push_back(UpdateRuleSpec::importance_weighted(n));
  for (double a : retrace_alpha) out.push_back(UpdateRuleSpec::retrace(a));
  for (double a : treebackup_alpha) out.push_back(UpdateRuleSpec::tree_backup(a));
  return out;
}

void RunConfig::validate() const {
  const auto fail = [](const std::string& key, const std::string& msg) { throw ConfigError(0, msg, key); };
  if (version != kConfigVersion) fail("version", "unsupported config version " + std::to_string(version));
  if (seeds < 1) fail("seeds", "seeds must be positive");
  if (jobs < 1) fail("jobs", "jobs must be positive");
  const auto& env = environment;
  if (env.kind != EnvironmentSpec::Kind::File) {
    if (env.states < 1 || env.actions < 1) fail("environment.states", "environment dimensions must be positive");
    if (!(env.gamma >= 0.0 && env.gamma < 1.0)) fail("environment.gamma", "gamma must lie in [0, 1)");
  }
  if (env.kind == EnvironmentSpec::Kind::Chain && env.states < 2) fail("environment.states", "chain needs at least 2 states");
  if (env.kind == EnvironmentSpec::Kind::Garnet && (env.branching < 1 || env.branching > env.states)) {
    fail("environment.branching", "garnet branching must lie in [1, states]");
  }
  if (env.kind == EnvironmentSpec::Kind::File && !std::filesystem::exists(env.path)) {
    fail("environment.path", "environment file not found: " + env.path.string());
  }
  if (!(target.epsilon >= 0.0 && target.epsilon <= 1.0)) fail("policies.target.epsilon", "policy epsilon must lie in [0, 1]");
  if (!(behaviour.epsilon >= 0.0 && behaviour.epsilon <= 1.0)) {
    fail("policies.behaviour.epsilon", "policy epsilon must lie in [0, 1]");
  }
  for (std::size_t i = 0; i < rules.size(); ++i) {
    try {
      rules[i].validate();
    } catch (const std::invalid_argument& e) {
      fail("rules." + std::to_string(i), e.what());
    }
  }
  switch (command) {
    case CommandKind::GenMdp:
      if (env.kind == EnvironmentSpec::Kind::File) fail("environment.kind", "gen-mdp needs a generated environment");
      break;
    case CommandKind::Analyze:
      if (rules.size() != 1) fail("rules", "analyze needs exactly one rule");
      break;
    case CommandKind::Sweep:
      if (grid.rules().empty()) fail("grid", "sweep grid is empty");
      try {
        for (const auto& r : grid.rules()) r.validate();
      } catch (const std::invalid_argument& e) {
        fail("grid", e.what());
      }
      if (monte_carlo.trajectories < 1 || monte_carlo.horizon < 1) fail("monte_carlo", "monte_carlo counts must be positive");
      break;
    case CommandKind::EvalCurve:
      if (rules.empty()) fail("rules", "eval-curve needs at least one rule");
      if (!(evaluation.learning_rate >= 0.0 && evaluation.learning_rate <= 1.0)) {
        fail("evaluation.learning_rate", "learning_rate must lie in [0, 1]");
      }
      if (evaluation.steps < 0 || evaluation.eval_every < 1 || evaluation.segment_length < 1) {
        fail("evaluation", "evaluation step counts must be positive");
      }
      break;
    case CommandKind::Control:
      if (control.mode != EvaluationMode::Ctrace && rules.empty()) fail("rules", "control needs at least one rule");
      if (control.rounds < 0 || control.steps_per_round < 1 || control.segment_length < 1) {
        fail("control", "control counts must be positive");
      }
      if (!(control.epsilon >= 0.0 && control.epsilon <= 1.0)) fail("control.epsilon", "control epsilon must lie in [0, 1]");
      break;
    case CommandKind::Ctrace:
      if (ctrace.episodes < 0 || ctrace.max_episode_length < 1 || ctrace.log_every < 1) {
        fail("ctrace", "ctrace counts must be positive");
      }
      if (!(ctrace.target_alpha >= 0.0 && ctrace.target_alpha <= 1.0)) fail("ctrace.target_alpha", "target_alpha must lie in [0, 1]");
      break;
  }
  if (bootstrap_resamples < 1) fail("bootstrap_resamples", "bootstrap_resamples must be positive");
  if (!(interval_level > 0.0 && interval_level < 1.0)) fail("interval_level", "interval_level must lie in (0, 1)");
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.mark.line + 1, "malformed document: " + e.msg);
  }
  if (!root || root.IsNull()) throw ConfigError(0, "empty config");
  Section s(root, "config");
  RunConfig cfg;

  s.read("version", cfg.version);
  if (cfg.version != kConfigVersion) {
    throw ConfigError(line_of(root["version"]), "unsupported config version " + std::to_string(cfg.version));
  }
  const YAML::Node cmd = s.child("command");
  if (!cmd) throw ConfigError(s.line(), "missing 'command'");
  const auto kind = parse_command(convert<std::string>(cmd, "command"));
  if (!kind) throw ConfigError(line_of(cmd), "unknown command '" + cmd.as<std::string>() + "'");
  cfg.command = *kind;

  s.read("seed", cfg.seed);
  s.read("seeds", cfg.seeds);
  s.read("jobs", cfg.jobs);
  s.read("bootstrap_resamples", cfg.bootstrap_resamples);
  s.read("interval_level", cfg.interval_level);

  if (const YAML::Node n = s.child("environment")) cfg.environment = parse_environment(n);
  if (cfg.environment.kind == EnvironmentSpec::Kind::File && cfg.environment.path.is_relative()) {
    cfg.environment.path = base_dir / cfg.environment.path;
  }
  if (const YAML::Node n = s.child("policies")) {
    Section p(n, "policies");
    if (const YAML::Node t = p.child("target")) cfg.target = parse_policy(t, "target");
    if (const YAML::Node b = p.child("behaviour")) cfg.behaviour = parse_policy(b, "behaviour");
    p.finish();
  }
  if (const YAML::Node n = s.child("rules")) {
    if (!n.IsSequence()) throw ConfigError(line_of(n), "'rules' must be a list");
    for (const auto& item : n) cfg.rules.push_back(parse_rule(item));
  }
  if (const YAML::Node n = s.child("grid")) cfg.grid = parse_grid(n);
  if (const YAML::Node n = s.child("monte_carlo")) {
    Section m(n, "monte_carlo");
    m.read("trajectories", cfg.monte_carlo.trajectories);
    m.read("horizon", cfg.monte_carlo.horizon);
    m.read("truncation_tolerance", cfg.monte_carlo.truncation_tolerance);
    m.finish();
  }
  if (const YAML::Node n = s.child("evaluation")) {
    Section e(n, "evaluation");
    e.read("learning_rate", cfg.evaluation.learning_rate);
    e.read("steps", cfg.evaluation.steps);
    e.read("eval_every", cfg.evaluation.eval_every);
    e.read("segment_length", cfg.evaluation.segment_length);
    if (const YAML::Node a = e.child("anchors")) cfg.evaluation.anchors = parse_anchors(a);
    e.finish();
  }
  if (const YAML::Node n = s.child("control")) {
    Section c(n, "control");
    auto& ctl = cfg.control;
    c.read("rounds", ctl.rounds);
    c.read("steps_per_round", ctl.steps_per_round);
    c.read("learning_rate", ctl.learning_rate);
    c.read("segment_length", ctl.segment_length);
    if (const YAML::Node m = c.child("mode")) {
      const std::string name = convert<std::string>(m, "mode");
      if (name == "rule") {
        ctl.mode = EvaluationMode::Rule;
      } else if (name == "ctrace") {
        ctl.mode = EvaluationMode::Ctrace;
      } else if (name == "exact") {
        ctl.mode = EvaluationMode::Exact;
      } else {
        throw ConfigError(line_of(m), "unknown control mode '" + name + "'");
      }
    }
    if (const YAML::Node b = c.child("behaviour")) {
      const std::string name = convert<std::string>(b, "behaviour");
      if (name == "fixed-uniform") {
        ctl.behaviour = BehaviourSchedule::FixedUniform;
      } else if (name == "greedy-epsilon") {
        ctl.behaviour = BehaviourSchedule::GreedyEpsilon;
      } else {
        throw ConfigError(line_of(b), "unknown behaviour schedule '" + name + "'");
      }
    }
    c.read("epsilon", ctl.epsilon);
    c.read("target_rate", ctl.target_rate);
    c.read("target_alpha", ctl.target_alpha);
    c.read("step_scale", ctl.step_scale);
    c.read("step_exponent", ctl.step_exponent);
    c.finish();
  }
  if (const YAML::Node n = s.child("ctrace")) {
    Section c(n, "ctrace");
    auto& ct = cfg.ctrace;
    c.read("target_rate", ct.target_rate);
    c.read("target_alpha", ct.target_alpha);
    c.read("episodes", ct.episodes);
    c.read("max_episode_length", ct.max_episode_length);
    c.read("step_scale", ct.step_scale);
    c.read("step_exponent", ct.step_exponent);
    c.read("q_step_scale", ct.q_step_scale);
    c.read("truncation", ct.truncation);
    c.read("log_every", ct.log_every);
    c.finish();
  }
  s.finish();
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    std::map<std::string, int> lines;
    index_lines(root, "", lines);
    // Fall back to the nearest enclosing key that appears in the document.
    for (std::string key = e.key(); !key.empty();) {
      if (const auto it = lines.find(key); it != lines.end()) throw ConfigError(it->second, e.message(), e.key());
      const auto dot = key.rfind('.');
      key = dot == std::string::npos ? std::string() : key.substr(0, dot);
    }
    throw;
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(e.line(), path.string() + ": " + e.message(), e.key());
  }
}

std::string to_yaml(const RunConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "version" << YAML::Value << cfg.version;
  out << YAML::Key << "command" << YAML::Value << std::string(command_name(cfg.command));
  out << YAML::Key << "seed" << YAML::Value << cfg.seed;
  out << YAML::Key << "seeds" << YAML::Value << cfg.seeds;
  out << YAML::Key << "bootstrap_resamples" << YAML::Value << cfg.bootstrap_resamples;
  out << YAML::Key << "interval_level" << YAML::Value << cfg.interval_level;

  const auto& env = cfg.environment;
  out << YAML::Key << "environment" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << std::string(env_kind_name(env.kind));
  if (env.kind == EnvironmentSpec::Kind::File) {
    out << YAML::Key << "path" << YAML::Value << env.path.string();
  } else {
    out << YAML::Key << "states" << YAML::Value << env.states;
    if (env.kind != EnvironmentSpec::Kind::Chain) out << YAML::Key << "actions" << YAML::Value << env.actions;
    out << YAML::Key << "gamma" << YAML::Value << env.gamma;
  }
  if (env.kind == EnvironmentSpec::Kind::Garnet) out << YAML::Key << "branching" << YAML::Value << env.branching;
  if (env.kind == EnvironmentSpec::Kind::Chain) {
    out << YAML::Key << "right_reward" << YAML::Value << env.chain.right_reward;
    out << YAML::Key << "goal_reward" << YAML::Value << env.chain.goal_reward;
    out << YAML::Key << "left_reward" << YAML::Value << env.chain.left_reward;
  }
  out << YAML::EndMap;

  out << YAML::Key << "policies" << YAML::Value << YAML::BeginMap;
  emit_policy(out, "target", cfg.target);
  emit_policy(out, "behaviour", cfg.behaviour);
  out << YAML::EndMap;

  out << YAML::Key << "rules" << YAML::Value << YAML::BeginSeq;
  for (const auto& r : cfg.rules) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << std::string(r.kind_name());
    if (r.n_step()) {
      out << YAML::Key << "n" << YAML::Value << r.n;
    } else {
      out << YAML::Key << "alpha" << YAML::Value << r.alpha;
      out << YAML::Key << "lambda" << YAML::Value << r.lambda;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  emit_list(out, "uncorrected_n", cfg.grid.uncorrected_n);
  emit_list(out, "importance_n", cfg.grid.importance_n);
  emit_list(out, "retrace_alpha", cfg.grid.retrace_alpha);
  emit_list(out, "treebackup_alpha", cfg.grid.treebackup_alpha);
  out << YAML::EndMap;

  const auto& mc = cfg.monte_carlo;
  out << YAML::Key << "monte_carlo" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "trajectories" << YAML::Value << mc.trajectories;
  out << YAML::Key << "horizon" << YAML::Value << mc.horizon;
  out << YAML::Key << "truncation_tolerance" << YAML::Value << mc.truncation_tolerance;
  out << YAML::EndMap;

  const auto& ev = cfg.evaluation;
  out << YAML::Key << "evaluation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "learning_rate" << YAML::Value << ev.learning_rate;
  out << YAML::Key << "steps" << YAML::Value << ev.steps;
  out << YAML::Key << "eval_every" << YAML::Value << ev.eval_every;
  out << YAML::Key << "segment_length" << YAML::Value << ev.segment_length;
  out << YAML::Key << "anchors" << YAML::Value << std::string(anchors_name(ev.anchors));
  out << YAML::EndMap;

  const auto& ctl = cfg.control;
  out << YAML::Key << "control" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "rounds" << YAML::Value << ctl.rounds;
  out << YAML::Key << "steps_per_round" << YAML::Value << ctl.steps_per_round;
  out << YAML::Key << "learning_rate" << YAML::Value << ctl.learning_rate;
  out << YAML::Key << "segment_length" << YAML::Value << ctl.segment_length;
  out << YAML::Key << "mode" << YAML::Value << std::string(mode_name(ctl.mode));
  out << YAML::Key << "behaviour" << YAML::Value << std::string(schedule_name(ctl.behaviour));
  out << YAML::Key << "epsilon" << YAML::Value << ctl.epsilon;
  if (ctl.target_rate) out << YAML::Key << "target_rate" << YAML::Value << *ctl.target_rate;
  out << YAML::Key << "target_alpha" << YAML::Value << ctl.target_alpha;
  out << YAML::Key << "step_scale" << YAML::Value << ctl.step_scale;
  out << YAML::Key << "step_exponent" << YAML::Value << ctl.step_exponent;
  out << YAML::EndMap;

  const auto& ct = cfg.ctrace;
  out << YAML::Key << "ctrace" << YAML::Value << YAML::BeginMap;
  if (ct.target_rate) out << YAML::Key << "target_rate" << YAML::Value << *ct.target_rate;
  out << YAML::Key << "target_alpha" << YAML::Value << ct.target_alpha;
  out << YAML::Key << "episodes" << YAML::Value << ct.episodes;
  out << YAML::Key << "max_episode_length" << YAML::Value << ct.max_episode_length;
  out << YAML::Key << "step_scale" << YAML::Value << ct.step_scale;
  out << YAML::Key << "step_exponent" << YAML::Value << ct.step_exponent;
  if (ct.q_step_scale) out << YAML::Key << "q_step_scale" << YAML::Value << *ct.q_step_scale;
  if (ct.truncation) out << YAML::Key << "truncation" << YAML::Value << *ct.truncation;
  out << YAML::Key << "log_every" << YAML::Value << ct.log_every;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace oplab::experiments
