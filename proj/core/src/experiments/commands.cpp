#include "oplab/experiments/commands.hpp"

#include "oplab/control.hpp"
#include "oplab/ctrace.hpp"
#include "oplab/dynamic_programming.hpp"
#include "oplab/experiments/bootstrap.hpp"
#include "oplab/experiments/csv.hpp"
#include "oplab/generators.hpp"
#include "oplab/mdp_io.hpp"
#include "oplab/operators.hpp"
#include "oplab/parallel.hpp"
#include "oplab/td_learning.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace oplab::experiments {

namespace {

using Json = nlohmann::ordered_json;

std::string seed_file(std::string_view stem, std::uint64_t seed, std::string_view ext) {
  return std::string(stem) + "_seed" + std::to_string(seed) + std::string(ext);
}

Policy make_policy(const PolicySpec& spec, const Mdp& mdp, std::uint64_t seed, StreamTag tag) {
  switch (spec.kind) {
    case PolicySpec::Kind::Uniform:
      return Policy::uniform(mdp.n_states(), mdp.n_actions());
    case PolicySpec::Kind::Dirichlet: {
      RngStream rng(spec.seed.value_or(seed), tag);
      return Policy::dirichlet(mdp.n_states(), mdp.n_actions(), rng);
    }
    case PolicySpec::Kind::Optimal:
      return optimal_policy(mdp);
    case PolicySpec::Kind::EpsilonGreedy:
      return mixture(optimal_policy(mdp), Policy::uniform(mdp.n_states(), mdp.n_actions()), 1.0 - spec.epsilon);
  }
  throw std::logic_error("make_policy: unknown kind");
}

std::string environment_id(const EnvironmentSpec& spec, const Mdp& mdp, std::uint64_t seed) {
  char buf[160];
  switch (spec.kind) {
    case EnvironmentSpec::Kind::Dirichlet:
      std::snprintf(buf, sizeof buf, "dirichlet-%dx%d-s%llu", mdp.n_states(), mdp.n_actions(),
                    static_cast<unsigned long long>(seed));
      break;
    case EnvironmentSpec::Kind::Garnet:
      std::snprintf(buf, sizeof buf, "garnet-%dx%d-b%d-s%llu", mdp.n_states(), mdp.n_actions(), spec.branching,
                    static_cast<unsigned long long>(seed));
      break;
    case EnvironmentSpec::Kind::Chain:
      std::snprintf(buf, sizeof buf, "chain-%d", mdp.n_states());
      break;
    case EnvironmentSpec::Kind::File:
      std::snprintf(buf, sizeof buf, "file-%s", spec.path.stem().string().c_str());
      break;
  }
  return buf;
}

double rule_param(const UpdateRuleSpec& rule) { return rule.n_step() ? rule.n : rule.alpha; }

std::vector<Replicate> replicates(const RunConfig& cfg) {
  std::vector<Replicate> out;
  out.reserve(static_cast<std::size_t>(cfg.seeds));
  for (int i = 0; i < cfg.seeds; ++i) out.push_back(make_replicate(cfg, i));
  return out;
}

RngStream bootstrap_rng(const RunConfig& cfg, const std::string& group) {
  return RngStream(cfg.seed, kBootstrapStream).derive(fnv1a(group));
}

const std::vector<std::string> kSummaryStats = {"mean", "bootstrap_se", "ci_low", "ci_high", "n_seeds"};

std::vector<std::string> summary_fields(const BootstrapSummary& s) {
  return {format_real(s.mean), format_real(s.std_error), format_real(s.ci_low), format_real(s.ci_high),
          std::to_string(s.n)};
}

std::vector<std::string> with_stats(std::vector<std::string> head) {
  head.insert(head.end(), kSummaryStats.begin(), kSummaryStats.end());
  return head;
}

// nu = initial distribution x behaviour, the rate C_nu(alpha) and its use as
// a target rate.
double rate_at(const Mdp& mdp, const Policy& target, const Policy& behaviour, double alpha) {
  return averaged_contraction(mdp, target, behaviour, alpha, StateActionDist::initial_pairs(mdp, behaviour));
}

}  // namespace

const std::string& RunOutput::at(std::string_view name) const {
  for (const auto& a : artifacts) {
    if (a.name == name) return a.content;
  }
  throw std::out_of_range("RunOutput: no artifact " + std::string(name));
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Mdp make_environment(const EnvironmentSpec& spec, std::uint64_t seed) {
  RngStream rng(seed, kEnvironmentStream);
  GeneratorOptions options;
  options.gamma = spec.gamma;
  switch (spec.kind) {
    case EnvironmentSpec::Kind::Dirichlet:
      return gen_dirichlet_uniform(spec.states, spec.actions, rng, options);
    case EnvironmentSpec::Kind::Garnet:
      return gen_garnet(spec.states, spec.actions, spec.branching, rng, options);
    case EnvironmentSpec::Kind::Chain: {
      ChainOptions chain = spec.chain;
      chain.gamma = spec.gamma;
      return gen_chain(spec.states, chain);
    }
    case EnvironmentSpec::Kind::File:
      return load_mdp(spec.path);
  }
  throw std::logic_error("make_environment: unknown kind");
}

Replicate make_replicate(const RunConfig& cfg, int index) {
  const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(index);
  Mdp mdp = make_environment(cfg.environment, seed);
  Policy target = make_policy(cfg.target, mdp, seed, kTargetStream);
  Policy behaviour = make_policy(cfg.behaviour, mdp, seed, kBehaviourStream);
  std::string id = environment_id(cfg.environment, mdp, seed);
  return Replicate{seed, std::move(mdp), std::move(target), std::move(behaviour), std::move(id)};
}

RunOutput run_gen_mdp(const RunConfig& cfg) {
  RunOutput out;
  for (int i = 0; i < cfg.seeds; ++i) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
    out.artifacts.push_back({seed_file("mdp", seed, ".json"), mdp_to_json(make_environment(cfg.environment, seed))});
  }
  return out;
}

RunOutput run_analyze(const RunConfig& cfg) {
  const UpdateRuleSpec rule = cfg.rules.at(0);
  const auto reps = replicates(cfg);
  RunOutput out;
  out.artifacts.resize(reps.size());
  parallel_for(reps.size(), cfg.jobs, [&](std::size_t i) {
    const Replicate& r = reps[i];
    const StateActionDist nu = StateActionDist::initial_pairs(r.mdp, r.behaviour);
    const AffineOperator op = build_operator(r.mdp, rule, r.target, r.behaviour);
    const ContractionProfile profile = contraction_profile(op, nu);
    const QTable fixed = fixed_point(op);
    const QTable truth = exact_q(r.mdp, r.target);
    Json doc;
    doc["seed"] = r.seed;
    doc["mdp_id"] = r.mdp_id;
    doc["rule"] = {{"kind", std::string(rule.kind_name())}};
    if (rule.n_step()) {
      doc["rule"]["n"] = rule.n;
    } else {
      doc["rule"]["alpha"] = rule.alpha;
      doc["rule"]["lambda"] = rule.lambda;
    }
    doc["gamma"] = r.mdp.gamma();
    doc["contraction"] = {{"per_pair", std::vector<double>(profile.per_pair.begin(), profile.per_pair.end())},
                          {"sup", profile.sup_rate},
                          {"nu_avg", profile.nu_avg}};
    doc["fixed_point"] = std::vector<double>(fixed.values.begin(), fixed.values.end());
    doc["exact_q"] = std::vector<double>(truth.values.begin(), truth.values.end());
    doc["bias_l2"] = (fixed.values - truth.values).norm();
    out.artifacts[i] = {seed_file("analyze", r.seed, ".json"), doc.dump(2) + "\n"};
  });
  return out;
}

std::vector<TradeoffPoint> sweep_points(const RunConfig& cfg) {
  const auto reps = replicates(cfg);
  const std::vector<UpdateRuleSpec> rules = cfg.grid.rules();
  std::vector<TradeoffPoint> points(reps.size() * rules.size());
  parallel_for(points.size(), cfg.jobs, [&](std::size_t k) {
    const Replicate& r = reps[k / rules.size()];
    McConfig mc;
    mc.n_trajectories = cfg.monte_carlo.trajectories;
    mc.horizon = cfg.monte_carlo.horizon;
    mc.truncation_tolerance = cfg.monte_carlo.truncation_tolerance;
    mc.rng = RngStream(r.seed, kMonteCarloStream);
    TradeoffPoint p = tradeoff_point(r.mdp, rules[k % rules.size()], r.target, r.behaviour, mc);
    p.seed = r.seed;
    p.mdp_id = r.mdp_id;
    points[k] = std::move(p);
  });
  return points;
}

RunOutput run_sweep(const RunConfig& cfg) {
  const std::vector<TradeoffPoint> points = sweep_points(cfg);
  const std::vector<UpdateRuleSpec> rules = cfg.grid.rules();
  RunOutput out;
  out.artifacts.push_back({"sweep.csv", tradeoff_csv(points)});
  for (int i = 0; i < cfg.seeds; ++i) {
    const auto first = points.begin() + static_cast<std::ptrdiff_t>(i * rules.size());
    const std::vector<TradeoffPoint> mine(first, first + static_cast<std::ptrdiff_t>(rules.size()));
    out.artifacts.push_back({seed_file("sweep", mine.front().seed, ".csv"), tradeoff_csv(mine)});
  }

  CsvWriter summary(with_stats({"rule", "n", "alpha", "lambda", "metric"}));
  const std::pair<const char*, double TradeoffPoint::*> metrics[] = {
      {"contraction_sup", &TradeoffPoint::contraction_sup},
      {"contraction_nu", &TradeoffPoint::contraction_nu},
      {"bias_l2", &TradeoffPoint::bias_l2},
      {"root_variance", &TradeoffPoint::root_variance},
  };
  for (std::size_t j = 0; j < rules.size(); ++j) {
    const UpdateRuleSpec& rule = rules[j];
    for (const auto& [name, field] : metrics) {
      std::vector<double> values;
      for (int i = 0; i < cfg.seeds; ++i) values.push_back(points[static_cast<std::size_t>(i) * rules.size() + j].*field);
      const std::string group = "sweep/" + rule.label() + "/" + std::string(rule.kind_name()) + "/" + name;
      const BootstrapSummary s =
          bootstrap_mean(values, cfg.bootstrap_resamples, cfg.interval_level, bootstrap_rng(cfg, group));
      std::vector<std::string> row = {std::string(rule.kind_name()),
                                      rule.n_step() ? std::to_string(rule.n) : "",
                                      rule.n_step() ? "" : format_real(rule.alpha),
                                      rule.n_step() ? "" : format_real(rule.lambda), name};
      const auto stats = summary_fields(s);
      row.insert(row.end(), stats.begin(), stats.end());
      summary.row(row);
    }
  }
  out.artifacts.push_back({"sweep_summary.csv", summary.str()});
  return out;
}

RunOutput run_eval_curve(const RunConfig& cfg) {
  const auto reps = replicates(cfg);
  const auto& rules = cfg.rules;
  std::vector<std::vector<ErrorPoint>> curves(reps.size() * rules.size());
  parallel_for(curves.size(), cfg.jobs, [&](std::size_t k) {
    const Replicate& r = reps[k / rules.size()];
    const UpdateRuleSpec& rule = rules[k % rules.size()];
    TdEvalConfig ec;
    ec.td.learning_rate = cfg.evaluation.learning_rate;
    ec.td.segment_length = cfg.evaluation.segment_length;
    ec.td.anchors = cfg.evaluation.anchors;
    ec.n_steps = cfg.evaluation.steps;
    ec.eval_every = cfg.evaluation.eval_every;
    curves[k] = td_eval_loop(r.mdp, rule, r.target, r.behaviour, ec,
                             RngStream(r.seed, kLearningStream).derive(rule.stream_key()));
  });

  RunOutput out;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    CsvWriter csv({"env_steps", "l2_error", "seed", "rule", "param"});
    for (std::size_t j = 0; j < rules.size(); ++j) {
      for (const ErrorPoint& p : curves[i * rules.size() + j]) {
        csv.row({std::to_string(p.env_steps), format_real(p.l2_error), std::to_string(reps[i].seed),
                 std::string(rules[j].kind_name()), format_real(rule_param(rules[j]))});
      }
    }
    out.artifacts.push_back({seed_file("eval_curve", reps[i].seed, ".csv"), csv.str()});
  }

  CsvWriter summary(with_stats({"rule", "param", "env_steps"}));
  for (std::size_t j = 0; j < rules.size(); ++j) {
    const auto& reference = curves[j];
    for (std::size_t t = 0; t < reference.size(); ++t) {
      std::vector<double> values;
      for (std::size_t i = 0; i < reps.size(); ++i) values.push_back(curves[i * rules.size() + j][t].l2_error);
      const std::string group = "eval/" + std::string(rules[j].kind_name()) + "/" + rules[j].label() + "/" +
                                std::to_string(reference[t].env_steps);
      const BootstrapSummary s =
          bootstrap_mean(values, cfg.bootstrap_resamples, cfg.interval_level, bootstrap_rng(cfg, group));
      std::vector<std::string> row = {std::string(rules[j].kind_name()), format_real(rule_param(rules[j])),
                                      std::to_string(reference[t].env_steps)};
      const auto stats = summary_fields(s);
      row.insert(row.end(), stats.begin(), stats.end());
      summary.row(row);
    }
  }
  out.artifacts.push_back({"eval_curve_summary.csv", summary.str()});
  return out;
}

RunOutput run_control(const RunConfig& cfg) {
  const auto reps = replicates(cfg);
  const auto& ctl = cfg.control;
  const bool adaptive = ctl.mode == EvaluationMode::Ctrace;
  const std::vector<UpdateRuleSpec> rules = adaptive ? std::vector<UpdateRuleSpec>{UpdateRuleSpec::retrace(1.0)}
                                                     : cfg.rules;
  const auto label = [&](const UpdateRuleSpec& r) {
    return adaptive ? std::string("ctrace") : std::string(r.kind_name());
  };

  std::vector<double> params(reps.size() * rules.size());
  std::vector<std::optional<ControlResult>> slots(reps.size() * rules.size());
  parallel_for(slots.size(), cfg.jobs, [&](std::size_t k) {
    const Replicate& r = reps[k / rules.size()];
    const UpdateRuleSpec& rule = rules[k % rules.size()];
    ControlConfig cc;
    cc.rounds = ctl.rounds;
    cc.env_steps_per_round = ctl.steps_per_round;
    cc.mode = ctl.mode;
    cc.rule = rule;
    cc.behaviour = ctl.behaviour;
    cc.epsilon = ctl.epsilon;
    cc.td.learning_rate = ctl.learning_rate;
    cc.td.segment_length = ctl.segment_length;
    cc.td.anchors = cfg.evaluation.anchors;
    cc.rng = RngStream(r.seed, kLearningStream).derive(rule.stream_key());
    double param = rule_param(rule);
    if (adaptive) {
      const Policy uniform = Policy::uniform(r.mdp.n_states(), r.mdp.n_actions());
      cc.target_rate = ctl.target_rate.value_or(rate_at(r.mdp, optimal_policy(r.mdp), uniform, ctl.target_alpha));
      cc.phi_schedule = {ctl.step_scale, ctl.step_exponent};
      param = cc.target_rate;
    }
    params[k] = param;
    slots[k] = policy_iteration(r.mdp, cc);
  });

  RunOutput out;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    CsvWriter csv({"round", "env_steps_total", "suboptimality", "rule", "param", "seed"});
    for (std::size_t j = 0; j < rules.size(); ++j) {
      const std::size_t k = i * rules.size() + j;
      for (const ControlPoint& p : slots[k]->curve) {
        csv.row({std::to_string(p.round), std::to_string(p.env_steps_total), format_real(p.suboptimality),
                 label(rules[j]), format_real(params[k]), std::to_string(reps[i].seed)});
      }
    }
    out.artifacts.push_back({seed_file("control", reps[i].seed, ".csv"), csv.str()});
  }

  CsvWriter summary(with_stats({"rule", "param", "round", "env_steps_total"}));
  for (std::size_t j = 0; j < rules.size(); ++j) {
    const auto& reference = slots[j]->curve;
    for (std::size_t t = 0; t < reference.size(); ++t) {
      std::vector<double> values;
      for (std::size_t i = 0; i < reps.size(); ++i) values.push_back(slots[i * rules.size() + j]->curve[t].suboptimality);
      const std::string group = "control/" + label(rules[j]) + "/" + rules[j].label() + "/" +
                                std::to_string(reference[t].round);
      const BootstrapSummary s =
          bootstrap_mean(values, cfg.bootstrap_resamples, cfg.interval_level, bootstrap_rng(cfg, group));
      // The adaptive target rate differs per seed; the summary reports the first.
      std::vector<std::string> row = {label(rules[j]), format_real(params[j]), std::to_string(reference[t].round),
                                      std::to_string(reference[t].env_steps_total)};
      const auto stats = summary_fields(s);
      row.insert(row.end(), stats.begin(), stats.end());
      summary.row(row);
    }
  }
  out.artifacts.push_back({"control_summary.csv", summary.str()});
  return out;
}

RunOutput run_ctrace(const RunConfig& cfg) {
  const auto reps = replicates(cfg);
  const auto& ct = cfg.ctrace;
  std::vector<std::optional<CtraceResult>> results(reps.size());
  std::vector<double> rates(reps.size());
  parallel_for(reps.size(), cfg.jobs, [&](std::size_t i) {
    const Replicate& r = reps[i];
    CtraceEvalConfig ec;
    ec.target_rate = ct.target_rate.value_or(rate_at(r.mdp, r.target, r.behaviour, ct.target_alpha));
    ec.schedule = {ct.step_scale, ct.step_exponent};
    if (ct.q_step_scale) ec.q_schedule = StepSchedule{*ct.q_step_scale, ct.step_exponent};
    ec.n_episodes = ct.episodes;
    ec.max_episode_length = ct.max_episode_length;
    ec.truncation = ct.truncation;
    ec.log_every = ct.log_every;
    rates[i] = ec.target_rate;
    results[i] = ctrace_eval_loop(r.mdp, r.target, r.behaviour, ec, RngStream(r.seed, kLearningStream));
  });

  RunOutput out;
  CsvWriter finals({"seed", "target_rate", "alpha_star", "final_alpha", "final_c_nu", "rate_error",
                    "q_error_inf", "q_star_norm_inf", "relative_q_error", "clamp_events"});
  std::vector<double> rate_errors;
  std::vector<double> q_errors;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const CtraceResult& res = *results[i];
    CsvWriter csv({"episode", "phi", "alpha", "c_hat", "exact_c_nu", "q_error_inf"});
    for (const CtraceLogRow& row : res.log) {
      csv.row({std::to_string(row.episode), format_real(row.phi), format_real(row.alpha), format_real(row.c_hat),
               format_real(row.exact_c_nu), format_real(row.q_error_inf)});
    }
    out.artifacts.push_back({seed_file("ctrace", reps[i].seed, ".csv"), csv.str()});
    if (res.warning) out.warnings.push_back("seed " + std::to_string(reps[i].seed) + ": " + *res.warning);

    const double final_alpha = res.state.alpha();
    const double final_rate = rate_at(reps[i].mdp, reps[i].target, reps[i].behaviour, final_alpha);
    const double q_error = res.log.empty() ? 0.0 : res.log.back().q_error_inf;
    const double relative = res.q_star_norm_inf > 0.0 ? q_error / res.q_star_norm_inf : q_error;
    rate_errors.push_back(std::abs(final_rate - rates[i]));
    q_errors.push_back(relative);
    finals.row({std::to_string(reps[i].seed), format_real(rates[i]), format_real(res.alpha_star),
                format_real(final_alpha), format_real(final_rate), format_real(rate_errors.back()),
                format_real(q_error), format_real(res.q_star_norm_inf), format_real(relative),
                std::to_string(res.state.clamp_events)});
  }
  out.artifacts.push_back({"ctrace_final.csv", finals.str()});

  CsvWriter summary(with_stats({"metric"}));
  const std::pair<const char*, const std::vector<double>*> metrics[] = {
      {"rate_error", &rate_errors}, {"relative_q_error", &q_errors}};
  for (const auto& [name, values] : metrics) {
    const BootstrapSummary s = bootstrap_mean(*values, cfg.bootstrap_resamples, cfg.interval_level,
                                              bootstrap_rng(cfg, std::string("ctrace/") + name));
    std::vector<std::string> row = {name};
    const auto stats = summary_fields(s);
    row.insert(row.end(), stats.begin(), stats.end());
    summary.row(row);
  }
  out.artifacts.push_back({"ctrace_summary.csv", summary.str()});
  return out;
}

RunOutput run_command(const RunConfig& cfg) {
  cfg.validate();
  switch (cfg.command) {
    case CommandKind::GenMdp: return run_gen_mdp(cfg);
    case CommandKind::Analyze: return run_analyze(cfg);
    case CommandKind::Sweep: return run_sweep(cfg);
    case CommandKind::EvalCurve: return run_eval_curve(cfg);
    case CommandKind::Control: return run_control(cfg);
    case CommandKind::Ctrace: return run_ctrace(cfg);
  }
  throw std::logic_error("run_command: unknown command");
}

std::string manifest_json(const RunConfig& cfg, const RunOutput& out) {
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(to_yaml(cfg))));
  Json doc;
  doc["command"] = std::string(command_name(cfg.command));
  doc["config_hash"] = std::string("fnv1a64:") + hash;
  doc["master_seed"] = cfg.seed;
  doc["seeds"] = cfg.seeds;
  doc["versions"] = {{"oplab", kVersion}, {"config_schema", kConfigVersion}, {"mdp_format", kMdpFormatVersion}};
  Json files = Json::array();
  for (const auto& a : out.artifacts) {
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(a.content)));
    files.push_back({{"name", a.name}, {"fnv1a64", hash}});
  }
  doc["artifacts"] = files;
  doc["warnings"] = out.warnings;
  return doc.dump(2) + "\n";
}

void write_outputs(const RunConfig& cfg, const RunOutput& out, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    f << content;
    if (!f) throw std::runtime_error("write failed for " + (dir / name).string());
  };
  for (const auto& a : out.artifacts) write(a.name, a.content);
  write("config.yaml", to_yaml(cfg));
  write("manifest.json", manifest_json(cfg, out));
}

}  // namespace oplab::experiments
