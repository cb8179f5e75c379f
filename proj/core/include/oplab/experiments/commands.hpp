#pragma once

#include "oplab/experiments/config.hpp"
#include "oplab/experiments/sweep.hpp"
#include "oplab/mdp.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace oplab::experiments {

inline constexpr const char* kVersion = "0.1.0";

// Stream indices under each replicate seed. Replicate i of a run uses seed
// master_seed + i; component streams are RngStream(seed, tag), and per-rule
// streams derive from them with rule.stream_key().
enum StreamTag : std::uint64_t {
  kEnvironmentStream = 1,
  kTargetStream = 2,
  kBehaviourStream = 3,
  kMonteCarloStream = 4,
  kLearningStream = 5,
  kBootstrapStream = 6,
};

struct Replicate {
  std::uint64_t seed = 0;
  Mdp mdp;
  Policy target;
  Policy behaviour;
  std::string mdp_id;
};

Mdp make_environment(const EnvironmentSpec& spec, std::uint64_t seed);
Replicate make_replicate(const RunConfig& cfg, int index);

struct Artifact {
  std::string name;
  std::string content;
};

struct RunOutput {
  std::vector<Artifact> artifacts;
  std::vector<std::string> warnings;

  // Content of the named artifact; throws std::out_of_range when missing.
  const std::string& at(std::string_view name) const;
};

// Each command computes its artifacts in memory; nothing touches the file
// system except reading an MDP file named by the config.
RunOutput run_gen_mdp(const RunConfig& cfg);
RunOutput run_analyze(const RunConfig& cfg);
RunOutput run_sweep(const RunConfig& cfg);
RunOutput run_eval_curve(const RunConfig& cfg);
RunOutput run_control(const RunConfig& cfg);
RunOutput run_ctrace(const RunConfig& cfg);
RunOutput run_command(const RunConfig& cfg);

// Sweep points for every (seed, grid rule), ordered by seed then grid order.
std::vector<TradeoffPoint> sweep_points(const RunConfig& cfg);

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);

// JSON recording the command, config hash, master seed, seed count, versions
// and a content hash of each artifact.
std::string manifest_json(const RunConfig& cfg, const RunOutput& out);

// Writes every artifact, the resolved config and manifest.json into dir.
void write_outputs(const RunConfig& cfg, const RunOutput& out, const std::filesystem::path& dir);

}  // namespace oplab::experiments
