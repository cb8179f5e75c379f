// Command-line front end: oplab <command> --config run.yaml [--seed N] [--out DIR] [--jobs N]

#include "oplab/experiments/commands.hpp"
#include "oplab/experiments/config.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "results";
  std::optional<int> jobs;
};

int run(oplab::experiments::CommandKind kind, const Flags& flags) {
  using namespace oplab::experiments;
  RunConfig cfg = load_config(flags.config);
  if (cfg.command != kind) {
    std::fprintf(stderr, "warning: config declares command '%s', running '%s'\n",
                 std::string(command_name(cfg.command)).c_str(), std::string(command_name(kind)).c_str());
    cfg.command = kind;
  }
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.jobs) cfg.jobs = *flags.jobs;
  cfg.validate();
  const RunOutput out = run_command(cfg);
  write_outputs(cfg, out, flags.out);
  for (const auto& w : out.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  for (const auto& a : out.artifacts) std::printf("%s/%s\n", flags.out.c_str(), a.name.c_str());
  std::printf("%s/manifest.json\n", flags.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using oplab::experiments::CommandKind;
  CLI::App app{"Tabular off-policy evaluation lab"};
  app.require_subcommand(1);

  Flags flags;
  const std::pair<CommandKind, const char*> commands[] = {
      {CommandKind::GenMdp, "Generate MDPs and write them as JSON"},
      {CommandKind::Analyze, "Exact contraction, fixed point and bias of one rule"},
      {CommandKind::Sweep, "Contraction / bias / variance trade-off sweep"},
      {CommandKind::EvalCurve, "TD-style evaluation error curves"},
      {CommandKind::Control, "Policy iteration with off-policy evaluation"},
      {CommandKind::Ctrace, "Adaptive-alpha evaluation toward a target contraction rate"},
  };
  std::optional<CommandKind> chosen;
  for (const auto& [kind, help] : commands) {
    CLI::App* sub = app.add_subcommand(std::string(oplab::experiments::command_name(kind)), help);
    sub->add_option("--config", flags.config, "Run configuration (YAML)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "Master seed, overriding the config");
    sub->add_option("--out", flags.out, "Output directory")->capture_default_str();
    sub->add_option("--jobs", flags.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->callback([&chosen, kind = kind] { chosen = kind; });
  }

  CLI11_PARSE(app, argc, argv);
  try {
    return run(*chosen, flags);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
