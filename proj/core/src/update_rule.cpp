#include "oplab/update_rule.hpp"

#include "oplab/rng.hpp"

#include <bit>
#include <cstdio>
#include <stdexcept>

namespace oplab {

UpdateRuleSpec UpdateRuleSpec::uncorrected(int n) {
  UpdateRuleSpec r{RuleKind::NStepUncorrected, n, 1.0, 1.0};
  r.validate();
  return r;
}

UpdateRuleSpec UpdateRuleSpec::importance_weighted(int n) {
  UpdateRuleSpec r{RuleKind::NStepImportanceWeighted, n, 1.0, 1.0};
  r.validate();
  return r;
}

UpdateRuleSpec UpdateRuleSpec::retrace(double alpha, double lambda) {
  UpdateRuleSpec r{RuleKind::Retrace, 1, alpha, lambda};
  r.validate();
  return r;
}

UpdateRuleSpec UpdateRuleSpec::tree_backup(double alpha, double lambda) {
  UpdateRuleSpec r{RuleKind::TreeBackup, 1, alpha, lambda};
  r.validate();
  return r;
}

void UpdateRuleSpec::validate() const {
  if (n < 1) throw std::invalid_argument("update rule: n must be at least 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("update rule: alpha outside [0, 1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("update rule: lambda outside [0, 1]");
}

std::string_view UpdateRuleSpec::kind_name() const {
  switch (kind) {
    case RuleKind::NStepUncorrected: return "uncorrected";
    case RuleKind::NStepImportanceWeighted: return "importance";
    case RuleKind::Retrace: return "retrace";
    case RuleKind::TreeBackup: return "treebackup";
  }
  return "unknown";
}

std::string UpdateRuleSpec::label() const {
  char buf[64];
  if (n_step()) {
    std::snprintf(buf, sizeof buf, "n=%d", n);
  } else if (lambda == 1.0) {
    std::snprintf(buf, sizeof buf, "alpha=%.12g", alpha);
  } else {
    std::snprintf(buf, sizeof buf, "alpha=%.12g;lambda=%.12g", alpha, lambda);
  }
  return buf;
}

std::uint64_t UpdateRuleSpec::stream_key() const {
  std::uint64_t h = splitmix64(static_cast<std::uint64_t>(kind) + 1);
  if (n_step()) return splitmix64(h ^ static_cast<std::uint64_t>(n));
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(alpha));
  return splitmix64(h ^ std::bit_cast<std::uint64_t>(lambda));
}

std::optional<RuleKind> parse_rule_kind(std::string_view name) {
  if (name == "uncorrected") return RuleKind::NStepUncorrected;
  if (name == "importance") return RuleKind::NStepImportanceWeighted;
  if (name == "retrace") return RuleKind::Retrace;
  if (name == "treebackup") return RuleKind::TreeBackup;
  return std::nullopt;
}

}  // namespace oplab
