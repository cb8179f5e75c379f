#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace oplab {

enum class RuleKind { NStepUncorrected, NStepImportanceWeighted, Retrace, TreeBackup };

// An off-policy update rule and its parameters. `n` applies to the n-step
// kinds; `alpha` (mixture weight on the target policy) and `lambda` apply to
// the trace kinds.
struct UpdateRuleSpec {
  RuleKind kind = RuleKind::Retrace;
  int n = 1;
  double alpha = 1.0;
  double lambda = 1.0;

  static UpdateRuleSpec uncorrected(int n);
  static UpdateRuleSpec importance_weighted(int n);
  static UpdateRuleSpec retrace(double alpha = 1.0, double lambda = 1.0);
  static UpdateRuleSpec tree_backup(double alpha = 1.0, double lambda = 1.0);

  bool n_step() const {
    return kind == RuleKind::NStepUncorrected || kind == RuleKind::NStepImportanceWeighted;
  }
  bool trace_based() const { return !n_step(); }

  // Throws std::invalid_argument when a parameter is out of range.
  void validate() const;

  // Short name used in CSV output: uncorrected, importance, retrace, treebackup.
  std::string_view kind_name() const;
  // "n=5" or "alpha=0.25" (plus lambda when it is not 1).
  std::string label() const;
  // Stable 64-bit identity, used to derive per-rule random streams.
  std::uint64_t stream_key() const;

  friend bool operator==(const UpdateRuleSpec&, const UpdateRuleSpec&) = default;
};

std::optional<RuleKind> parse_rule_kind(std::string_view name);

}  // namespace oplab
