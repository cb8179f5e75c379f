#include "oplab/experiments/sweep.hpp"

#include "oplab/experiments/csv.hpp"
#include "oplab/operators.hpp"

#include <cmath>

namespace oplab::experiments {

TradeoffPoint tradeoff_point(const Mdp& mdp, const UpdateRuleSpec& rule, const Policy& target,
                             const Policy& behaviour, const McConfig& mc) {
  const StateActionDist nu = StateActionDist::initial_pairs(mdp, behaviour);
  const AffineOperator op = build_operator(mdp, rule, target, behaviour);
  const ContractionProfile profile = contraction_profile(op, nu);
  TradeoffPoint p;
  p.rule = rule;
  p.contraction_sup = profile.sup_rate;
  p.contraction_nu = profile.nu_avg;
  p.bias_l2 = fixed_point_bias(op, mdp, target);
  McConfig cfg = mc;
  cfg.rng = mc.rng.derive(rule.stream_key());
  const QTable zero(mdp.n_states(), mdp.n_actions());
  p.root_variance = std::sqrt(variance(mdp, rule, zero, nu, target, behaviour, cfg).mean_square);
  return p;
}

std::string tradeoff_csv(const std::vector<TradeoffPoint>& points) {
  CsvWriter csv({"rule", "n", "alpha", "lambda", "contraction_sup", "contraction_nu", "bias_l2",
                 "root_variance", "seed", "mdp_id"});
  for (const auto& p : points) {
    const bool n_step = p.rule.n_step();
    csv.row({std::string(p.rule.kind_name()), n_step ? std::to_string(p.rule.n) : "",
             n_step ? "" : format_real(p.rule.alpha), n_step ? "" : format_real(p.rule.lambda),
             format_real(p.contraction_sup), format_real(p.contraction_nu), format_real(p.bias_l2),
             format_real(p.root_variance), std::to_string(p.seed), p.mdp_id});
  }
  return csv.str();
}

bool retrace_dominates_uncorrected(const std::vector<TradeoffPoint>& points, double slack) {
  for (const auto& u : points) {
    if (u.rule.kind != RuleKind::NStepUncorrected) continue;
    bool covered = false;
    for (const auto& r : points) {
      if (r.rule.kind == RuleKind::Retrace && r.contraction_sup <= u.contraction_sup + slack &&
          r.bias_l2 <= u.bias_l2 + slack) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

}  // namespace oplab::experiments
