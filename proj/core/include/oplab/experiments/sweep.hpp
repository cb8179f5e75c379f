#pragma once

#include "oplab/mdp.hpp"
#include "oplab/update_rule.hpp"
#include "oplab/variance.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace oplab::experiments {

// One rule evaluated on one MDP: exact contraction and bias, Monte Carlo
// root variance at Q = 0.
struct TradeoffPoint {
  UpdateRuleSpec rule;
  double contraction_sup = 0.0;
  double contraction_nu = 0.0;
  double bias_l2 = 0.0;
  double root_variance = 0.0;
  std::uint64_t seed = 0;
  std::string mdp_id;
};

// Variance starts are drawn from nu = initial distribution x behaviour. The
// Monte Carlo stream of each rule is mc.rng.derive(rule.stream_key()), so
// adding rules to a grid leaves existing points unchanged.
TradeoffPoint tradeoff_point(const Mdp& mdp, const UpdateRuleSpec& rule, const Policy& target,
                             const Policy& behaviour, const McConfig& mc);

// CSV with header
// rule,n,alpha,lambda,contraction_sup,contraction_nu,bias_l2,root_variance,seed,mdp_id.
std::string tradeoff_csv(const std::vector<TradeoffPoint>& points);

// True when for every uncorrected n-step point some Retrace point has both
// contraction_sup and bias_l2 no larger (up to `slack`).
bool retrace_dominates_uncorrected(const std::vector<TradeoffPoint>& points, double slack = 1e-9);

}  // namespace oplab::experiments
