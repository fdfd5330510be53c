#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gw/efg.hpp"
#include "gw/solver.hpp"
#include "gw/weights.hpp"

namespace gw {

// Flat per-(infoset, action) storage: infoset I owns [offsets[I], offsets[I+1]).
std::vector<std::size_t> action_offsets(const ExtensiveGame& game);

struct CfrState {
  std::vector<std::size_t> offsets;
  std::vector<double> regrets;         // cumulative counterfactual regrets
  std::vector<double> strategy_sums;   // reach-weighted, same weight units as w_sum
  double w_sum = 0.0;
  long iterations = 0;
};

CfrState make_cfr_state(const ExtensiveGame& game);

struct CfrConfig {
  WeightScheme averaging = WeightScheme::uniform;
  double floor_fraction = 1.0;  // greedy only; floor = floor_fraction * w_sum / t
  WeightObjective objective = WeightObjective::potential;
  double cap_factor = kDefaultCapFactor;
  // Iteration t updates only player t % 2 (regrets and strategy sums).
  bool alternating = false;

  void validate() const;
};

struct CfrStep {
  double weight = 1.0;
  double relative_weight = 1.0;  // weight / (w_sum / t) before the update
  double floor = 0.0;
};

// Regret matching at every infoset; uniform where no regret is positive.
std::vector<double> current_strategy(const ExtensiveGame& game, const CfrState& state);
// Normalized strategy sums; uniform at infosets never reached.
std::vector<double> average_strategy(const ExtensiveGame& game, const CfrState& state);

// Counterfactual instantaneous regrets (and reach-weighted strategy
// increments, if requested) of `strategy`, with all chance outcomes expanded.
void counterfactual_regrets(const ExtensiveGame& game, std::span<const std::size_t> offsets,
                            std::span<const double> strategy, std::vector<double>& regrets,
                            std::vector<double>* strategy_increments = nullptr);

// One full-tree iteration. The first iteration has weight 1. Afterwards the
// weight is w_sum/t (uniform), 2 w_sum/t (linear) or, for greedy, one global
// optimal_weight over all infosets' regret components with the configured
// floor. Weights above 1 take the discount path of apply_iteration.
CfrStep cfr_iterate(const ExtensiveGame& game, CfrState& state, const CfrConfig& config);

// Expected payoff of each player under `strategy`.
std::array<double, 2> expected_values(const ExtensiveGame& game,
                                      std::span<const std::size_t> offsets,
                                      std::span<const double> strategy);
// Value player obtains by best-responding to the other player's part of
// strategy. Infosets are resolved from the deepest up.
double best_response_value(const ExtensiveGame& game, std::span<const std::size_t> offsets,
                           std::span<const double> strategy, int player);
// br_0 + br_1; at least the sum of the players' values, which is 0 here.
double exploitability_efg(const ExtensiveGame& game, std::span<const std::size_t> offsets,
                          std::span<const double> strategy);
// Sum over terminals of chance * player reach under strategy; 1 for valid input.
double terminal_reach_sum(const ExtensiveGame& game, std::span<const std::size_t> offsets,
                          std::span<const double> strategy);

// potential(R, w_sum) against sum_I Delta^2 |A_I| / t.
struct CfrAudit {
  bool holds = true;
  double potential = 0.0;
  double bound = 0.0;
  double slack = 0.0;
};
CfrAudit cfr_bound_audit(const ExtensiveGame& game, const CfrState& state);

struct CfrTracePoint {
  long iteration = 0;
  std::int64_t wall_ns = 0;  // iteration time only
  double exploitability = 0.0;
  double weight = 1.0;       // relative weight of that iteration
  double potential = 0.0;
};

struct CfrResult {
  CfrState state;
  std::vector<double> average;
  std::vector<CfrTracePoint> trace;
  long audit_violations = 0;
};

CfrResult cfr_solve(const ExtensiveGame& game, const CfrConfig& config, long iterations,
                    const EvalSchedule& schedule, bool audit = true);

}  // namespace gw
