#pragma once

#include <cstdint>
#include <vector>

#include "gw/game.hpp"
#include "gw/metrics.hpp"
#include "gw/solver.hpp"

namespace gw {

// A game restricted to ordered per-player subsets of the base game's actions.
// Restricted action k of player i is base action support(i)[k].
class RestrictedGame {
 public:
  RestrictedGame(Game base, std::vector<std::vector<int>> support);

  const Game& base() const noexcept { return base_; }
  const std::vector<std::vector<int>>& support() const noexcept { return support_; }
  bool contains(int player, int action) const;
  // Appends a base action; returns false if already present.
  bool add(int player, int action);

  // Dense copy of the restricted payoff tensor.
  Game materialize(std::uint64_t cell_limit = kDefaultCellLimit) const;
  // Restricted profile -> base profile; actions outside the support get 0.
  MixedProfile lift(const MixedProfile& restricted) const;
  // Re-indexes a profile over an older, smaller support onto this support;
  // actions added since get 0.
  MixedProfile extend(const MixedProfile& previous) const;

 private:
  Game base_;
  std::vector<std::vector<int>> support_;
};

struct DoubleOracleConfig {
  SolverConfig inner;          // inner.iterations is the per-round budget
  bool seed_previous = true;   // first iterate of each round = previous average
  double outer_tol = 1e-3;     // add a best response only if it gains more
  int max_rounds = 50;
  // false keeps running rounds until max_rounds even when nothing is added,
  // which fixes the total iteration count across variants.
  bool stop_when_converged = true;
  std::uint64_t seed = 0;      // initial restriction: one uniform action per player
};

struct DoubleOracleRound {
  int round = 0;
  std::vector<int> support_sizes;
  long iterations = 0;
  double inner_gap = 0.0;           // nash_gap inside the restricted game
  std::vector<double> full_gains;   // best-response gain per player in the base game
  int added = 0;
};

struct DoubleOracleResult {
  MixedProfile profile;  // over the base game's action sets
  // Supports the final profile was solved on.
  std::vector<std::vector<int>> support;
  std::vector<DoubleOracleRound> rounds;
  long total_iterations = 0;
  double inner_gap = 0.0;
  double final_gap = 0.0;  // base-game nash_gap of profile
  bool converged = false;  // last round added nothing
};

DoubleOracleResult double_oracle_solve(const Game& game, const DoubleOracleConfig& config);

}  // namespace gw
