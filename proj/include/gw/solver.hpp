#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "gw/game.hpp"
#include "gw/metrics.hpp"
#include "gw/regret.hpp"
#include "gw/rng.hpp"
#include "gw/weights.hpp"

namespace gw {

enum class Metric { nash_gap, exploitability, ce_gap, cce_gap, welfare, potential, max_avg_regret };

std::string_view to_string(Metric metric) noexcept;
Metric parse_metric(std::string_view text);

// Iterations (1-based, counting the initial iterate) at which metrics are
// recorded: `points` log-spaced values in [1, horizon], deduplicated, always
// ending at horizon. An explicit list overrides the spacing.
struct EvalSchedule {
  int points = 20;
  std::vector<long> explicit_iterations;

  std::vector<long> iterations(long horizon) const;
};

// One iterate: a sampled joint action or a mixed profile.
using Iterate = std::variant<JointAction, MixedProfile>;

// Running weighted average of the iterates, in the same weight units as
// RegretState::w_sum. Pure iterates go to a sparse cell map; mixed iterates to
// per-player marginals and, for two-player games, a dense joint of outer
// products.
class AverageAccumulator {
 public:
  AverageAccumulator() = default;
  explicit AverageAccumulator(const Game& game);

  void add(const Game& game, const Iterate& iterate, double weight);
  // Multiplies every stored weight by factor (> 0).
  void scale(double factor);

  double total_weight() const noexcept { return total_ * scale_; }
  JointDistribution distribution() const;
  MixedProfile marginals() const;

 private:
  void renormalize();

  std::vector<int> actions_;
  // Stored values are actual weights divided by scale_, so scale() is O(1).
  double scale_ = 1.0;
  double total_ = 0.0;
  std::unordered_map<std::uint64_t, double> cells_;
  std::vector<double> dense_joint_;  // mixed two-player iterates only
  std::vector<std::vector<double>> marginals_;
};

// Absorbs one iterate with weight w into the true regrets and the average.
//   w <= 1: R <- R + w r, the iterate gets weight w, w_sum <- w_sum + w
//   w  > 1: R <- R / w + r, stored weights shrink by 1/w, the iterate gets
//           weight 1, w_sum <- w_sum / w + 1
// Both paths give the same R / w_sum and the same normalized average.
// Throws contract when w < floor or w is not finite.
void apply_iteration(const Game& game, RegretState& state, AverageAccumulator& average,
                     const Iterate& iterate, std::span<const double> instant, double w,
                     double floor = 0.0);

struct AuditResult {
  bool holds = true;
  double potential = 0.0;       // phi(R / w_sum)
  double bound = 0.0;           // |P| C / t
  double max_avg_regret = 0.0;  // largest component of R / w_sum
  double regret_bound = 0.0;    // sqrt(|P| C / t)
  double slack = 0.0;           // potential / bound
};

// Averaged potential against |P| C / t with C = Delta^2 A_I (external) or
// Delta^2 A_I^2 (internal), t = completed iterations, and the derived bound
// on the maximum average regret. Relative slack of 1e-12 absorbs rounding.
AuditResult theorem_bound_audit(const RegretState& state, double payoff_range);

// max(0, max_i max_b R^E_i(b) / w_sum). Internal states sum each column of
// the swap matrix to recover the external regret.
double tracked_max_avg_external_regret(const RegretState& state);

// max_i sum_a max(0, max_b R^I_i(a, b)) / w_sum. Internal states only.
double tracked_ce_gap(const RegretState& state);

// automatic becomes match_averaging, except for greedy weights with a zero
// floor: there w = 0 can repeat indefinitely, the guiding regrets would stop
// moving, and internal matching would stay on one joint action. That case uses
// uniform guiding regrets instead. Explicit choices are returned unchanged.
PolicyWeighting resolve_policy_weighting(PolicyWeighting requested, WeightScheme scheme,
                                         double floor_fraction) noexcept;

struct SolverConfig {
  VariantConfig variant;
  WeightPolicy weights;
  long iterations = 1000;  // total iterates including the initial one
  std::uint64_t seed = 0;
  EvalSchedule schedule;
  std::vector<Metric> metrics;
  bool audit = true;  // check the theorem bound after every iteration
  // Replaces the random initial iterate. A mixed iterate in pure mode uses the
  // expected instantaneous regret (two players only).
  std::optional<Iterate> initial;
  std::uint64_t metric_cell_limit = kDefaultCellLimit;
};

struct TracePoint {
  long iteration = 0;
  std::int64_t wall_ns = 0;  // cumulative solve time, metric evaluation excluded
  double weight = 1.0;       // chosen w divided by the mean weight so far
  std::map<Metric, double> metrics;
};

struct SolveResult {
  JointDistribution distribution;
  MixedProfile average_profile;
  RegretState state;
  std::vector<TracePoint> trace;
  long audit_violations = 0;
  std::optional<long> first_violation;
  double worst_audit_slack = 0.0;
};

// Step-by-step driver for one solve.
class Solver {
 public:
  Solver(const Game& game, SolverConfig config);

  // Plays one iterate. The first call plays the initial iterate with weight 1.
  void step();
  void run(long iterations);

  long iterations_done() const noexcept { return state_.iterations; }
  const RegretState& state() const noexcept { return state_; }
  const SolverConfig& config() const noexcept { return config_; }
  double floor_fraction() const noexcept { return floor_fraction_; }
  // Last chosen weight relative to the mean weight before it was applied.
  double last_relative_weight() const noexcept { return last_relative_weight_; }
  double last_weight() const noexcept { return last_weight_; }
  double last_floor() const noexcept { return last_floor_; }

  JointDistribution distribution() const { return average_.distribution(); }
  MixedProfile average_profile() const { return average_.marginals(); }
  std::map<Metric, double> evaluate(std::span<const Metric> metrics) const;

 private:
  Iterate next_iterate();
  void compute_instant(const Iterate& iterate);
  double choose_weight();

  Game game_;
  SolverConfig config_;
  RegretState state_;
  AverageAccumulator average_;
  Rng rng_;
  double floor_fraction_ = 0.0;
  std::vector<double> instant_;
  std::vector<int> last_actions_;
  double last_relative_weight_ = 1.0;
  double last_weight_ = 1.0;
  double last_floor_ = 0.0;
};

// Runs config.iterations iterates, recording config.metrics on the schedule.
SolveResult solve(const Game& game, const SolverConfig& config);

}  // namespace gw
