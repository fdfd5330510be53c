#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "gw/game.hpp"
#include "gw/regret.hpp"

namespace gw {

enum class WeightScheme { uniform, linear, greedy };
enum class WeightObjective { potential, sum_positive_regrets };
enum class WeightSearch { exact_breakpoints, grid, golden_section };

std::string_view to_string(WeightScheme scheme) noexcept;
std::string_view to_string(WeightObjective objective) noexcept;
std::string_view to_string(WeightSearch search) noexcept;
WeightScheme parse_weight_scheme(std::string_view text);
WeightObjective parse_weight_objective(std::string_view text);
WeightSearch parse_weight_search(std::string_view text);

inline constexpr double kDefaultCapFactor = 1e6;

// How each iteration is weighted in the running average.
//
// The floor for the t-th weight choice is floor_fraction * w_sum / t, i.e. a
// fraction of the mean weight so far. Unset floor_fraction resolves through
// default_floor_fraction(). The search domain is [floor, cap_factor * w_sum].
struct WeightPolicy {
  WeightScheme scheme = WeightScheme::greedy;
  std::optional<double> floor_fraction;
  WeightObjective objective = WeightObjective::potential;
  WeightSearch search = WeightSearch::exact_breakpoints;
  int grid_points = 10;       // grid: candidates in [1, horizon^2] times the mean weight
  double golden_tol = 1e-10;  // golden_section: bracket width in lambda = w / (w_sum + w)
  double cap_factor = kDefaultCapFactor;

  void validate() const;
};

// 0.5 for external regret on two-player zero-sum games, 0 otherwise.
double default_floor_fraction(RegretKind kind, const Game& game);

struct WeightChoice {
  double weight = 0.0;
  double objective = 0.0;
};

// Objective after absorbing an iteration of weight w:
//   potential:            sum_j max(0, R_j + w r_j)^2 / (w_sum + w)^2
//   sum_positive_regrets: sum_j max(0, R_j + w r_j)   / (w_sum + w)
double weight_objective(std::span<const double> regrets, std::span<const double> instant,
                        double w_sum, double w, WeightObjective objective);

// Exact minimizer over [floor, cap] by sweeping the breakpoints w_j = -R_j / r_j.
// Within a segment the active set is fixed and the potential reads
// (A w^2 + B w + C) / (w_sum + w)^2, whose only stationary point is
// w* = (2C - B w_sum) / (2A w_sum - B). Ties go to the smallest weight.
// cap <= 0 selects kDefaultCapFactor * w_sum.
WeightChoice optimal_weight(std::span<const double> regrets, std::span<const double> instant,
                            double w_sum, double floor, WeightObjective objective,
                            double cap = 0.0);

// Best of `points` log-spaced candidates in [min_candidate, max_candidate],
// each raised to at least floor and clipped to cap. One point yields
// min_candidate (subject to the same clamping).
WeightChoice grid_weight(std::span<const double> regrets, std::span<const double> instant,
                         double w_sum, double floor, double cap, WeightObjective objective,
                         int points, double min_candidate, double max_candidate);

// Golden-section search on lambda = w / (w_sum + w). The averaged regret vector
// is affine in lambda, so both objectives are convex there.
WeightChoice golden_section_weight(std::span<const double> regrets,
                                   std::span<const double> instant, double w_sum, double floor,
                                   double cap, WeightObjective objective, double tol);

}  // namespace gw
