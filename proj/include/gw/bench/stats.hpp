#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gw/bench/records.hpp"

namespace gw::bench {

// Two-sided 95% Student t quantile, t_{0.975, dof}.
double t_quantile_975(int dof);

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  std::optional<double> half_width;  // unset for a single value
};

// Mean and t-based 95% half-width. Values are sorted before summing so the
// result does not depend on their order.
Summary summarize(std::span<const double> values);

struct AggregateRow {
  std::string label;
  std::string metric;
  long iteration = 0;
  Summary value;
  double mean_wall_ns = 0.0;
  double mean_weight = 0.0;
};

// One row per (label, metric, iteration), sorted by those keys.
std::vector<AggregateRow> aggregate(std::span<const RunRecord> records);

void write_aggregate_csv(std::ostream& out, std::span<const AggregateRow> rows);

// "mean ± half_width" with `digits` decimals, or just the mean without an interval.
std::string format_mean_hw(const Summary& summary, int digits = 3);

struct RatioResult {
  // Per game seed of label_a (sorted): first iteration where
  // metric(a) <= metric(b) / ratio, unset if never.
  std::vector<std::pair<std::uint64_t, std::optional<long>>> per_seed;
  std::optional<double> mean_iteration;  // over seeds that reached it; unset if none did
};

// label_a and label_b runs are paired by game seed and compared at the common
// scheduled iterations. Throws invalid_argument when a seed is missing from b.
RatioResult iterations_until_ratio(std::span<const RunRecord> records, const std::string& label_a,
                                   const std::string& label_b, const std::string& metric,
                                   double ratio = 10.0);

// Spearman rank correlation; ties get average ranks. Needs >= 2 pairs.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace gw::bench
