#pragma once

#include <span>
#include <string>
#include <vector>

#include "gw/bench/stats.hpp"

namespace gw::bench {

enum class PlotAxis { iteration, time };

struct PlotOptions {
  PlotAxis x_axis = PlotAxis::iteration;
  std::string metric;  // empty: the only metric present
  std::string title;
  double epsilon = 1e-16;  // nonpositive values are clamped here
  int width = 800;
  int height = 500;
};

struct PlotResult {
  std::string svg;
  std::vector<std::string> warnings;
};

// Log-log line plot: one polyline per label, a shaded 95% band where a
// half-width exists, decade ticks and a legend. Identical input gives
// identical bytes. Throws invalid_argument when nothing matches.
PlotResult emit_plot(std::span<const AggregateRow> rows, const PlotOptions& options);

}  // namespace gw::bench
