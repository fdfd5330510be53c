#include "gw/weights.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gw/error.hpp"

namespace gw {

std::string_view to_string(WeightScheme scheme) noexcept {
  switch (scheme) {
    case WeightScheme::uniform: return "uniform";
    case WeightScheme::linear: return "linear";
    case WeightScheme::greedy: return "greedy";
  }
  return "greedy";
}

std::string_view to_string(WeightObjective objective) noexcept {
  return objective == WeightObjective::potential ? "potential" : "sum_positive_regrets";
}

std::string_view to_string(WeightSearch search) noexcept {
  switch (search) {
    case WeightSearch::exact_breakpoints: return "exact_breakpoints";
    case WeightSearch::grid: return "grid";
    case WeightSearch::golden_section: return "golden_section";
  }
  return "exact_breakpoints";
}

WeightScheme parse_weight_scheme(std::string_view text) {
  if (text == "uniform") return WeightScheme::uniform;
  if (text == "linear") return WeightScheme::linear;
  if (text == "greedy") return WeightScheme::greedy;
  fail(ErrorCategory::invalid_argument, "unknown weight scheme '" + std::string(text) + "'");
}

WeightObjective parse_weight_objective(std::string_view text) {
  if (text == "potential") return WeightObjective::potential;
  if (text == "sum_positive_regrets") return WeightObjective::sum_positive_regrets;
  fail(ErrorCategory::invalid_argument, "unknown weight objective '" + std::string(text) + "'");
}

WeightSearch parse_weight_search(std::string_view text) {
  if (text == "exact_breakpoints" || text == "exact") return WeightSearch::exact_breakpoints;
  if (text == "grid") return WeightSearch::grid;
  if (text == "golden_section" || text == "golden") return WeightSearch::golden_section;
  fail(ErrorCategory::invalid_argument, "unknown weight search '" + std::string(text) + "'");
}

void WeightPolicy::validate() const {
  if (floor_fraction) {
    require(*floor_fraction >= 0.0 && *floor_fraction <= 2.0, ErrorCategory::invalid_argument,
            "floor_fraction must lie in [0, 2]");
  }
  require(grid_points >= 1, ErrorCategory::invalid_argument, "grid_points must be >= 1");
  require(golden_tol > 0.0, ErrorCategory::invalid_argument, "golden_tol must be positive");
  require(cap_factor >= 1.0, ErrorCategory::invalid_argument, "cap_factor must be >= 1");
}

double default_floor_fraction(RegretKind kind, const Game& game) {
  if (kind == RegretKind::external && game.num_players() == 2 && is_zero_sum(game)) return 0.5;
  return 0.0;
}

namespace {

void check_inputs(std::span<const double> regrets, std::span<const double> instant, double w_sum,
                  double floor, double cap) {
  require(!regrets.empty(), ErrorCategory::invalid_argument, "weight search: no components");
  require(regrets.size() == instant.size(), ErrorCategory::invalid_argument,
          "weight search: regret and instant lengths differ");
  require(w_sum > 0.0 && std::isfinite(w_sum), ErrorCategory::invalid_argument,
          "weight search: w_sum must be positive");
  require(floor >= 0.0 && std::isfinite(floor), ErrorCategory::invalid_argument,
          "weight search: floor must be finite and nonnegative");
  require(cap >= floor && std::isfinite(cap), ErrorCategory::invalid_argument,
          "weight search: cap below floor");
  for (std::size_t j = 0; j < regrets.size(); ++j) {
    require(std::isfinite(regrets[j]) && std::isfinite(instant[j]),
            ErrorCategory::invalid_argument, "weight search: nonfinite component");
  }
}

double resolve_cap(double cap, double w_sum, double floor) {
  if (cap <= 0.0) cap = kDefaultCapFactor * w_sum;
  return std::max(cap, floor);
}

// True if value improves on best by more than rounding noise.
bool improves(double value, double best) {
  return value < best - 1e-13 * std::abs(best);
}

// Objective in the lambda parametrization: x_j = (1 - lambda) R_j / w_sum + lambda r_j.
double lambda_objective(std::span<const double> regrets, std::span<const double> instant,
                        double w_sum, double lambda, WeightObjective objective) {
  double sum = 0.0;
  for (std::size_t j = 0; j < regrets.size(); ++j) {
    const double x = (1.0 - lambda) * (regrets[j] / w_sum) + lambda * instant[j];
    if (x > 0.0) sum += objective == WeightObjective::potential ? x * x : x;
  }
  return sum;
}

}  // namespace

double weight_objective(std::span<const double> regrets, std::span<const double> instant,
                        double w_sum, double w, WeightObjective objective) {
  const double denom = w_sum + w;
  double sum = 0.0;
  for (std::size_t j = 0; j < regrets.size(); ++j) {
    const double x = (regrets[j] + w * instant[j]) / denom;
    if (x > 0.0) sum += objective == WeightObjective::potential ? x * x : x;
  }
  return sum;
}

WeightChoice optimal_weight(std::span<const double> regrets, std::span<const double> instant,
                            double w_sum, double floor, WeightObjective objective, double cap) {
  cap = resolve_cap(cap, w_sum, floor);
  check_inputs(regrets, instant, w_sum, floor, cap);
  const double lo = floor;
  const double hi = cap;
  if (hi <= lo) return {lo, weight_objective(regrets, instant, w_sum, lo, objective)};

  struct Event {
    double at;
    std::size_t component;
  };
  std::vector<Event> events;
  // Active-set sums: potential uses A = sum r^2, B = 2 sum R r, C = sum R^2;
  // the linear objective uses sum R and sum r.
  double sum_rr = 0.0, sum_Rr = 0.0, sum_RR = 0.0, sum_R = 0.0, sum_r = 0.0;
  long active = 0;
  std::vector<char> is_active(regrets.size(), 0);
  auto toggle = [&](std::size_t j, bool on) {
    const double R = regrets[j];
    const double r = instant[j];
    const double sign = on ? 1.0 : -1.0;
    sum_rr += sign * r * r;
    sum_Rr += sign * R * r;
    sum_RR += sign * R * R;
    sum_R += sign * R;
    sum_r += sign * r;
    active += on ? 1 : -1;
    is_active[j] = on ? 1 : 0;
    if (active == 0) sum_rr = sum_Rr = sum_RR = sum_R = sum_r = 0.0;
  };

  for (std::size_t j = 0; j < regrets.size(); ++j) {
    const double R = regrets[j];
    const double r = instant[j];
    const double at_lo = R + lo * r;
    // Status just to the right of lo.
    const bool on = at_lo > 0.0 || (at_lo == 0.0 && r > 0.0);
    if (on) toggle(j, true);
    if (r == 0.0) continue;
    if ((r > 0.0 && !on) || (r < 0.0 && on)) {
      const double at = std::max(lo, -R / r);
      if (at < hi) events.push_back({at, j});
    }
  }
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.at < b.at; });

  auto segment_value = [&](double w) {
    if (active == 0) return 0.0;
    const double denom = w_sum + w;
    if (objective == WeightObjective::potential) {
      const double num = sum_rr * w * w + 2.0 * sum_Rr * w + sum_RR;
      return std::max(0.0, num / (denom * denom));
    }
    return std::max(0.0, (sum_R + w * sum_r) / denom);
  };

  double best_w = lo;
  double best_value = segment_value(lo);
  auto consider = [&](double w) {
    const double value = segment_value(w);
    if (improves(value, best_value)) {
      best_value = value;
      best_w = w;
    }
  };

  double seg_lo = lo;
  std::size_t next = 0;
  while (true) {
    const double seg_hi = next < events.size() ? events[next].at : hi;
    if (objective == WeightObjective::potential && active > 0) {
      const double A = sum_rr;
      const double B = 2.0 * sum_Rr;
      const double C = sum_RR;
      const double denom = 2.0 * A * w_sum - B;
      if (denom != 0.0) {
        const double stationary = (2.0 * C - B * w_sum) / denom;
        if (stationary > seg_lo && stationary < seg_hi) consider(stationary);
      }
    }
    consider(seg_hi);
    if (next >= events.size()) break;
    const double at = events[next].at;
    while (next < events.size() && events[next].at == at) {
      const std::size_t j = events[next].component;
      toggle(j, is_active[j] == 0);
      ++next;
    }
    seg_lo = at;
    consider(seg_lo);
  }
  return {best_w, weight_objective(regrets, instant, w_sum, best_w, objective)};
}

WeightChoice grid_weight(std::span<const double> regrets, std::span<const double> instant,
                         double w_sum, double floor, double cap, WeightObjective objective,
                         int points, double min_candidate, double max_candidate) {
  cap = resolve_cap(cap, w_sum, floor);
  check_inputs(regrets, instant, w_sum, floor, cap);
  require(points >= 1, ErrorCategory::invalid_argument, "grid needs at least one point");
  require(min_candidate > 0.0 && max_candidate >= min_candidate, ErrorCategory::invalid_argument,
          "grid range must satisfy 0 < min <= max");
  std::vector<double> candidates;
  candidates.reserve(points);
  const double log_lo = std::log(min_candidate);
  const double log_hi = std::log(max_candidate);
  for (int k = 0; k < points; ++k) {
    const double g =
        points == 1 ? min_candidate : std::exp(log_lo + (log_hi - log_lo) * k / (points - 1));
    candidates.push_back(std::clamp(g, floor, cap));
  }
  std::sort(candidates.begin(), candidates.end());
  WeightChoice best{candidates.front(),
                    weight_objective(regrets, instant, w_sum, candidates.front(), objective)};
  for (double w : candidates) {
    const double value = weight_objective(regrets, instant, w_sum, w, objective);
    if (improves(value, best.objective)) best = {w, value};
  }
  return best;
}

WeightChoice golden_section_weight(std::span<const double> regrets,
                                   std::span<const double> instant, double w_sum, double floor,
                                   double cap, WeightObjective objective, double tol) {
  cap = resolve_cap(cap, w_sum, floor);
  check_inputs(regrets, instant, w_sum, floor, cap);
  auto to_lambda = [&](double w) { return w / (w_sum + w); };
  auto to_weight = [&](double lambda) { return w_sum * lambda / (1.0 - lambda); };
  auto g = [&](double lambda) {
    return lambda_objective(regrets, instant, w_sum, lambda, objective);
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = to_lambda(floor);
  double b = to_lambda(cap);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c);
  double gd = g(d);
  while (b - a > tol) {
    if (gc <= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  // Endpoints are candidates too: the minimum may sit on the boundary.
  WeightChoice best{floor, weight_objective(regrets, instant, w_sum, floor, objective)};
  for (double w : {to_weight(0.5 * (a + b)), cap}) {
    w = std::clamp(w, floor, cap);
    const double value = weight_objective(regrets, instant, w_sum, w, objective);
    if (improves(value, best.objective)) best = {w, value};
  }
  return best;
}

}  // namespace gw
