#include "gw/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "gw/error.hpp"

namespace gw {

std::string_view to_string(Metric metric) noexcept {
  switch (metric) {
    case Metric::nash_gap: return "nash_gap";
    case Metric::exploitability: return "exploitability";
    case Metric::ce_gap: return "ce_gap";
    case Metric::cce_gap: return "cce_gap";
    case Metric::welfare: return "welfare";
    case Metric::potential: return "potential";
    case Metric::max_avg_regret: return "max_avg_regret";
  }
  return "unknown";
}

Metric parse_metric(std::string_view text) {
  for (Metric m : {Metric::nash_gap, Metric::exploitability, Metric::ce_gap, Metric::cce_gap,
                   Metric::welfare, Metric::potential, Metric::max_avg_regret}) {
    if (text == to_string(m)) return m;
  }
  fail(ErrorCategory::invalid_argument, "unknown metric '" + std::string(text) + "'");
}

std::vector<long> EvalSchedule::iterations(long horizon) const {
  require(horizon >= 1, ErrorCategory::invalid_argument, "horizon must be >= 1");
  std::vector<long> out;
  if (!explicit_iterations.empty()) {
    for (long t : explicit_iterations) {
      require(t >= 1 && t <= horizon, ErrorCategory::invalid_argument,
              "scheduled iteration outside [1, horizon]");
      out.push_back(t);
    }
  } else {
    require(points >= 1, ErrorCategory::invalid_argument, "eval schedule needs >= 1 point");
    const double log_hi = std::log(static_cast<double>(horizon));
    for (int k = 0; k < points; ++k) {
      const double x = points == 1 ? log_hi : log_hi * k / (points - 1);
      out.push_back(std::clamp(std::lround(std::exp(x)), 1L, horizon));
    }
    out.push_back(horizon);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------

AverageAccumulator::AverageAccumulator(const Game& game)
    : actions_(game.actions().begin(), game.actions().end()) {
  for (int a : actions_) marginals_.emplace_back(a, 0.0);
}

void AverageAccumulator::add(const Game& game, const Iterate& iterate, double weight) {
  if (weight == 0.0) return;
  const double stored = weight / scale_;
  if (const auto* joint = std::get_if<JointAction>(&iterate)) {
    cells_[game.cell_index(*joint)] += stored;
    for (std::size_t p = 0; p < joint->size(); ++p) marginals_[p][(*joint)[p]] += stored;
  } else {
    const auto& profile = std::get<MixedProfile>(iterate);
    for (std::size_t p = 0; p < profile.num_players(); ++p) {
      for (std::size_t a = 0; a < profile[p].size(); ++a) marginals_[p][a] += stored * profile[p][a];
    }
    if (game.num_players() == 2) {
      const std::size_t cols = profile[1].size();
      if (dense_joint_.empty()) dense_joint_.assign(profile[0].size() * cols, 0.0);
      for (std::size_t r = 0; r < profile[0].size(); ++r) {
        const double x = stored * profile[0][r];
        if (x == 0.0) continue;
        double* row = dense_joint_.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) row[c] += x * profile[1][c];
      }
    }
  }
  total_ += stored;
}

void AverageAccumulator::scale(double factor) {
  require(factor > 0.0 && std::isfinite(factor), ErrorCategory::contract,
          "average scale factor must be positive");
  scale_ *= factor;
  if (scale_ < 1e-150) renormalize();
}

void AverageAccumulator::renormalize() {
  for (auto& [cell, w] : cells_) w *= scale_;
  for (double& w : dense_joint_) w *= scale_;
  for (auto& m : marginals_) {
    for (double& w : m) w *= scale_;
  }
  total_ *= scale_;
  scale_ = 1.0;
}

JointDistribution AverageAccumulator::distribution() const {
  std::vector<JointDistribution::Entry> entries;
  entries.reserve(cells_.size());
  for (const auto& [cell, w] : cells_) entries.push_back({cell, w});
  for (std::size_t cell = 0; cell < dense_joint_.size(); ++cell) {
    if (dense_joint_[cell] > 0.0) entries.push_back({cell, dense_joint_[cell]});
  }
  return JointDistribution(actions_, std::move(entries));
}

MixedProfile AverageAccumulator::marginals() const {
  MixedProfile out;
  for (const auto& m : marginals_) {
    double sum = 0.0;
    for (double w : m) sum += w;
    std::vector<double> pi(m.size());
    for (std::size_t a = 0; a < m.size(); ++a) pi[a] = sum > 0.0 ? m[a] / sum : 1.0 / m.size();
    out.policies.push_back(std::move(pi));
  }
  return out;
}

void apply_iteration(const Game& game, RegretState& state, AverageAccumulator& average,
                     const Iterate& iterate, std::span<const double> instant, double w,
                     double floor) {
  require(std::isfinite(w) && w >= 0.0, ErrorCategory::contract,
          "iteration weight must be finite and nonnegative");
  require(w >= floor, ErrorCategory::contract,
          "iteration weight " + std::to_string(w) + " below the floor " + std::to_string(floor));
  require(instant.size() == state.regrets.size(), ErrorCategory::invalid_argument,
          "apply_iteration: instant regret size mismatch");
  if (w > 1.0) {
    const double inv = 1.0 / w;
    for (std::size_t j = 0; j < instant.size(); ++j) {
      state.regrets[j] = state.regrets[j] * inv + instant[j];
    }
    average.scale(inv);
    average.add(game, iterate, 1.0);
    state.w_sum = state.w_sum * inv + 1.0;
  } else {
    for (std::size_t j = 0; j < instant.size(); ++j) state.regrets[j] += w * instant[j];
    average.add(game, iterate, w);
    state.w_sum += w;
  }
  ++state.iterations;
}

// ---------------------------------------------------------------------------

AuditResult theorem_bound_audit(const RegretState& state, double payoff_range) {
  require(state.iterations >= 1 && state.w_sum > 0.0, ErrorCategory::contract,
          "audit needs at least one completed iteration");
  const auto& layout = state.layout;
  int max_actions = 0;
  for (int p = 0; p < layout.num_players(); ++p) {
    max_actions = std::max(max_actions, layout.num_actions(p));
  }
  const double a = max_actions;
  const double c = payoff_range * payoff_range * (layout.kind() == RegretKind::external ? a : a * a);
  AuditResult out;
  out.potential = potential(state.regrets, state.w_sum);
  out.bound = layout.num_players() * c / static_cast<double>(state.iterations);
  out.regret_bound = std::sqrt(out.bound);
  for (double r : state.regrets) out.max_avg_regret = std::max(out.max_avg_regret, r / state.w_sum);
  const double tol = 1e-12;
  out.holds = out.potential <= out.bound * (1.0 + tol) &&
              out.max_avg_regret <= out.regret_bound * (1.0 + tol);
  out.slack = out.bound > 0.0 ? out.potential / out.bound : (out.potential > 0.0 ? INFINITY : 0.0);
  return out;
}

double tracked_max_avg_external_regret(const RegretState& state) {
  const auto& layout = state.layout;
  double best = 0.0;
  for (int p = 0; p < layout.num_players(); ++p) {
    const int n = layout.num_actions(p);
    for (int b = 0; b < n; ++b) {
      double r = 0.0;
      if (layout.kind() == RegretKind::external) {
        r = state.regrets[layout.offset(p) + b];
      } else {
        for (int a = 0; a < n; ++a) r += state.regrets[layout.internal_index(p, a, b)];
      }
      best = std::max(best, r / state.w_sum);
    }
  }
  return best;
}

double tracked_ce_gap(const RegretState& state) {
  const auto& layout = state.layout;
  require(layout.kind() == RegretKind::internal, ErrorCategory::unsupported,
          "tracked_ce_gap needs internal regrets");
  double best = 0.0;
  for (int p = 0; p < layout.num_players(); ++p) {
    const int n = layout.num_actions(p);
    double sum = 0.0;
    for (int a = 0; a < n; ++a) {
      double row = 0.0;
      for (int b = 0; b < n; ++b) row = std::max(row, state.regrets[layout.internal_index(p, a, b)]);
      sum += row;
    }
    best = std::max(best, sum / state.w_sum);
  }
  return best;
}

// ---------------------------------------------------------------------------

PolicyWeighting resolve_policy_weighting(PolicyWeighting requested, WeightScheme scheme,
                                         double floor_fraction) noexcept {
  if (requested != PolicyWeighting::automatic) return requested;
  if (scheme == WeightScheme::greedy && floor_fraction == 0.0) return PolicyWeighting::uniform;
  return PolicyWeighting::match_averaging;
}

Solver::Solver(const Game& game, SolverConfig config)
    : game_(game), config_(std::move(config)), rng_(config_.seed) {
  config_.variant.validate(game_);
  config_.weights.validate();
  require(config_.iterations >= 1, ErrorCategory::invalid_argument, "iterations must be >= 1");
  state_ = make_regret_state(game_, config_.variant.regret_kind);
  average_ = AverageAccumulator(game_);
  floor_fraction_ = config_.weights.floor_fraction.value_or(
      default_floor_fraction(config_.variant.regret_kind, game_));
  config_.variant.policy_weighting = resolve_policy_weighting(
      config_.variant.policy_weighting, config_.weights.scheme, floor_fraction_);
  instant_.assign(state_.layout.size(), 0.0);
  last_actions_.assign(game_.num_players(), 0);
  if (config_.initial) {
    if (const auto* joint = std::get_if<JointAction>(&*config_.initial)) {
      game_.check(*joint);
    } else {
      validate_profile(game_, std::get<MixedProfile>(*config_.initial));
    }
  }
}

Iterate Solver::next_iterate() {
  const bool pure = config_.variant.mode == PlayMode::pure_sampled;
  const int n = game_.num_players();
  if (state_.iterations == 0) {
    if (config_.initial) {
      if (const auto* mixed = std::get_if<MixedProfile>(&*config_.initial); mixed && pure) {
        // Internal matching continues from an action drawn from the seed profile.
        for (int p = 0; p < n; ++p) last_actions_[p] = rng_.sample((*mixed)[p]);
      }
      return *config_.initial;
    }
    if (!pure) return uniform_profile(game_);
    JointAction joint(n);
    for (int p = 0; p < n; ++p) joint[p] = static_cast<int>(rng_.below(game_.num_actions(p)));
    return joint;
  }

  const std::vector<double> sel = selection_regrets(state_, config_.variant);
  const auto& layout = state_.layout;
  const bool external = layout.kind() == RegretKind::external;
  if (pure) {
    JointAction joint(n);
    for (int p = 0; p < n; ++p) {
      const int m = game_.num_actions(p);
      std::vector<double> policy;
      if (external) {
        policy = rm_external_policy(std::span<const double>(sel).subspan(layout.offset(p), m));
      } else {
        const std::size_t row = layout.internal_index(p, last_actions_[p], 0);
        policy = rm_internal_policy(std::span<const double>(sel).subspan(row, m),
                                    config_.variant.alpha, last_actions_[p]);
      }
      joint[p] = rng_.sample(policy);
    }
    return joint;
  }
  MixedProfile profile;
  for (int p = 0; p < n; ++p) {
    const int m = game_.num_actions(p);
    const auto block = std::span<const double>(sel).subspan(layout.offset(p), layout.block_size(p));
    profile.policies.push_back(external ? rm_external_policy(block)
                                        : rm_internal_stationary_policy(block, m));
  }
  return profile;
}

void Solver::compute_instant(const Iterate& iterate) {
  if (const auto* joint = std::get_if<JointAction>(&iterate)) {
    instant_regret(game_, state_.layout, *joint, instant_);
    last_actions_ = *joint;
  } else {
    mixed_instant_regret_2p(game_, state_.layout, std::get<MixedProfile>(iterate), instant_);
  }
}

double Solver::choose_weight() {
  const double done = static_cast<double>(state_.iterations);
  const double mean = state_.w_sum / done;
  const auto& policy = config_.weights;
  last_floor_ = 0.0;
  switch (policy.scheme) {
    case WeightScheme::uniform: return mean;
    case WeightScheme::linear: return 2.0 * mean;
    case WeightScheme::greedy: break;
  }
  const double floor = floor_fraction_ * mean;
  const double cap = std::max(floor, policy.cap_factor * state_.w_sum);
  last_floor_ = floor;
  WeightChoice choice;
  switch (policy.search) {
    case WeightSearch::exact_breakpoints:
      choice = optimal_weight(state_.regrets, instant_, state_.w_sum, floor, policy.objective, cap);
      break;
    case WeightSearch::grid: {
      const double horizon = static_cast<double>(config_.iterations);
      choice = grid_weight(state_.regrets, instant_, state_.w_sum, floor, cap, policy.objective,
                           policy.grid_points, mean, mean * horizon * horizon);
      break;
    }
    case WeightSearch::golden_section:
      choice = golden_section_weight(state_.regrets, instant_, state_.w_sum, floor, cap,
                                     policy.objective, policy.golden_tol);
      break;
  }
  return choice.weight;
}

void Solver::step() {
  const long t = state_.iterations + 1;
  const Iterate iterate = next_iterate();
  compute_instant(iterate);
  double w = 1.0;
  if (t == 1) {
    last_relative_weight_ = 1.0;
    last_floor_ = 0.0;
  } else {
    w = choose_weight();
    last_relative_weight_ = w / (state_.w_sum / static_cast<double>(state_.iterations));
  }
  last_weight_ = w;
  apply_iteration(game_, state_, average_, iterate, instant_, w, last_floor_);
  apply_guiding_transforms(state_, config_.variant, instant_, w, t);
}

void Solver::run(long iterations) {
  for (long k = 0; k < iterations; ++k) step();
}

std::map<Metric, double> Solver::evaluate(std::span<const Metric> metrics) const {
  std::map<Metric, double> out;
  std::optional<JointDistribution> dist;
  auto distribution_once = [&]() -> const JointDistribution& {
    if (!dist) dist = distribution();
    return *dist;
  };
  for (Metric m : metrics) {
    switch (m) {
      case Metric::nash_gap:
        out[m] = nash_gap(game_, average_profile(), config_.metric_cell_limit);
        break;
      case Metric::exploitability:
        out[m] = exploitability(game_, average_profile(), config_.metric_cell_limit);
        break;
      case Metric::ce_gap: out[m] = ce_gap(game_, distribution_once()); break;
      case Metric::cce_gap: out[m] = cce_gap(game_, distribution_once()); break;
      case Metric::welfare: out[m] = welfare(game_, distribution_once()); break;
      case Metric::potential: out[m] = potential(state_.regrets, state_.w_sum); break;
      case Metric::max_avg_regret: {
        double best = 0.0;
        for (double r : state_.regrets) best = std::max(best, r / state_.w_sum);
        out[m] = best;
        break;
      }
    }
  }
  return out;
}

SolveResult solve(const Game& game, const SolverConfig& config) {
  Solver solver(game, config);
  const auto schedule = config.schedule.iterations(config.iterations);
  SolveResult result;
  std::size_t next = 0;
  std::int64_t elapsed = 0;
  using Clock = std::chrono::steady_clock;
  for (long t = 1; t <= config.iterations; ++t) {
    const auto start = Clock::now();
    solver.step();
    elapsed += std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
    if (config.audit) {
      const AuditResult audit = theorem_bound_audit(solver.state(), game.payoff_range());
      result.worst_audit_slack = std::max(result.worst_audit_slack, audit.slack);
      if (!audit.holds) {
        ++result.audit_violations;
        if (!result.first_violation) result.first_violation = t;
      }
    }
    if (next < schedule.size() && schedule[next] == t) {
      TracePoint point;
      point.iteration = t;
      point.wall_ns = elapsed;
      point.weight = solver.last_relative_weight();
      point.metrics = solver.evaluate(config.metrics);
      result.trace.push_back(std::move(point));
      ++next;
    }
  }
  result.distribution = solver.distribution();
  result.average_profile = solver.average_profile();
  result.state = solver.state();
  return result;
}

}  // namespace gw
