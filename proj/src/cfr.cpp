#include "gw/cfr.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "gw/error.hpp"
#include "gw/regret.hpp"

namespace gw {

std::vector<std::size_t> action_offsets(const ExtensiveGame& game) {
  std::vector<std::size_t> offsets{0};
  for (const auto& info : game.infosets()) offsets.push_back(offsets.back() + info.num_actions);
  return offsets;
}

CfrState make_cfr_state(const ExtensiveGame& game) {
  CfrState s;
  s.offsets = action_offsets(game);
  s.regrets.assign(s.offsets.back(), 0.0);
  s.strategy_sums.assign(s.offsets.back(), 0.0);
  return s;
}

void CfrConfig::validate() const {
  require(std::isfinite(floor_fraction) && floor_fraction >= 0.0, ErrorCategory::invalid_argument,
          "cfr floor_fraction must be finite and >= 0");
  require(cap_factor >= 1.0, ErrorCategory::invalid_argument, "cfr cap_factor must be >= 1");
}

namespace {

void check_strategy(std::span<const std::size_t> offsets, std::span<const double> strategy) {
  require(!offsets.empty() && strategy.size() == offsets.back(), ErrorCategory::invalid_argument,
          "strategy size does not match the game");
}

std::span<const double> slice(std::span<const double> v, std::span<const std::size_t> offsets,
                              int infoset) {
  return v.subspan(offsets[infoset], offsets[infoset + 1] - offsets[infoset]);
}

std::vector<double> normalize_blocks(std::span<const double> sums,
                                     std::span<const std::size_t> offsets) {
  std::vector<double> out(sums.size());
  for (std::size_t i = 0; i + 1 < offsets.size(); ++i) {
    const std::size_t lo = offsets[i], hi = offsets[i + 1];
    double total = 0.0;
    for (std::size_t j = lo; j < hi; ++j) total += sums[j];
    for (std::size_t j = lo; j < hi; ++j) {
      out[j] = total > 0.0 ? sums[j] / total : 1.0 / static_cast<double>(hi - lo);
    }
  }
  return out;
}

struct RegretWalk {
  const ExtensiveGame& game;
  std::span<const std::size_t> offsets;
  std::span<const double> strategy;
  std::vector<double>& regrets;
  std::vector<double>* increments;

  // reach = {player 0, player 1, chance}
  std::array<double, 2> operator()(int id, std::array<double, 3> reach) {
    const EfgNode& n = game.node(id);
    if (n.type == NodeType::terminal) return n.payoffs;
    std::array<double, 2> value{0.0, 0.0};
    if (n.type == NodeType::chance) {
      for (std::size_t k = 0; k < n.children.size(); ++k) {
        auto r = reach;
        r[2] *= n.chance_probs[k];
        const auto v = (*this)(n.children[k], r);
        value[0] += n.chance_probs[k] * v[0];
        value[1] += n.chance_probs[k] * v[1];
      }
      return value;
    }
    const int i = n.player;
    const auto sigma = slice(strategy, offsets, n.infoset);
    const std::size_t base = offsets[n.infoset];
    std::vector<double> own(n.children.size());
    for (std::size_t a = 0; a < n.children.size(); ++a) {
      auto r = reach;
      r[i] *= sigma[a];
      const auto v = (*this)(n.children[a], r);
      own[a] = v[i];
      value[0] += sigma[a] * v[0];
      value[1] += sigma[a] * v[1];
    }
    const double cf_reach = reach[1 - i] * reach[2];
    for (std::size_t a = 0; a < n.children.size(); ++a) {
      regrets[base + a] += cf_reach * (own[a] - value[i]);
      if (increments) (*increments)[base + a] += reach[i] * sigma[a];
    }
    return value;
  }
};

}  // namespace

std::vector<double> current_strategy(const ExtensiveGame& game, const CfrState& state) {
  std::vector<double> out(state.regrets.size());
  for (int i = 0; i < static_cast<int>(game.infosets().size()); ++i) {
    const auto pi = rm_external_policy(slice(state.regrets, state.offsets, i));
    std::copy(pi.begin(), pi.end(), out.begin() + static_cast<std::ptrdiff_t>(state.offsets[i]));
  }
  return out;
}

std::vector<double> average_strategy(const ExtensiveGame&, const CfrState& state) {
  return normalize_blocks(state.strategy_sums, state.offsets);
}

void counterfactual_regrets(const ExtensiveGame& game, std::span<const std::size_t> offsets,
                            std::span<const double> strategy, std::vector<double>& regrets,
                            std::vector<double>* strategy_increments) {
  check_strategy(offsets, strategy);
  regrets.assign(strategy.size(), 0.0);
  if (strategy_increments) strategy_increments->assign(strategy.size(), 0.0);
  RegretWalk walk{game, offsets, strategy, regrets, strategy_increments};
  walk(0, {1.0, 1.0, 1.0});
}

CfrStep cfr_iterate(const ExtensiveGame& game, CfrState& state, const CfrConfig& config) {
  require(state.offsets == action_offsets(game), ErrorCategory::invalid_argument,
          "cfr state does not match the game");
  const long t = state.iterations + 1;
  const auto sigma = current_strategy(game, state);
  std::vector<double> r, s;
  counterfactual_regrets(game, state.offsets, sigma, r, &s);
  if (config.alternating) {
    const int updating = static_cast<int>(t % 2);
    for (int i = 0; i < static_cast<int>(game.infosets().size()); ++i) {
      if (game.infoset(i).player == updating) continue;
      for (std::size_t j = state.offsets[i]; j < state.offsets[i + 1]; ++j) r[j] = s[j] = 0.0;
    }
  }

  CfrStep step;
  if (t > 1) {
    const double mean = state.w_sum / static_cast<double>(state.iterations);
    switch (config.averaging) {
      case WeightScheme::uniform: step.weight = mean; break;
      case WeightScheme::linear: step.weight = 2.0 * mean; break;
      case WeightScheme::greedy: {
        step.floor = config.floor_fraction * mean;
        const double cap = std::max(step.floor, config.cap_factor * state.w_sum);
        step.weight =
            optimal_weight(state.regrets, r, state.w_sum, step.floor, config.objective, cap).weight;
        break;
      }
    }
    step.relative_weight = step.weight / mean;
  }

  const double w = step.weight;
  if (w > 1.0) {
    const double inv = 1.0 / w;
    for (std::size_t j = 0; j < r.size(); ++j) {
      state.regrets[j] = state.regrets[j] * inv + r[j];
      state.strategy_sums[j] = state.strategy_sums[j] * inv + s[j];
    }
    state.w_sum = state.w_sum * inv + 1.0;
  } else {
    for (std::size_t j = 0; j < r.size(); ++j) {
      state.regrets[j] += w * r[j];
      state.strategy_sums[j] += w * s[j];
    }
    state.w_sum += w;
  }
  ++state.iterations;
  return step;
}

std::array<double, 2> expected_values(const ExtensiveGame& game,
                                      std::span<const std::size_t> offsets,
                                      std::span<const double> strategy) {
  std::vector<double> scratch;
  check_strategy(offsets, strategy);
  scratch.assign(strategy.size(), 0.0);
  RegretWalk walk{game, offsets, strategy, scratch, nullptr};
  return walk(0, {1.0, 1.0, 1.0});
}

double best_response_value(const ExtensiveGame& game, std::span<const std::size_t> offsets,
                           std::span<const double> strategy, int player) {
  check_strategy(offsets, strategy);
  require(player == 0 || player == 1, ErrorCategory::out_of_range, "player must be 0 or 1");
  const auto& nodes = game.nodes();
  // Chance and opponent reach of every node. Children always follow parents.
  std::vector<double> reach(nodes.size(), 0.0);
  reach[0] = 1.0;
  for (std::size_t id = 0; id < nodes.size(); ++id) {
    const auto& n = nodes[id];
    for (std::size_t k = 0; k < n.children.size(); ++k) {
      double p = 1.0;
      if (n.type == NodeType::chance) {
        p = n.chance_probs[k];
      } else if (n.type == NodeType::decision && n.player != player) {
        p = strategy[offsets[n.infoset] + k];
      }
      reach[n.children[k]] = reach[id] * p;
    }
  }

  std::vector<int> choice(game.infosets().size(), -1);
  std::vector<double> memo(nodes.size(), std::numeric_limits<double>::quiet_NaN());
  auto value = [&](auto&& self, int id) -> double {
    if (!std::isnan(memo[id])) return memo[id];
    const auto& n = nodes[id];
    double v = 0.0;
    switch (n.type) {
      case NodeType::terminal: v = n.payoffs[player]; break;
      case NodeType::chance:
        for (std::size_t k = 0; k < n.children.size(); ++k) {
          v += n.chance_probs[k] * self(self, n.children[k]);
        }
        break;
      case NodeType::decision:
        if (n.player == player) {
          v = self(self, n.children[choice[n.infoset]]);
        } else {
          for (std::size_t k = 0; k < n.children.size(); ++k) {
            v += strategy[offsets[n.infoset] + k] * self(self, n.children[k]);
          }
        }
        break;
    }
    memo[id] = v;
    return v;
  };

  std::vector<int> order;
  for (int i = 0; i < static_cast<int>(game.infosets().size()); ++i) {
    if (game.infoset(i).player == player) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return game.infoset(a).depth > game.infoset(b).depth;
  });
  for (int i : order) {
    const auto& info = game.infoset(i);
    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < info.num_actions; ++a) {
      double total = 0.0;
      for (int h : info.nodes) total += reach[h] * value(value, nodes[h].children[a]);
      if (total > best_value) {
        best_value = total;
        best = a;
      }
    }
    choice[i] = best;
  }
  return value(value, 0);
}

double exploitability_efg(const ExtensiveGame& game, std::span<const std::size_t> offsets,
                          std::span<const double> strategy) {
  const double e = best_response_value(game, offsets, strategy, 0) +
                   best_response_value(game, offsets, strategy, 1);
  return std::max(0.0, e);
}

double terminal_reach_sum(const ExtensiveGame& game, std::span<const std::size_t> offsets,
                          std::span<const double> strategy) {
  check_strategy(offsets, strategy);
  const auto& nodes = game.nodes();
  std::vector<double> reach(nodes.size(), 0.0);
  reach[0] = 1.0;
  double total = 0.0;
  for (std::size_t id = 0; id < nodes.size(); ++id) {
    const auto& n = nodes[id];
    if (n.type == NodeType::terminal) total += reach[id];
    for (std::size_t k = 0; k < n.children.size(); ++k) {
      const double p = n.type == NodeType::chance ? n.chance_probs[k]
                                                  : strategy[offsets[n.infoset] + k];
      reach[n.children[k]] = reach[id] * p;
    }
  }
  return total;
}

CfrAudit cfr_bound_audit(const ExtensiveGame& game, const CfrState& state) {
  require(state.iterations >= 1 && state.w_sum > 0.0, ErrorCategory::contract,
          "audit needs at least one completed iteration");
  const double delta = game.payoff_range();
  CfrAudit out;
  out.potential = potential(state.regrets, state.w_sum);
  out.bound = delta * delta * static_cast<double>(state.regrets.size()) /
              static_cast<double>(state.iterations);
  out.holds = out.potential <= out.bound * (1.0 + 1e-12);
  out.slack = out.bound > 0.0 ? out.potential / out.bound : 0.0;
  return out;
}

CfrResult cfr_solve(const ExtensiveGame& game, const CfrConfig& config, long iterations,
                    const EvalSchedule& schedule, bool audit) {
  config.validate();
  require(iterations >= 1, ErrorCategory::invalid_argument, "cfr needs at least one iteration");
  CfrResult result;
  result.state = make_cfr_state(game);
  const auto points = schedule.iterations(iterations);
  std::size_t next = 0;
  std::int64_t wall = 0;
  for (long t = 1; t <= iterations; ++t) {
    const auto start = std::chrono::steady_clock::now();
    const CfrStep step = cfr_iterate(game, result.state, config);
    wall += std::chrono::duration_cast<std::chrono::nanoseconds>(
                std::chrono::steady_clock::now() - start)
                .count();
    if (audit && !cfr_bound_audit(game, result.state).holds) ++result.audit_violations;
    if (next < points.size() && points[next] == t) {
      CfrTracePoint p;
      p.iteration = t;
      p.wall_ns = wall;
      p.weight = step.relative_weight;
      p.potential = potential(result.state.regrets, result.state.w_sum);
      p.exploitability =
          exploitability_efg(game, result.state.offsets, average_strategy(game, result.state));
      result.trace.push_back(p);
      ++next;
    }
  }
  result.average = average_strategy(game, result.state);
  return result;
}

}  // namespace gw
