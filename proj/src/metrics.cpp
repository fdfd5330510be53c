#include "gw/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gw/error.hpp"

namespace gw {

JointDistribution::JointDistribution(std::vector<int> actions, std::vector<Entry> entries)
    : actions_(std::move(actions)) {
  std::uint64_t cells = 1;
  for (int a : actions_) {
    require(a >= 1, ErrorCategory::invalid_argument, "distribution shape needs positive actions");
    cells *= static_cast<std::uint64_t>(a);
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& x, const Entry& y) { return x.cell < y.cell; });
  for (const Entry& e : entries) {
    require(e.cell < cells, ErrorCategory::out_of_range, "distribution cell out of range");
    require(e.weight >= 0.0 && std::isfinite(e.weight), ErrorCategory::invalid_argument,
            "distribution weights must be finite and nonnegative");
    if (e.weight == 0.0) continue;
    if (!entries_.empty() && entries_.back().cell == e.cell) {
      entries_.back().weight += e.weight;
    } else {
      entries_.push_back(e);
    }
    total_ += e.weight;
  }
}

JointDistribution JointDistribution::point_mass(const Game& game, std::span<const int> joint) {
  return JointDistribution({game.actions().begin(), game.actions().end()},
                           {{game.cell_index(joint), 1.0}});
}

JointDistribution JointDistribution::product(const Game& game, const MixedProfile& profile,
                                             std::uint64_t cell_limit) {
  validate_profile(game, profile);
  require(game.num_cells() <= cell_limit, ErrorCategory::capacity,
          "product distribution: too many joint actions");
  std::vector<Entry> entries;
  const int n = game.num_players();
  for (std::uint64_t cell = 0; cell < game.num_cells(); ++cell) {
    double prob = 1.0;
    std::uint64_t rest = cell;
    for (int p = 0; p < n && prob != 0.0; ++p) {
      prob *= profile[p][rest / game.stride(p)];
      rest %= game.stride(p);
    }
    if (prob > 0.0) entries.push_back({cell, prob});
  }
  return JointDistribution({game.actions().begin(), game.actions().end()}, std::move(entries));
}

double JointDistribution::probability(std::uint64_t cell) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), cell,
                             [](const Entry& e, std::uint64_t c) { return e.cell < c; });
  if (it == entries_.end() || it->cell != cell || total_ <= 0.0) return 0.0;
  return it->weight / total_;
}

MixedProfile JointDistribution::marginals() const {
  require(total_ > 0.0, ErrorCategory::invalid_argument, "marginals of an empty distribution");
  const int n = static_cast<int>(actions_.size());
  std::vector<std::uint64_t> strides(n, 1);
  for (int p = n - 2; p >= 0; --p) strides[p] = strides[p + 1] * actions_[p + 1];
  MixedProfile out;
  for (int a : actions_) out.policies.emplace_back(a, 0.0);
  for (const Entry& e : entries_) {
    std::uint64_t rest = e.cell;
    for (int p = 0; p < n; ++p) {
      out[p][rest / strides[p]] += e.weight / total_;
      rest %= strides[p];
    }
  }
  return out;
}

namespace {

void check_distribution(const Game& game, const JointDistribution& dist) {
  require(!dist.empty() && dist.total_weight() > 0.0, ErrorCategory::invalid_argument,
          "empty joint distribution");
  require(std::equal(dist.actions().begin(), dist.actions().end(), game.actions().begin(),
                     game.actions().end()),
          ErrorCategory::invalid_argument, "distribution shape differs from the game");
}

// Calls f(player, played, alternative, probability * (u(alt) - u(played))) for
// every support cell, player and alternative action.
template <typename F>
void for_each_deviation(const Game& game, const JointDistribution& dist, F&& f) {
  const int n = game.num_players();
  const double total = dist.total_weight();
  for (const auto& e : dist.entries()) {
    const double prob = e.weight / total;
    std::uint64_t rest = e.cell;
    for (int p = 0; p < n; ++p) {
      const std::uint64_t stride = game.stride(p);
      const int played = static_cast<int>(rest / stride);
      rest %= stride;
      const std::uint64_t base = e.cell - stride * played;
      const double u = game.payoff_at(e.cell, p);
      for (int b = 0; b < game.num_actions(p); ++b) {
        if (b == played) continue;
        f(p, played, b, prob * (game.payoff_at(base + stride * b, p) - u));
      }
    }
  }
}

}  // namespace

std::vector<double> best_response_gains(const Game& game, const MixedProfile& profile,
                                        std::uint64_t cell_limit) {
  std::vector<double> gains(game.num_players());
  for (int p = 0; p < game.num_players(); ++p) {
    const auto values = deviation_payoffs(game, profile, p, cell_limit);
    const double current =
        std::inner_product(values.begin(), values.end(), profile[p].begin(), 0.0);
    const double best = *std::max_element(values.begin(), values.end());
    gains[p] = std::max(0.0, best - current);
  }
  return gains;
}

double nash_gap(const Game& game, const MixedProfile& profile, std::uint64_t cell_limit) {
  const auto gains = best_response_gains(game, profile, cell_limit);
  return *std::max_element(gains.begin(), gains.end());
}

double exploitability(const Game& game, const MixedProfile& profile, std::uint64_t cell_limit) {
  const auto gains = best_response_gains(game, profile, cell_limit);
  return std::accumulate(gains.begin(), gains.end(), 0.0);
}

BestResponse best_response(const Game& game, int player, const MixedProfile& profile,
                           std::uint64_t cell_limit) {
  require(player >= 0 && player < game.num_players(), ErrorCategory::out_of_range,
          "best_response: player out of range");
  const auto values = deviation_payoffs(game, profile, player, cell_limit);
  BestResponse best{0, values[0]};
  for (int a = 1; a < static_cast<int>(values.size()); ++a) {
    if (values[a] > best.value) best = {a, values[a]};
  }
  return best;
}

double cce_gap(const Game& game, const JointDistribution& dist) {
  check_distribution(game, dist);
  std::vector<std::vector<double>> gain;
  for (int a : game.actions()) gain.emplace_back(a, 0.0);
  // Cells where b was played contribute 0 to deviation b.
  for_each_deviation(game, dist, [&](int p, int, int b, double delta) { gain[p][b] += delta; });
  double best = 0.0;
  for (const auto& g : gain) best = std::max(best, *std::max_element(g.begin(), g.end()));
  return best;
}

double ce_gap(const Game& game, const JointDistribution& dist) {
  check_distribution(game, dist);
  std::vector<std::vector<double>> gain;  // per player, played x alternative
  for (int a : game.actions()) gain.emplace_back(static_cast<std::size_t>(a) * a, 0.0);
  for_each_deviation(game, dist, [&](int p, int played, int b, double delta) {
    gain[p][static_cast<std::size_t>(played) * game.num_actions(p) + b] += delta;
  });
  double best = 0.0;
  for (int p = 0; p < game.num_players(); ++p) {
    const int m = game.num_actions(p);
    double sum = 0.0;
    for (int a = 0; a < m; ++a) {
      double row = 0.0;
      for (int b = 0; b < m; ++b) row = std::max(row, gain[p][static_cast<std::size_t>(a) * m + b]);
      sum += row;
    }
    best = std::max(best, sum);
  }
  return best;
}

double welfare(const Game& game, const JointDistribution& dist) {
  check_distribution(game, dist);
  double sum = 0.0;
  for (const auto& e : dist.entries()) {
    double cell = 0.0;
    for (int p = 0; p < game.num_players(); ++p) cell += game.payoff_at(e.cell, p);
    sum += e.weight / dist.total_weight() * cell;
  }
  return sum;
}

}  // namespace gw
