#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gw/game.hpp"

namespace gw {

// Sparse weighted distribution over joint actions, stored as (cell, weight)
// pairs sorted by cell. Weights need not be normalized.
class JointDistribution {
 public:
  struct Entry {
    std::uint64_t cell;
    double weight;
  };

  JointDistribution() = default;
  // Duplicated cells are merged. Throws on negative or nonfinite weights.
  JointDistribution(std::vector<int> actions, std::vector<Entry> entries);

  static JointDistribution point_mass(const Game& game, std::span<const int> joint);
  // Product of the profile's marginals. Enumerates every cell.
  static JointDistribution product(const Game& game, const MixedProfile& profile,
                                   std::uint64_t cell_limit = kDefaultCellLimit);

  std::span<const int> actions() const noexcept { return actions_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t support_size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  double total_weight() const noexcept { return total_; }
  // Weight of a cell divided by the total weight.
  double probability(std::uint64_t cell) const;

  // Per-player marginal distributions.
  MixedProfile marginals() const;

 private:
  std::vector<int> actions_;
  std::vector<Entry> entries_;
  double total_ = 0.0;
};

// u_i(b, pi_{-i}) - u_i(pi) maximized over b, for every player.
std::vector<double> best_response_gains(const Game& game, const MixedProfile& profile,
                                        std::uint64_t cell_limit = kDefaultCellLimit);

// Largest best-response gain of any player; the epsilon of an epsilon-NE.
double nash_gap(const Game& game, const MixedProfile& profile,
                std::uint64_t cell_limit = kDefaultCellLimit);

// Sum of the best-response gains (NashConv).
double exploitability(const Game& game, const MixedProfile& profile,
                      std::uint64_t cell_limit = kDefaultCellLimit);

// Best pure response over the player's full action set; lowest index wins ties.
struct BestResponse {
  int action = 0;
  double value = 0.0;
};
BestResponse best_response(const Game& game, int player, const MixedProfile& profile,
                           std::uint64_t cell_limit = kDefaultCellLimit);

// max_i max_b sum_a p(a) (u_i(b, a_{-i}) - u_i(a)), clamped below at 0.
// The unclamped value can be negative when every fixed deviation loses.
double cce_gap(const Game& game, const JointDistribution& dist);

// max_i sum_{a_i} max(0, max_b sum_{a: a_i fixed} p(a) (u_i(b, a_{-i}) - u_i(a))).
double ce_gap(const Game& game, const JointDistribution& dist);

// sum_a p(a) sum_i u_i(a).
double welfare(const Game& game, const JointDistribution& dist);

}  // namespace gw
