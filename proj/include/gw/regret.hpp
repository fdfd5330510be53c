#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "gw/game.hpp"

namespace gw {

enum class RegretKind { external, internal };
enum class PlayMode { pure_sampled, mixed_two_player };

// Which weights the guiding regrets accumulate with. match_averaging reuses the
// iteration weight chosen for the average (vanilla, Linear RM, greedy);
// uniform with plus_clamping and linear averaging gives RM+. automatic is
// resolved by the solver (see resolve_policy_weighting) and otherwise acts as
// match_averaging.
enum class PolicyWeighting { automatic, match_averaging, uniform, linear };

std::string_view to_string(RegretKind kind) noexcept;
std::string_view to_string(PlayMode mode) noexcept;
std::string_view to_string(PolicyWeighting weighting) noexcept;
RegretKind parse_regret_kind(std::string_view text);
PlayMode parse_play_mode(std::string_view text);
PolicyWeighting parse_policy_weighting(std::string_view text);

inline constexpr double kDefaultInertia = 1e-10;

struct VariantConfig {
  RegretKind regret_kind = RegretKind::external;
  bool plus_clamping = false;
  PolicyWeighting policy_weighting = PolicyWeighting::automatic;
  bool optimism = false;
  // Player p's guiding regrets only absorb iteration t when t mod n == p mod n.
  int alternation_period = 1;
  double alpha = kDefaultInertia;
  PlayMode mode = PlayMode::pure_sampled;

  void validate(const Game& game) const;
};

// Offsets of each player's block inside a flat regret vector.
// External blocks hold |A_i| entries; internal blocks hold an |A_i| x |A_i|
// row-major matrix indexed (played action, alternative) with a structural-zero
// diagonal.
class RegretLayout {
 public:
  RegretLayout() = default;
  RegretLayout(const Game& game, RegretKind kind);
  RegretLayout(std::vector<int> actions, RegretKind kind);

  RegretKind kind() const noexcept { return kind_; }
  int num_players() const noexcept { return static_cast<int>(actions_.size()); }
  int num_actions(int player) const { return actions_.at(player); }
  std::size_t size() const noexcept { return size_; }
  std::size_t offset(int player) const { return offsets_.at(player); }
  std::size_t block_size(int player) const;

  // Flat index of internal component (played -> alternative) for a player.
  std::size_t internal_index(int player, int played, int alternative) const {
    return offsets_[player] + static_cast<std::size_t>(played) * actions_[player] + alternative;
  }

 private:
  RegretKind kind_ = RegretKind::external;
  std::vector<int> actions_;
  std::vector<std::size_t> offsets_;
  std::size_t size_ = 0;
};

struct RegretMatrix {
  int size = 0;
  std::vector<double> entries;  // row-major, size * size

  double operator()(int row, int col) const { return entries[static_cast<std::size_t>(row) * size + col]; }
};

// r_i(a'_i) = u_i(a'_i, a_{-i}) - u_i(a). The played component is exactly 0.
std::vector<std::vector<double>> external_instant_regret(const Game& game,
                                                         std::span<const int> joint);

// Row a_i of player i's matrix is the external vector; every other row is 0.
std::vector<RegretMatrix> internal_instant_regret(const Game& game, std::span<const int> joint);

// Flat variants writing into out (out.size() == layout.size()).
void instant_regret(const Game& game, const RegretLayout& layout, std::span<const int> joint,
                    std::span<double> out);

// Expected instantaneous regret of a mixed two-player profile:
//   external: r_i(a') = u_i(a', pi_{-i}) - u_i(pi)
//   internal: r_i(a, a') = pi_i(a) (u_i(a', pi_{-i}) - u_i(a, pi_{-i}))
// Throws unsupported for games with more than two players.
void mixed_instant_regret_2p(const Game& game, const RegretLayout& layout,
                             const MixedProfile& profile, std::span<double> out);

// Proportional to positive parts; uniform when no entry is positive.
std::vector<double> rm_external_policy(std::span<const double> guiding);

// Inertial regret matching from the row of the last played action:
// stay with alpha / (alpha + S), move to a' with R+(last, a') / (alpha + S).
std::vector<double> rm_internal_policy(std::span<const double> guiding_row, double alpha,
                                       int last_action);

// Stationary distribution q of the regret-matching chain on an internal block,
// i.e. sum_a q(a) R+(a, b) = q(b) sum_c R+(b, c) for every b. Used when players
// act with mixed policies and internal regret is minimized. Uniform when no
// entry is positive.
std::vector<double> rm_internal_stationary_policy(std::span<const double> guiding_block,
                                                  int num_actions);

// sum over all components of max(0, R / w_sum)^2.
double potential(std::span<const double> regrets, double w_sum);

// Cumulative regrets. "true" regrets define the equilibrium gap; guiding
// regrets select the next policy and may be clamped, gated, or boosted.
struct RegretState {
  RegretLayout layout;
  std::vector<double> regrets;
  std::vector<double> guiding;
  std::vector<double> boost;  // last guiding increment, re-added for optimistic selection
  double w_sum = 0.0;
  long iterations = 0;
};

RegretState make_regret_state(const Game& game, RegretKind kind);

// Applies iteration `iteration` (1-based) to the guiding regrets.
//   match_averaging: same step as the true regrets (G <- G + w r, or G <- G / w + r for w > 1)
//   uniform:         G <- G + r
//   linear:          G <- G + iteration * r
// Alternation skips the increment for players whose turn it is not (a discount
// still rescales their block). Plus-clamping zeroes negative entries afterwards.
// Optimism records the increment so selection can count it twice.
void apply_guiding_transforms(RegretState& state, const VariantConfig& config,
                              std::span<const double> instant, double w, long iteration);

// Regrets the next policy is computed from: guiding (+ the boost under optimism).
std::vector<double> selection_regrets(const RegretState& state, const VariantConfig& config);

// Whether player's guiding regrets absorb the given 1-based iteration.
bool guiding_turn(const VariantConfig& config, int player, long iteration) noexcept;

}  // namespace gw
