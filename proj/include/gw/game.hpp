#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gw {

// One action index per player.
using JointAction = std::vector<int>;

// Structural tag carried alongside the payoffs. general_sum makes no claim.
enum class GameKind { general_sum, zero_sum, cooperative };

std::string_view to_string(GameKind kind) noexcept;
GameKind parse_game_kind(std::string_view text);

enum class Backend { dense, procedural };

std::string_view to_string(Backend backend) noexcept;

// Default cap on cells a routine may enumerate or materialize.
inline constexpr std::uint64_t kDefaultCellLimit = 100'000'000;

// One probability vector per player.
struct MixedProfile {
  std::vector<std::vector<double>> policies;

  std::size_t num_players() const noexcept { return policies.size(); }
  const std::vector<double>& operator[](std::size_t player) const { return policies[player]; }
  std::vector<double>& operator[](std::size_t player) { return policies[player]; }
};

// An n-player normal-form game.
//
// Cells are indexed in row-major order over players: player 0's action is the
// slowest-varying digit and player n-1's the fastest. A dense backend stores
// payoffs[cell * n + player], so the player index varies fastest of all.
// A procedural backend derives every payoff from (seed, cell, player) through
// a counter-based hash and never materializes the tensor.
//
// Game values are immutable; copies share the payoff buffer.
class Game {
 public:
  // Takes ownership of a flat payoff buffer in the layout described above.
  static Game dense(std::vector<int> actions, std::vector<double> payoffs,
                    GameKind kind = GameKind::general_sum);

  // Uniform-[0,1) payoffs generated on demand. kind selects the construction
  // (see generate_random_game).
  static Game procedural(std::vector<int> actions, GameKind kind, std::uint64_t seed);

  int num_players() const noexcept { return static_cast<int>(actions_.size()); }
  std::span<const int> actions() const noexcept { return actions_; }
  int num_actions(int player) const { return actions_.at(player); }
  // A_I: the largest action count of any player.
  int max_actions() const noexcept { return max_actions_; }
  std::uint64_t num_cells() const noexcept { return num_cells_; }
  std::uint64_t stride(int player) const { return strides_.at(player); }

  GameKind kind() const noexcept { return kind_; }
  Backend backend() const noexcept { return backend_; }
  bool is_dense() const noexcept { return backend_ == Backend::dense; }
  std::uint64_t seed() const noexcept { return seed_; }

  // Delta: difference between the highest and lowest payoff of any player.
  double payoff_range() const noexcept { return payoff_range_; }

  // Throws out_of_range for invalid indices, invalid_argument on arity mismatch.
  std::uint64_t cell_index(std::span<const int> joint) const;
  JointAction joint_action(std::uint64_t cell) const;
  void check(std::span<const int> joint) const;

  // Unchecked fast path used by the solve loops.
  double payoff_at(std::uint64_t cell, int player) const noexcept;

  // u_i(a) for every player i.
  std::vector<double> payoff(std::span<const int> joint) const;
  double payoff(int player, std::span<const int> joint) const;

  // The dense buffer. Throws unsupported for procedural games.
  std::span<const double> dense_payoffs() const;

  // Dense copy of any game. Throws capacity above cell_limit.
  Game materialize(std::uint64_t cell_limit = kDefaultCellLimit) const;

  // Returns a copy whose kind tag is replaced (payoffs untouched).
  Game with_kind(GameKind kind) const;

 private:
  Game() = default;
  void init_shape(std::vector<int> actions);

  std::vector<int> actions_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t num_cells_ = 0;
  int max_actions_ = 0;
  GameKind kind_ = GameKind::general_sum;
  Backend backend_ = Backend::dense;
  std::uint64_t seed_ = 0;
  double payoff_range_ = 0.0;
  std::shared_ptr<const std::vector<double>> payoffs_;
};

// Checks each vector is nonnegative and sums to 1 within tol, and that the
// profile matches the game's shape. Throws invalid_argument otherwise.
void validate_profile(const Game& game, const MixedProfile& profile, double tol = 1e-9);

MixedProfile uniform_profile(const Game& game);
MixedProfile point_mass_profile(const Game& game, std::span<const int> joint);

// Exact expectation sum_a prod_j pi_j(a_j) u_i(a) by enumerating cells.
std::vector<double> expected_payoff(const Game& game, const MixedProfile& profile,
                                    std::uint64_t cell_limit = kDefaultCellLimit);

// For one player: u_i(a'_i, pi_{-i}) for every a'_i. Enumerates all cells.
std::vector<double> deviation_payoffs(const Game& game, const MixedProfile& profile, int player,
                                      std::uint64_t cell_limit = kDefaultCellLimit);

struct GenerateOptions {
  // auto picks dense below dense_cell_limit cells and procedural above.
  enum class BackendChoice { automatic, dense, procedural } backend = BackendChoice::automatic;
  std::uint64_t dense_cell_limit = 1ULL << 22;
};

// general_sum: every payoff i.i.d. uniform [0,1).
// zero_sum, two players: player 0 uniform [0,1), player 1 its negation.
// zero_sum, n > 2 players: per-cell mean subtraction of i.i.d. uniforms, so
//   the payoffs sum to zero in every cell. This is a different distribution
//   from the two-player construction.
// cooperative: one uniform [0,1) value per cell shared by all players.
// Dense and procedural backends produce identical payoffs for the same seed.
Game generate_random_game(int num_players, std::span<const int> actions, GameKind kind,
                          std::uint64_t seed, const GenerateOptions& options = {});
Game generate_random_game(int num_players, int actions_per_player, GameKind kind,
                          std::uint64_t seed, const GenerateOptions& options = {});

struct Decomposition {
  Game zero_sum_part;
  Game cooperative_part;
};

// Z_i = u_i - mean_j u_j and C = mean_j u_j, cellwise. Procedural games are
// materialized first when they fit under cell_limit.
Decomposition decompose(const Game& game, std::uint64_t cell_limit = kDefaultCellLimit);

// ||Z||_F / ||G||_F over all (cell, player) entries. Throws invalid_argument
// for an identically zero game.
double adversarialness(const Game& game, std::uint64_t cell_limit = kDefaultCellLimit);

// lambda * Z + (1 - lambda) * C. The first game must sum to zero in every
// cell and the second must give all players equal payoffs (checked at tol).
Game interpolate(const Game& zero_sum, const Game& cooperative, double lambda,
                 double tol = 1e-9);

// Frobenius norm over all (cell, player) entries of a dense game.
double frobenius_norm(const Game& game);

// Scales every payoff by factor (dense only).
Game scaled(const Game& game, double factor);

bool is_zero_sum(const Game& game, double tol = 1e-12);
bool is_cooperative(const Game& game, double tol = 1e-12);

// Built-in classic games: matching_pennies, rock_paper_scissors,
// prisoners_dilemma, chicken, battle_of_sexes, shapley. Tables are listed in
// the README.
Game catalog(std::string_view name);
std::vector<std::string> catalog_names();

}  // namespace gw
