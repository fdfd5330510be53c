#include "gw/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gw/error.hpp"
#include "gw/rng.hpp"

namespace gw {
namespace {

double procedural_raw(std::uint64_t seed, std::uint64_t counter) noexcept {
  return to_unit_interval(mix64(mix64(seed) + counter));
}

template <typename F>
void for_each_cell(const Game& game, F&& f) {
  const int n = game.num_players();
  JointAction joint(n, 0);
  for (std::uint64_t cell = 0; cell < game.num_cells(); ++cell) {
    f(cell, std::span<const int>(joint));
    for (int p = n - 1; p >= 0; --p) {
      if (++joint[p] < game.num_actions(p)) break;
      joint[p] = 0;
    }
  }
}

void check_cell_limit(const Game& game, std::uint64_t cell_limit, std::string_view what) {
  require(game.num_cells() <= cell_limit, ErrorCategory::capacity,
          std::string(what) + ": game has " + std::to_string(game.num_cells()) +
              " joint actions, above the limit of " + std::to_string(cell_limit));
}

}  // namespace

std::string_view to_string(GameKind kind) noexcept {
  switch (kind) {
    case GameKind::general_sum: return "general_sum";
    case GameKind::zero_sum: return "zero_sum";
    case GameKind::cooperative: return "cooperative";
  }
  return "general_sum";
}

GameKind parse_game_kind(std::string_view text) {
  if (text == "general_sum") return GameKind::general_sum;
  if (text == "zero_sum") return GameKind::zero_sum;
  if (text == "cooperative") return GameKind::cooperative;
  fail(ErrorCategory::invalid_argument, "unknown game kind '" + std::string(text) + "'");
}

std::string_view to_string(Backend backend) noexcept {
  return backend == Backend::dense ? "dense" : "procedural";
}

void Game::init_shape(std::vector<int> actions) {
  require(actions.size() >= 1, ErrorCategory::invalid_argument, "a game needs at least one player");
  for (int a : actions) {
    require(a >= 1, ErrorCategory::invalid_argument, "every player needs at least one action");
  }
  actions_ = std::move(actions);
  const int n = num_players();
  strides_.assign(n, 1);
  std::uint64_t cells = 1;
  for (int p = n - 1; p >= 0; --p) {
    strides_[p] = cells;
    require(cells <= std::numeric_limits<std::uint64_t>::max() / actions_[p],
            ErrorCategory::capacity, "joint action count overflows 64 bits");
    cells *= static_cast<std::uint64_t>(actions_[p]);
  }
  num_cells_ = cells;
  max_actions_ = *std::max_element(actions_.begin(), actions_.end());
}

Game Game::dense(std::vector<int> actions, std::vector<double> payoffs, GameKind kind) {
  Game game;
  game.init_shape(std::move(actions));
  const std::uint64_t expected = game.num_cells_ * static_cast<std::uint64_t>(game.num_players());
  require(payoffs.size() == expected, ErrorCategory::invalid_argument,
          "dense payoff buffer has " + std::to_string(payoffs.size()) + " entries, expected " +
              std::to_string(expected));
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : payoffs) {
    require(std::isfinite(v), ErrorCategory::invalid_argument, "payoffs must be finite");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  game.payoff_range_ = hi - lo;
  game.kind_ = kind;
  game.backend_ = Backend::dense;
  game.payoffs_ = std::make_shared<const std::vector<double>>(std::move(payoffs));
  return game;
}

Game Game::procedural(std::vector<int> actions, GameKind kind, std::uint64_t seed) {
  Game game;
  game.init_shape(std::move(actions));
  game.kind_ = kind;
  game.backend_ = Backend::procedural;
  game.seed_ = seed;
  const int n = game.num_players();
  switch (kind) {
    case GameKind::general_sum:
    case GameKind::cooperative: game.payoff_range_ = 1.0; break;
    case GameKind::zero_sum:
      game.payoff_range_ = n == 2 ? 2.0 : 2.0 * (n - 1) / static_cast<double>(n);
      break;
  }
  return game;
}

std::uint64_t Game::cell_index(std::span<const int> joint) const {
  check(joint);
  std::uint64_t cell = 0;
  for (int p = 0; p < num_players(); ++p) cell += strides_[p] * static_cast<std::uint64_t>(joint[p]);
  return cell;
}

JointAction Game::joint_action(std::uint64_t cell) const {
  require(cell < num_cells_, ErrorCategory::out_of_range, "cell index out of range");
  JointAction joint(num_players());
  for (int p = 0; p < num_players(); ++p) {
    joint[p] = static_cast<int>(cell / strides_[p]);
    cell %= strides_[p];
  }
  return joint;
}

void Game::check(std::span<const int> joint) const {
  require(joint.size() == actions_.size(), ErrorCategory::invalid_argument,
          "joint action has " + std::to_string(joint.size()) + " entries for a " +
              std::to_string(actions_.size()) + "-player game");
  for (int p = 0; p < num_players(); ++p) {
    if (joint[p] < 0 || joint[p] >= actions_[p]) {
      fail(ErrorCategory::out_of_range, "action " + std::to_string(joint[p]) + " of player " +
                                            std::to_string(p) + " outside [0, " +
                                            std::to_string(actions_[p]) + ")");
    }
  }
}

double Game::payoff_at(std::uint64_t cell, int player) const noexcept {
  const auto n = static_cast<std::uint64_t>(actions_.size());
  if (backend_ == Backend::dense) return (*payoffs_)[cell * n + player];
  const std::uint64_t base = cell * n;
  switch (kind_) {
    case GameKind::general_sum: return procedural_raw(seed_, base + player);
    case GameKind::cooperative: return procedural_raw(seed_, base);
    case GameKind::zero_sum: {
      if (n == 2) {
        const double x = procedural_raw(seed_, base);
        return player == 0 ? x : -x;
      }
      double sum = 0.0;
      for (std::uint64_t j = 0; j < n; ++j) sum += procedural_raw(seed_, base + j);
      return procedural_raw(seed_, base + player) - sum / static_cast<double>(n);
    }
  }
  return 0.0;
}

std::vector<double> Game::payoff(std::span<const int> joint) const {
  const std::uint64_t cell = cell_index(joint);
  std::vector<double> out(num_players());
  for (int p = 0; p < num_players(); ++p) out[p] = payoff_at(cell, p);
  return out;
}

double Game::payoff(int player, std::span<const int> joint) const {
  require(player >= 0 && player < num_players(), ErrorCategory::out_of_range,
          "player index out of range");
  return payoff_at(cell_index(joint), player);
}

std::span<const double> Game::dense_payoffs() const {
  require(is_dense(), ErrorCategory::unsupported, "procedural game has no dense payoff buffer");
  return *payoffs_;
}

Game Game::materialize(std::uint64_t cell_limit) const {
  if (is_dense()) return *this;
  check_cell_limit(*this, cell_limit, "materialize");
  const int n = num_players();
  std::vector<double> payoffs(num_cells_ * static_cast<std::uint64_t>(n));
  for (std::uint64_t cell = 0; cell < num_cells_; ++cell) {
    for (int p = 0; p < n; ++p) payoffs[cell * n + p] = payoff_at(cell, p);
  }
  return dense(actions_, std::move(payoffs), kind_);
}

Game Game::with_kind(GameKind kind) const {
  Game copy = *this;
  copy.kind_ = kind;
  return copy;
}

void validate_profile(const Game& game, const MixedProfile& profile, double tol) {
  require(profile.num_players() == static_cast<std::size_t>(game.num_players()),
          ErrorCategory::invalid_argument, "profile has the wrong number of players");
  for (int p = 0; p < game.num_players(); ++p) {
    const auto& pi = profile[p];
    require(pi.size() == static_cast<std::size_t>(game.num_actions(p)),
            ErrorCategory::invalid_argument,
            "policy of player " + std::to_string(p) + " has the wrong length");
    double sum = 0.0;
    for (double x : pi) {
      require(x >= 0.0 && std::isfinite(x), ErrorCategory::invalid_argument,
              "policy entries must be finite and nonnegative");
      sum += x;
    }
    require(std::abs(sum - 1.0) <= tol, ErrorCategory::invalid_argument,
            "policy of player " + std::to_string(p) + " sums to " + std::to_string(sum));
  }
}

MixedProfile uniform_profile(const Game& game) {
  MixedProfile profile;
  for (int a : game.actions()) profile.policies.emplace_back(a, 1.0 / a);
  return profile;
}

MixedProfile point_mass_profile(const Game& game, std::span<const int> joint) {
  game.check(joint);
  MixedProfile profile;
  for (int p = 0; p < game.num_players(); ++p) {
    profile.policies.emplace_back(game.num_actions(p), 0.0);
    profile.policies.back()[joint[p]] = 1.0;
  }
  return profile;
}

std::vector<double> expected_payoff(const Game& game, const MixedProfile& profile,
                                    std::uint64_t cell_limit) {
  validate_profile(game, profile);
  check_cell_limit(game, cell_limit, "expected_payoff");
  const int n = game.num_players();
  std::vector<double> value(n, 0.0);
  for_each_cell(game, [&](std::uint64_t cell, std::span<const int> joint) {
    double prob = 1.0;
    for (int p = 0; p < n && prob != 0.0; ++p) prob *= profile[p][joint[p]];
    if (prob == 0.0) return;
    for (int p = 0; p < n; ++p) value[p] += prob * game.payoff_at(cell, p);
  });
  return value;
}

std::vector<double> deviation_payoffs(const Game& game, const MixedProfile& profile, int player,
                                      std::uint64_t cell_limit) {
  validate_profile(game, profile);
  check_cell_limit(game, cell_limit, "deviation_payoffs");
  const int n = game.num_players();
  std::vector<double> value(game.num_actions(player), 0.0);
  for_each_cell(game, [&](std::uint64_t cell, std::span<const int> joint) {
    double prob = 1.0;
    for (int p = 0; p < n && prob != 0.0; ++p) {
      if (p != player) prob *= profile[p][joint[p]];
    }
    if (prob == 0.0) return;
    value[joint[player]] += prob * game.payoff_at(cell, player);
  });
  return value;
}

Game generate_random_game(int num_players, std::span<const int> actions, GameKind kind,
                          std::uint64_t seed, const GenerateOptions& options) {
  require(num_players >= 2, ErrorCategory::invalid_argument, "random games need >= 2 players");
  require(actions.size() == static_cast<std::size_t>(num_players), ErrorCategory::invalid_argument,
          "actions list length must equal the number of players");
  Game game = Game::procedural(std::vector<int>(actions.begin(), actions.end()), kind, seed);
  using Choice = GenerateOptions::BackendChoice;
  const bool want_dense =
      options.backend == Choice::dense ||
      (options.backend == Choice::automatic && game.num_cells() <= options.dense_cell_limit);
  return want_dense ? game.materialize(std::numeric_limits<std::uint64_t>::max()) : game;
}

Game generate_random_game(int num_players, int actions_per_player, GameKind kind,
                          std::uint64_t seed, const GenerateOptions& options) {
  const std::vector<int> actions(std::max(num_players, 0), actions_per_player);
  return generate_random_game(num_players, actions, kind, seed, options);
}

Decomposition decompose(const Game& game, std::uint64_t cell_limit) {
  const Game dense = game.materialize(cell_limit);
  const int n = dense.num_players();
  const auto payoffs = dense.dense_payoffs();
  std::vector<double> zero(payoffs.size());
  std::vector<double> coop(payoffs.size());
  for (std::uint64_t cell = 0; cell < dense.num_cells(); ++cell) {
    const double* u = payoffs.data() + cell * n;
    double sum = 0.0;
    for (int p = 0; p < n; ++p) sum += u[p];
    const double mean = sum / n;
    for (int p = 0; p < n; ++p) {
      zero[cell * n + p] = u[p] - mean;
      coop[cell * n + p] = mean;
    }
  }
  const std::vector<int> shape(dense.actions().begin(), dense.actions().end());
  return {Game::dense(shape, std::move(zero), GameKind::zero_sum),
          Game::dense(shape, std::move(coop), GameKind::cooperative)};
}

double frobenius_norm(const Game& game) {
  double sum = 0.0;
  for (double v : game.dense_payoffs()) sum += v * v;
  return std::sqrt(sum);
}

double adversarialness(const Game& game, std::uint64_t cell_limit) {
  const Game dense = game.materialize(cell_limit);
  const double total = frobenius_norm(dense);
  require(total > 0.0, ErrorCategory::invalid_argument,
          "adversarialness is undefined for an all-zero game");
  return frobenius_norm(decompose(dense).zero_sum_part) / total;
}

bool is_zero_sum(const Game& game, double tol) {
  if (!game.is_dense()) return game.kind() == GameKind::zero_sum;
  const int n = game.num_players();
  const auto payoffs = game.dense_payoffs();
  for (std::uint64_t cell = 0; cell < game.num_cells(); ++cell) {
    double sum = 0.0;
    for (int p = 0; p < n; ++p) sum += payoffs[cell * n + p];
    if (std::abs(sum) > tol) return false;
  }
  return true;
}

bool is_cooperative(const Game& game, double tol) {
  if (!game.is_dense()) return game.kind() == GameKind::cooperative;
  const int n = game.num_players();
  const auto payoffs = game.dense_payoffs();
  for (std::uint64_t cell = 0; cell < game.num_cells(); ++cell) {
    for (int p = 1; p < n; ++p) {
      if (std::abs(payoffs[cell * n + p] - payoffs[cell * n]) > tol) return false;
    }
  }
  return true;
}

Game interpolate(const Game& zero_sum, const Game& cooperative, double lambda, double tol) {
  require(lambda >= 0.0 && lambda <= 1.0, ErrorCategory::invalid_argument,
          "lambda must lie in [0, 1]");
  require(std::equal(zero_sum.actions().begin(), zero_sum.actions().end(),
                     cooperative.actions().begin(), cooperative.actions().end()),
          ErrorCategory::invalid_argument, "interpolate: game shapes differ");
  const Game z = zero_sum.materialize();
  const Game c = cooperative.materialize();
  require(is_zero_sum(z, tol), ErrorCategory::invalid_argument,
          "interpolate: first game is not zero-sum");
  require(is_cooperative(c, tol), ErrorCategory::invalid_argument,
          "interpolate: second game is not cooperative");
  const auto zp = z.dense_payoffs();
  const auto cp = c.dense_payoffs();
  std::vector<double> out(zp.size());
  for (std::size_t k = 0; k < zp.size(); ++k) out[k] = lambda * zp[k] + (1.0 - lambda) * cp[k];
  GameKind kind = GameKind::general_sum;
  if (lambda == 1.0) kind = GameKind::zero_sum;
  if (lambda == 0.0) kind = GameKind::cooperative;
  return Game::dense(std::vector<int>(z.actions().begin(), z.actions().end()), std::move(out),
                     kind);
}

Game scaled(const Game& game, double factor) {
  const auto src = game.dense_payoffs();
  std::vector<double> out(src.begin(), src.end());
  for (double& v : out) v *= factor;
  return Game::dense(std::vector<int>(game.actions().begin(), game.actions().end()),
                     std::move(out), game.kind());
}

namespace {

// Builds a two-player game from row-player and column-player matrices.
Game bimatrix(int rows, int cols, const std::vector<double>& row_payoff,
              const std::vector<double>& col_payoff, GameKind kind) {
  std::vector<double> payoffs(static_cast<std::size_t>(rows) * cols * 2);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const std::size_t cell = static_cast<std::size_t>(r) * cols + c;
      payoffs[cell * 2] = row_payoff[cell];
      payoffs[cell * 2 + 1] = col_payoff[cell];
    }
  }
  return Game::dense({rows, cols}, std::move(payoffs), kind);
}

std::vector<double> negated(std::vector<double> v) {
  for (double& x : v) x = -x;
  return v;
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"matching_pennies", "rock_paper_scissors", "prisoners_dilemma",
          "chicken",          "battle_of_sexes",     "shapley"};
}

Game catalog(std::string_view name) {
  if (name == "matching_pennies") {
    // Actions: heads, tails. Row wins on a match.
    const std::vector<double> row = {1, -1, -1, 1};
    return bimatrix(2, 2, row, negated(row), GameKind::zero_sum);
  }
  if (name == "rock_paper_scissors") {
    // Actions: rock, paper, scissors.
    const std::vector<double> row = {0, -1, 1, 1, 0, -1, -1, 1, 0};
    return bimatrix(3, 3, row, negated(row), GameKind::zero_sum);
  }
  if (name == "prisoners_dilemma") {
    // Actions: cooperate, defect.
    return bimatrix(2, 2, {3, 0, 5, 1}, {3, 5, 0, 1}, GameKind::general_sum);
  }
  if (name == "chicken") {
    // Actions: swerve, straight.
    return bimatrix(2, 2, {0, -1, 1, -10}, {0, 1, -1, -10}, GameKind::general_sum);
  }
  if (name == "battle_of_sexes") {
    // Actions: opera, football. Row prefers opera.
    return bimatrix(2, 2, {3, 0, 0, 2}, {2, 0, 0, 3}, GameKind::general_sum);
  }
  if (name == "shapley") {
    const std::vector<double> row = {0, 1, 0, 0, 0, 1, 1, 0, 0};
    const std::vector<double> col = {0, 0, 1, 1, 0, 0, 0, 1, 0};
    return bimatrix(3, 3, row, col, GameKind::general_sum);
  }
  fail(ErrorCategory::invalid_argument, "unknown catalog game '" + std::string(name) + "'");
}

}  // namespace gw
