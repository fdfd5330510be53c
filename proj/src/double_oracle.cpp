#include "gw/double_oracle.hpp"

#include <algorithm>
#include <optional>

#include "gw/error.hpp"
#include "gw/rng.hpp"

namespace gw {

RestrictedGame::RestrictedGame(Game base, std::vector<std::vector<int>> support)
    : base_(std::move(base)), support_(std::move(support)) {
  require(support_.size() == static_cast<std::size_t>(base_.num_players()),
          ErrorCategory::invalid_argument, "restriction needs one subset per player");
  for (int p = 0; p < base_.num_players(); ++p) {
    auto& s = support_[p];
    require(!s.empty(), ErrorCategory::invalid_argument, "restricted subsets must be nonempty");
    std::vector<int> sorted = s;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
            ErrorCategory::invalid_argument, "restricted subset has duplicates");
    for (int a : s) {
      require(a >= 0 && a < base_.num_actions(p), ErrorCategory::out_of_range,
              "restricted action outside the base game");
    }
  }
}

bool RestrictedGame::contains(int player, int action) const {
  const auto& s = support_.at(player);
  return std::find(s.begin(), s.end(), action) != s.end();
}

bool RestrictedGame::add(int player, int action) {
  require(action >= 0 && action < base_.num_actions(player), ErrorCategory::out_of_range,
          "added action outside the base game");
  if (contains(player, action)) return false;
  support_[player].push_back(action);
  return true;
}

Game RestrictedGame::materialize(std::uint64_t cell_limit) const {
  const int n = base_.num_players();
  std::vector<int> shape;
  std::uint64_t cells = 1;
  for (const auto& s : support_) {
    shape.push_back(static_cast<int>(s.size()));
    cells *= s.size();
  }
  require(cells <= cell_limit, ErrorCategory::capacity, "restricted game too large");
  std::vector<double> payoffs(cells * n);
  std::vector<int> local(n, 0);
  for (std::uint64_t cell = 0; cell < cells; ++cell) {
    std::uint64_t base_cell = 0;
    for (int p = 0; p < n; ++p) base_cell += base_.stride(p) * support_[p][local[p]];
    for (int p = 0; p < n; ++p) payoffs[cell * n + p] = base_.payoff_at(base_cell, p);
    for (int p = n - 1; p >= 0; --p) {
      if (++local[p] < shape[p]) break;
      local[p] = 0;
    }
  }
  return Game::dense(std::move(shape), std::move(payoffs), base_.kind());
}

MixedProfile RestrictedGame::lift(const MixedProfile& restricted) const {
  MixedProfile out;
  for (int p = 0; p < base_.num_players(); ++p) {
    require(restricted[p].size() == support_[p].size(), ErrorCategory::invalid_argument,
            "lift: profile does not match the support");
    std::vector<double> pi(base_.num_actions(p), 0.0);
    for (std::size_t k = 0; k < support_[p].size(); ++k) pi[support_[p][k]] = restricted[p][k];
    out.policies.push_back(std::move(pi));
  }
  return out;
}

MixedProfile RestrictedGame::extend(const MixedProfile& previous) const {
  MixedProfile out;
  for (int p = 0; p < base_.num_players(); ++p) {
    require(previous[p].size() <= support_[p].size(), ErrorCategory::invalid_argument,
            "extend: previous support is larger");
    std::vector<double> pi(support_[p].size(), 0.0);
    std::copy(previous[p].begin(), previous[p].end(), pi.begin());
    out.policies.push_back(std::move(pi));
  }
  return out;
}

DoubleOracleResult double_oracle_solve(const Game& game, const DoubleOracleConfig& config) {
  require(config.max_rounds >= 1, ErrorCategory::invalid_argument, "max_rounds must be >= 1");
  require(config.outer_tol >= 0.0, ErrorCategory::invalid_argument, "outer_tol must be >= 0");
  Rng rng(config.seed);
  std::vector<std::vector<int>> initial;
  for (int p = 0; p < game.num_players(); ++p) {
    initial.push_back({static_cast<int>(rng.below(game.num_actions(p)))});
  }
  RestrictedGame restricted(game, std::move(initial));

  DoubleOracleResult result;
  std::optional<MixedProfile> previous;
  for (int round = 1; round <= config.max_rounds; ++round) {
    const Game sub = restricted.materialize();
    SolverConfig inner = config.inner;
    inner.seed = mix64(config.inner.seed + static_cast<std::uint64_t>(round));
    inner.metrics.clear();
    if (config.seed_previous && previous) inner.initial = restricted.extend(*previous);
    Solver solver(sub, inner);
    solver.run(inner.iterations);
    const MixedProfile average = solver.average_profile();

    DoubleOracleRound log;
    log.round = round;
    for (const auto& s : restricted.support()) log.support_sizes.push_back(static_cast<int>(s.size()));
    log.iterations = inner.iterations;
    log.inner_gap = nash_gap(sub, average);

    const MixedProfile lifted = restricted.lift(average);
    const auto solved_support = restricted.support();
    const auto current = expected_payoff(game, lifted);
    std::vector<BestResponse> responses;
    for (int p = 0; p < game.num_players(); ++p) {
      responses.push_back(best_response(game, p, lifted));
      log.full_gains.push_back(std::max(0.0, responses.back().value - current[p]));
    }
    for (int p = 0; p < game.num_players(); ++p) {
      if (log.full_gains[p] > config.outer_tol && restricted.add(p, responses[p].action)) {
        ++log.added;
      }
    }

    result.total_iterations += inner.iterations;
    result.profile = lifted;
    result.support = solved_support;
    result.inner_gap = log.inner_gap;
    result.converged = log.added == 0;
    result.rounds.push_back(std::move(log));
    previous = average;
    if (result.converged && config.stop_when_converged) break;
  }
  result.final_gap = nash_gap(game, result.profile);
  return result;
}

}  // namespace gw
