#include <gtest/gtest.h>

#include "gw/double_oracle.hpp"
#include "gw/error.hpp"

using namespace gw;

namespace {

DoubleOracleConfig mixed_greedy(long per_round, std::uint64_t seed) {
  DoubleOracleConfig c;
  c.inner.variant.mode = PlayMode::mixed_two_player;
  c.inner.weights.scheme = WeightScheme::greedy;
  c.inner.iterations = per_round;
  c.inner.audit = false;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(RestrictedGame, MaterializeLiftExtend) {
  const Game g = generate_random_game(2, std::vector<int>{4, 3}, GameKind::general_sum, 1);
  RestrictedGame rg(g, {{2, 0}, {1}});
  const Game sub = rg.materialize();
  EXPECT_EQ(sub.num_actions(0), 2);
  EXPECT_EQ(sub.payoff(0, std::vector<int>{0, 0}), g.payoff(0, std::vector<int>{2, 1}));
  EXPECT_EQ(sub.payoff(1, std::vector<int>{1, 0}), g.payoff(1, std::vector<int>{0, 1}));

  MixedProfile small;
  small.policies = {{0.25, 0.75}, {1.0}};
  const auto lifted = rg.lift(small);
  EXPECT_EQ(lifted[0], (std::vector<double>{0.75, 0.0, 0.25, 0.0}));
  EXPECT_EQ(lifted[1], (std::vector<double>{0.0, 1.0, 0.0}));

  EXPECT_FALSE(rg.add(0, 2));
  EXPECT_TRUE(rg.add(1, 2));
  EXPECT_TRUE(rg.contains(1, 2));
  const auto extended = rg.extend(small);
  EXPECT_EQ(extended[1], (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(extended[0], small[0]);
}

TEST(RestrictedGame, RejectsBadSupports) {
  const Game g = catalog("rock_paper_scissors");
  EXPECT_THROW(RestrictedGame(g, {{0}, {}}), Error);
  EXPECT_THROW(RestrictedGame(g, {{0, 0}, {1}}), Error);
  EXPECT_THROW(RestrictedGame(g, {{3}, {1}}), Error);
}

TEST(DoubleOracle, DominantJointActionInTwoRounds) {
  // Action 2 strictly dominates for both players.
  std::vector<double> payoffs;
  Rng rng(3);
  for (int a0 = 0; a0 < 4; ++a0)
    for (int a1 = 0; a1 < 4; ++a1) {
      payoffs.push_back((a0 == 2 ? 10.0 : 0.0) + rng.uniform());
      payoffs.push_back((a1 == 2 ? 10.0 : 0.0) + rng.uniform());
    }
  const Game g = Game::dense({4, 4}, payoffs);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto c = mixed_greedy(200, seed);
    c.inner.variant.mode = PlayMode::pure_sampled;
    const auto r = double_oracle_solve(g, c);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.rounds.size(), 2u);
    EXPECT_NEAR(r.profile[0][2], 1.0, 1e-9);
    EXPECT_NEAR(r.profile[1][2], 1.0, 1e-9);
  }
}

TEST(DoubleOracle, MatchesFullSolveOnZeroSum) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Game g = generate_random_game(2, 10, GameKind::zero_sum, 50 + seed);
    auto c = mixed_greedy(3000, seed);
    const auto r = double_oracle_solve(g, c);
    ASSERT_TRUE(r.converged);
    // A best response already in the support ends the loop too, so the
    // residual gain is bounded by the inner gap as well.
    EXPECT_LE(r.final_gap, c.outer_tol + r.inner_gap + 1e-12);
    SolverConfig full = c.inner;
    full.seed = seed;
    const auto direct = solve(g, full);
    const double full_gap = nash_gap(g, direct.average_profile);
    EXPECT_LE(std::abs(r.final_gap - full_gap), c.outer_tol + full_gap + r.inner_gap);
    EXPECT_NEAR(nash_gap(g, r.profile), r.final_gap, 1e-12);
  }
}

TEST(DoubleOracle, SupportsGrowMonotonically) {
  const Game g = generate_random_game(2, 30, GameKind::zero_sum, 9);
  const auto r = double_oracle_solve(g, mixed_greedy(500, 9));
  long total = 0;
  for (std::size_t k = 0; k < r.rounds.size(); ++k) {
    total += r.rounds[k].iterations;
    if (k == 0) continue;
    for (int i = 0; i < 2; ++i) {
      EXPECT_GE(r.rounds[k].support_sizes[i], r.rounds[k - 1].support_sizes[i]);
    }
    EXPECT_EQ(r.rounds[k].support_sizes[0] + r.rounds[k].support_sizes[1],
              r.rounds[k - 1].support_sizes[0] + r.rounds[k - 1].support_sizes[1] +
                  r.rounds[k - 1].added);
  }
  EXPECT_EQ(total, r.total_iterations);
  for (int i = 0; i < 2; ++i) {
    for (int a = 0; a < 30; ++a) {
      const bool in = std::find(r.support[i].begin(), r.support[i].end(), a) != r.support[i].end();
      if (!in) {
        EXPECT_EQ(r.profile[i][a], 0.0);
      }
    }
  }
}

TEST(DoubleOracle, FixedBudgetRunsEveryRound) {
  const Game g = generate_random_game(2, 8, GameKind::zero_sum, 4);
  auto c = mixed_greedy(100, 4);
  c.max_rounds = 12;
  c.stop_when_converged = false;
  const auto r = double_oracle_solve(g, c);
  EXPECT_EQ(r.rounds.size(), 12u);
  EXPECT_EQ(r.total_iterations, 1200);
}

TEST(DoubleOracle, ConfigValidation) {
  const Game g = catalog("matching_pennies");
  auto c = mixed_greedy(10, 0);
  c.max_rounds = 0;
  EXPECT_THROW(double_oracle_solve(g, c), Error);
  c = mixed_greedy(10, 0);
  c.outer_tol = -1.0;
  EXPECT_THROW(double_oracle_solve(g, c), Error);
}
