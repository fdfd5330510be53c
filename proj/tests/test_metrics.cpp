#include <gtest/gtest.h>

#include "gw/error.hpp"
#include "gw/metrics.hpp"
#include "support/oracles.hpp"

using namespace gw;

namespace {

JointDistribution to_joint(const Game& g, const oracle::Dist& d) {
  std::vector<JointDistribution::Entry> entries;
  for (const auto& [a, p] : d) entries.push_back({g.cell_index(a), p});
  return JointDistribution({g.actions().begin(), g.actions().end()}, entries);
}

Game random_small_game(Rng& rng, std::uint64_t seed) {
  const int n = 2 + static_cast<int>(rng.below(2));
  std::vector<int> actions;
  for (int i = 0; i < n; ++i) actions.push_back(2 + static_cast<int>(rng.below(3)));
  const GameKind kinds[] = {GameKind::general_sum, GameKind::zero_sum, GameKind::cooperative};
  return generate_random_game(n, actions, kinds[rng.below(3)], seed);
}

}  // namespace

TEST(NashGap, MatchingPennies) {
  const Game g = catalog("matching_pennies");
  EXPECT_NEAR(nash_gap(g, uniform_profile(g)), 0.0, 1e-15);
  const auto pm = point_mass_profile(g, std::vector<int>{0, 0});
  EXPECT_EQ(nash_gap(g, pm), 2.0);
  EXPECT_EQ(exploitability(g, pm), 2.0);
  const auto gains = best_response_gains(g, pm);
  EXPECT_EQ(gains[0], 0.0);
  EXPECT_EQ(gains[1], 2.0);
}

TEST(NashGap, MatchesEnumeration) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Game g = random_small_game(rng, 100 + trial);
    const MixedProfile pi = oracle::random_profile(g, rng);
    EXPECT_NEAR(nash_gap(g, pi), oracle::nash_gap(g, pi), 1e-9);
  }
}

TEST(NashGap, ExploitabilityIsSumOfGains) {
  const Game g = generate_random_game(3, 3, GameKind::general_sum, 3);
  Rng rng(3);
  const MixedProfile pi = oracle::random_profile(g, rng);
  const auto gains = best_response_gains(g, pi);
  EXPECT_NEAR(exploitability(g, pi), gains[0] + gains[1] + gains[2], 1e-12);
}

TEST(NashGap, ScalesLinearlyWithPayoffs) {
  const Game g = generate_random_game(2, 5, GameKind::zero_sum, 4);
  Rng rng(4);
  const MixedProfile pi = oracle::random_profile(g, rng);
  EXPECT_NEAR(nash_gap(scaled(g, 3.5), pi), 3.5 * nash_gap(g, pi), 1e-12);
}

TEST(BestResponse, MatchingPenniesAgainstMostlyHeads) {
  const Game g = catalog("matching_pennies");
  MixedProfile pi;
  pi.policies = {{0.9, 0.1}, {0.9, 0.1}};
  // Row wins on a match, so it follows the column's heads; the column avoids
  // matching and plays tails.
  EXPECT_EQ(best_response(g, 0, pi).action, 0);
  EXPECT_EQ(best_response(g, 1, pi).action, 1);
  EXPECT_NEAR(best_response(g, 0, pi).value, 0.8, 1e-12);
  EXPECT_NEAR(best_response(g, 1, pi).value, 0.8, 1e-12);
}

TEST(BestResponse, MatchesScan) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const Game g = random_small_game(rng, 200 + trial);
    const MixedProfile pi = oracle::random_profile(g, rng);
    for (int i = 0; i < g.num_players(); ++i) {
      EXPECT_EQ(best_response(g, i, pi).action, oracle::best_action(g, i, pi));
    }
  }
}

TEST(CceGap, PrisonersDilemmaDefectIsEquilibrium) {
  const Game g = catalog("prisoners_dilemma");
  const auto dd = JointDistribution::point_mass(g, std::vector<int>{1, 1});
  EXPECT_EQ(cce_gap(g, dd), 0.0);
  EXPECT_EQ(ce_gap(g, dd), 0.0);
  // From (C, C) either player gains 5 - 3 by defecting.
  const auto cc = JointDistribution::point_mass(g, std::vector<int>{0, 0});
  EXPECT_EQ(cce_gap(g, cc), 2.0);
  EXPECT_EQ(ce_gap(g, cc), 2.0);
}

TEST(CceGap, MatchingPenniesDiagonal) {
  const Game g = catalog("matching_pennies");
  const oracle::Dist d{{{0, 0}, 0.5}, {{1, 1}, 0.5}};
  const auto dist = to_joint(g, d);
  EXPECT_NEAR(cce_gap(g, dist), std::max(0.0, oracle::cce_gap_raw(g, d)), 1e-15);
  EXPECT_NEAR(cce_gap(g, dist), 1.0, 1e-15);
  EXPECT_NEAR(ce_gap(g, dist), oracle::ce_gap(g, d), 1e-15);
}

TEST(GapOracles, RandomGamesAndDistributions) {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const Game g = random_small_game(rng, 300 + trial);
    const oracle::Dist d = oracle::random_dist(g, rng, 1 + static_cast<int>(rng.below(8)));
    const auto dist = to_joint(g, d);
    const double cce = cce_gap(g, dist), ce = ce_gap(g, dist);
    EXPECT_NEAR(cce, std::max(0.0, oracle::cce_gap_raw(g, d)), 1e-9);
    EXPECT_NEAR(ce, oracle::ce_gap(g, d), 1e-9);
    EXPECT_LE(cce, ce + 1e-12);
  }
}

TEST(GapOracles, ProductDistributionCceBelowNashDeviation) {
  // For a product distribution the fixed-deviation gain is exactly the Nash gain.
  Rng rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const Game g = random_small_game(rng, 400 + trial);
    const MixedProfile pi = oracle::random_profile(g, rng);
    const auto dist = JointDistribution::product(g, pi);
    EXPECT_NEAR(cce_gap(g, dist), std::max(0.0, nash_gap(g, pi)), 1e-9);
  }
}

TEST(Welfare, PointMassAndCooperative) {
  const Game pd = catalog("prisoners_dilemma");
  EXPECT_EQ(welfare(pd, JointDistribution::point_mass(pd, std::vector<int>{0, 0})), 6.0);
  EXPECT_EQ(welfare(pd, JointDistribution::point_mass(pd, std::vector<int>{1, 0})), 5.0);

  const Game coop = generate_random_game(3, 3, GameKind::cooperative, 9);
  Rng rng(9);
  const oracle::Dist d = oracle::random_dist(coop, rng, 6);
  double shared = 0.0;
  for (const auto& [a, p] : d) shared += p * coop.payoff(0, a);
  EXPECT_NEAR(welfare(coop, to_joint(coop, d)), 3.0 * shared, 1e-12);
}

TEST(Welfare, ZeroSumIsZero) {
  const Game g = generate_random_game(3, 3, GameKind::zero_sum, 10);
  Rng rng(10);
  EXPECT_NEAR(welfare(g, to_joint(g, oracle::random_dist(g, rng, 5))), 0.0, 1e-12);
}

TEST(JointDistribution, MergesAndNormalizes) {
  const Game g = catalog("matching_pennies");
  const JointDistribution d({2, 2}, {{3, 1.0}, {0, 2.0}, {3, 1.0}});
  EXPECT_EQ(d.support_size(), 2u);
  EXPECT_EQ(d.total_weight(), 4.0);
  EXPECT_EQ(d.probability(3), 0.5);
  EXPECT_EQ(d.probability(1), 0.0);
  const auto m = d.marginals();
  EXPECT_EQ(m[0], (std::vector<double>{0.5, 0.5}));
  EXPECT_THROW(JointDistribution({2, 2}, {{0, -1.0}}), Error);
  EXPECT_THROW(JointDistribution({2, 2}, {{0, NAN}}), Error);
}
