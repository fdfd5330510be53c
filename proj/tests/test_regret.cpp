#include <gtest/gtest.h>

#include <numeric>

#include "gw/error.hpp"
#include "gw/regret.hpp"
#include "support/oracles.hpp"

using namespace gw;

namespace {

void expect_distribution(std::span<const double> p) {
  double total = 0.0;
  for (double x : p) {
    EXPECT_GE(x, 0.0);
    total += x;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

}  // namespace

TEST(ExternalInstant, MatchingPenniesHeadsHeads) {
  const Game g = catalog("matching_pennies");
  const auto r = external_instant_regret(g, std::vector<int>{0, 0});
  EXPECT_EQ(r[0], (std::vector<double>{0.0, -2.0}));
  EXPECT_EQ(r[1], (std::vector<double>{0.0, 2.0}));
}

TEST(ExternalInstant, MatchesDirectSubtraction) {
  const Game g = generate_random_game(3, std::vector<int>{3, 4, 4}, GameKind::general_sum, 4);
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> a{int(rng.below(3)), int(rng.below(4)), int(rng.below(4))};
    const auto r = external_instant_regret(g, a);
    for (int i = 0; i < 3; ++i) {
      EXPECT_EQ(r[i][a[i]], 0.0);
      for (int b = 0; b < g.num_actions(i); ++b) {
        auto d = a;
        d[i] = b;
        EXPECT_EQ(r[i][b], g.payoff(i, d) - g.payoff(i, a));
      }
    }
  }
}

TEST(InternalInstant, MatchingPenniesHeadsHeads) {
  const Game g = catalog("matching_pennies");
  const auto m = internal_instant_regret(g, std::vector<int>{0, 0});
  EXPECT_EQ(m[0](0, 0), 0.0);
  EXPECT_EQ(m[0](0, 1), -2.0);
  EXPECT_EQ(m[0](1, 0), 0.0);
  EXPECT_EQ(m[0](1, 1), 0.0);
}

TEST(InternalInstant, OneNonzeroRowZeroDiagonalColumnSumsMatchExternal) {
  const Game g = generate_random_game(3, 4, GameKind::general_sum, 6);
  const std::vector<int> a{2, 0, 3};
  const auto m = internal_instant_regret(g, a);
  const auto e = external_instant_regret(g, a);
  for (int i = 0; i < 3; ++i) {
    for (int row = 0; row < 4; ++row) {
      EXPECT_EQ(m[i](row, row), 0.0);
      if (row == a[i]) continue;
      for (int col = 0; col < 4; ++col) EXPECT_EQ(m[i](row, col), 0.0);
    }
    for (int col = 0; col < 4; ++col) {
      double sum = 0.0;
      for (int row = 0; row < 4; ++row) sum += m[i](row, col);
      EXPECT_EQ(sum, e[i][col]);
    }
  }
}

TEST(InternalInstant, FlatLayoutMatchesMatrices) {
  const Game g = generate_random_game(2, std::vector<int>{3, 5}, GameKind::general_sum, 7);
  const RegretLayout layout(g, RegretKind::internal);
  const std::vector<int> a{1, 4};
  std::vector<double> flat(layout.size());
  instant_regret(g, layout, a, flat);
  const auto m = internal_instant_regret(g, a);
  for (int i = 0; i < 2; ++i) {
    const int n = g.num_actions(i);
    for (int row = 0; row < n; ++row) {
      for (int col = 0; col < n; ++col) {
        EXPECT_EQ(flat[layout.internal_index(i, row, col)], m[i](row, col));
      }
    }
  }
}

TEST(MixedInstant, PointMassEqualsPure) {
  const Game g = generate_random_game(2, std::vector<int>{3, 4}, GameKind::general_sum, 8);
  for (RegretKind kind : {RegretKind::external, RegretKind::internal}) {
    const RegretLayout layout(g, kind);
    const std::vector<int> a{2, 1};
    std::vector<double> pure(layout.size()), mixed(layout.size());
    instant_regret(g, layout, a, pure);
    mixed_instant_regret_2p(g, layout, point_mass_profile(g, a), mixed);
    for (std::size_t j = 0; j < pure.size(); ++j) EXPECT_NEAR(mixed[j], pure[j], 1e-15);
  }
}

TEST(MixedInstant, UniformRockPaperScissorsIsZero) {
  const Game g = catalog("rock_paper_scissors");
  const RegretLayout layout(g, RegretKind::external);
  std::vector<double> r(layout.size());
  mixed_instant_regret_2p(g, layout, uniform_profile(g), r);
  for (double x : r) EXPECT_NEAR(x, 0.0, 1e-15);
}

TEST(MixedInstant, MatchesEnumeratedExpectation) {
  const Game g = generate_random_game(2, std::vector<int>{4, 3}, GameKind::general_sum, 9);
  Rng rng(10);
  const MixedProfile pi = oracle::random_profile(g, rng);
  const auto joints = oracle::all_joints(oracle::shape_of(g));
  const RegretLayout ext(g, RegretKind::external), in(g, RegretKind::internal);
  std::vector<double> re(ext.size()), ri(in.size());
  mixed_instant_regret_2p(g, ext, pi, re);
  mixed_instant_regret_2p(g, in, pi, ri);
  for (int i = 0; i < 2; ++i) {
    const int n = g.num_actions(i);
    // u_i(b, pi_-i) for every b.
    std::vector<double> dev(n, 0.0);
    double value = 0.0;
    for (const auto& a : joints) {
      const double p = oracle::product_probability(pi, a);
      value += p * g.payoff(i, a);
      for (int b = 0; b < n; ++b) {
        auto d = a;
        d[i] = b;
        dev[b] += p * g.payoff(i, d);
      }
    }
    for (int b = 0; b < n; ++b) {
      EXPECT_NEAR(re[ext.offset(i) + b], dev[b] - value, 1e-12);
    }
    // Rows: pi_i(a) * (u_i(b, pi_-i) - u_i(a, pi_-i)); u_i(a, pi_-i) = dev[a].
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const double expected = a == b ? 0.0 : pi[i][a] * (dev[b] - dev[a]);
        EXPECT_NEAR(ri[in.internal_index(i, a, b)], expected, 1e-12);
      }
    }
  }
}

TEST(MixedInstant, ThreePlayersUnsupported) {
  const Game g = generate_random_game(3, 2, GameKind::general_sum, 1);
  const RegretLayout layout(g, RegretKind::external);
  std::vector<double> r(layout.size());
  try {
    mixed_instant_regret_2p(g, layout, uniform_profile(g), r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::unsupported);
  }
}

TEST(RmExternal, ProportionalToPositiveParts) {
  const std::vector<double> a{3, 1, 0}, b{-1, -2}, c{0, 0, 5};
  const auto pa = rm_external_policy(a), pb = rm_external_policy(b), pc = rm_external_policy(c);
  EXPECT_NEAR(pa[0], 0.75, 1e-15);
  EXPECT_NEAR(pa[1], 0.25, 1e-15);
  EXPECT_EQ(pa[2], 0.0);
  EXPECT_EQ(pb, (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(pc, (std::vector<double>{0.0, 0.0, 1.0}));
}

TEST(RmExternal, ScaleInvariantAndValid) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> r(6), scaled_r(6);
    const double c = 1e-3 + 100.0 * rng.uniform();
    for (int k = 0; k < 6; ++k) {
      r[k] = rng.uniform() - 0.5;
      scaled_r[k] = c * r[k];
    }
    const auto p = rm_external_policy(r), q = rm_external_policy(scaled_r);
    expect_distribution(p);
    for (int k = 0; k < 6; ++k) EXPECT_NEAR(p[k], q[k], 1e-12);
  }
}

TEST(RmInternal, NoPositiveRegretStays) {
  const std::vector<double> row{0.0, -1.0, -3.0};
  EXPECT_EQ(rm_internal_policy(row, 1.0, 0), (std::vector<double>{1.0, 0.0, 0.0}));
}

TEST(RmInternal, InertiaFormula) {
  const std::vector<double> row{0.0, 2.0, 2.0};
  const auto p = rm_internal_policy(row, 1.0, 0);
  EXPECT_NEAR(p[0], 0.2, 1e-15);
  EXPECT_NEAR(p[1], 0.4, 1e-15);
  EXPECT_NEAR(p[2], 0.4, 1e-15);
}

TEST(RmInternal, TinyInertiaAlmostAlwaysMoves) {
  const std::vector<double> row{0.5, 0.0, 0.5};
  const auto p = rm_internal_policy(row, 1e-10, 1);
  EXPECT_NEAR(p[1], 1e-10, 1e-15);
  expect_distribution(p);
}

TEST(RmInternal, StationaryPolicySatisfiesBalance) {
  Rng rng(4);
  const int n = 5;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> block(n * n, 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (a != b) block[a * n + b] = rng.uniform() - 0.3;
    const auto q = rm_internal_stationary_policy(block, n);
    expect_distribution(q);
    for (int b = 0; b < n; ++b) {
      double inflow = 0.0, outflow = 0.0;
      for (int a = 0; a < n; ++a) inflow += q[a] * std::max(0.0, block[a * n + b]);
      for (int c = 0; c < n; ++c) outflow += q[b] * std::max(0.0, block[b * n + c]);
      EXPECT_NEAR(inflow, outflow, 1e-10);
    }
  }
}

TEST(RmInternal, StationaryUniformWithoutPositiveRegret) {
  const std::vector<double> block(9, -1.0);
  const auto q = rm_internal_stationary_policy(block, 3);
  for (double x : q) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);
}

TEST(Potential, Examples) {
  const std::vector<double> r{3.0, -4.0}, neg{-1.0, 0.0, -2.0};
  EXPECT_EQ(potential(r, 1.0), 9.0);
  EXPECT_EQ(potential(r, 2.0), 2.25);
  EXPECT_EQ(potential(neg, 1.0), 0.0);
}

TEST(GuidingTransforms, PlusClampingZeroesNegatives) {
  const Game g = catalog("matching_pennies");
  RegretState s = make_regret_state(g, RegretKind::external);
  VariantConfig c;
  c.plus_clamping = true;
  c.policy_weighting = PolicyWeighting::uniform;
  const std::vector<double> r{-3.0, 5.0, 1.0, -1.0};
  apply_guiding_transforms(s, c, r, 1.0, 1);
  EXPECT_EQ(s.guiding, (std::vector<double>{0.0, 5.0, 1.0, 0.0}));
}

TEST(GuidingTransforms, OptimismBoostsSelectionOnly) {
  const Game g = catalog("matching_pennies");
  RegretState s = make_regret_state(g, RegretKind::external);
  s.guiding = {0.5, 0.25, 0.0, 0.0};
  const auto before = s.guiding;
  VariantConfig c;
  c.optimism = true;
  c.policy_weighting = PolicyWeighting::uniform;
  const std::vector<double> r{1.0, 0.0, 0.0, 1.0};
  apply_guiding_transforms(s, c, r, 1.0, 2);
  const auto sel = selection_regrets(s, c);
  for (int j = 0; j < 4; ++j) {
    EXPECT_EQ(s.guiding[j], before[j] + r[j]);
    EXPECT_EQ(sel[j], before[j] + 2.0 * r[j]);
  }
  // Without optimism the selection is the stored vector itself.
  c.optimism = false;
  EXPECT_EQ(selection_regrets(s, c), s.guiding);
}

TEST(GuidingTransforms, AlternationGatesPlayerZeroOnOddIterations) {
  const Game g = catalog("matching_pennies");
  RegretState s = make_regret_state(g, RegretKind::external);
  VariantConfig c;
  c.alternation_period = 2;
  c.policy_weighting = PolicyWeighting::uniform;
  const std::vector<double> r{1.0, 2.0, 3.0, 4.0};
  apply_guiding_transforms(s, c, r, 1.0, 1);
  EXPECT_EQ(s.guiding[0], 0.0);
  EXPECT_EQ(s.guiding[1], 0.0);
  EXPECT_EQ(s.guiding[2], 3.0);
  apply_guiding_transforms(s, c, r, 1.0, 2);
  EXPECT_EQ(s.guiding[0], 1.0);
  EXPECT_EQ(s.guiding[2], 3.0);
  EXPECT_TRUE(guiding_turn(c, 0, 2));
  EXPECT_FALSE(guiding_turn(c, 0, 3));
}

TEST(GuidingTransforms, MatchAveragingFollowsDiscountPath) {
  const Game g = catalog("matching_pennies");
  RegretState s = make_regret_state(g, RegretKind::external);
  s.guiding = {4.0, -2.0, 0.0, 8.0};
  VariantConfig c;
  c.policy_weighting = PolicyWeighting::match_averaging;
  const std::vector<double> r{1.0, 1.0, 1.0, 1.0};
  apply_guiding_transforms(s, c, r, 4.0, 3);
  EXPECT_EQ(s.guiding, (std::vector<double>{2.0, 0.5, 1.0, 3.0}));
  apply_guiding_transforms(s, c, r, 0.5, 4);
  EXPECT_EQ(s.guiding, (std::vector<double>{2.5, 1.0, 1.5, 3.5}));
}

TEST(GuidingTransforms, LinearWeightsByIteration) {
  const Game g = catalog("matching_pennies");
  RegretState s = make_regret_state(g, RegretKind::external);
  VariantConfig c;
  c.policy_weighting = PolicyWeighting::linear;
  const std::vector<double> r{1.0, 0.0, 0.0, -1.0};
  apply_guiding_transforms(s, c, r, 1.0, 3);
  EXPECT_EQ(s.guiding, (std::vector<double>{3.0, 0.0, 0.0, -3.0}));
}

TEST(Variant, ValidationRejectsBadSettings) {
  const Game g = catalog("matching_pennies");
  VariantConfig c;
  c.alpha = 0.0;
  EXPECT_THROW(c.validate(g), Error);
  c = VariantConfig{};
  c.alternation_period = 0;
  EXPECT_THROW(c.validate(g), Error);
  EXPECT_THROW(parse_regret_kind("swap"), Error);
  EXPECT_EQ(parse_play_mode("mixed"), PlayMode::mixed_two_player);
}
