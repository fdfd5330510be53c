#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "gw/bench/experiment.hpp"
#include "gw/bench/plot.hpp"
#include "gw/bench/records.hpp"
#include "gw/bench/stats.hpp"
#include "gw/error.hpp"

using namespace gw;
using namespace gw::bench;

namespace {

const char* kTwoAlgorithms = R"({
  "format_version": 1,
  "name": "unit",
  "games": {"generator": {"num_players": 2, "actions": 3, "kind": "zero_sum"},
            "seeds": [0, 1, 2, 3, 4, 5, 6, 7, 8, 9]},
  "iterations": 10000,
  "eval_points": 20,
  "metrics": ["nash_gap"],
  "algorithms": [
    {"label": "greedy", "weights": {"scheme": "greedy", "floor_fraction": 0.5}},
    {"label": "vanilla", "weights": {"scheme": "uniform"}}
  ]
})";

RunRecord rec(std::string label, std::uint64_t seed, long it, double value,
              std::string metric = "m") {
  RunRecord r;
  r.label = std::move(label);
  r.game_seed = seed;
  r.iteration = it;
  r.metric = std::move(metric);
  r.value = value;
  return r;
}

ErrorCategory category_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.category();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCategory::invalid_argument;
}

std::size_t count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + 1))
    ++n;
  return n;
}

}  // namespace

TEST(Experiment, RecordCountIsSeedsTimesAlgorithmsTimesPoints) {
  const auto config = parse_experiment_config(kTwoAlgorithms);
  const auto result = run_experiment(config);
  EXPECT_TRUE(result.failures.empty());
  EXPECT_EQ(result.records.size(), 10u * 2u * 20u * 1u);
}

TEST(Experiment, PairedSeedsAndRunIds) {
  const auto result = run_experiment(parse_experiment_config(kTwoAlgorithms));
  std::map<std::string, std::set<std::uint64_t>> seeds;
  for (const auto& r : result.records) {
    seeds[r.label].insert(r.game_seed);
    const long seed_index = r.run_id / 2;
    EXPECT_EQ(static_cast<std::uint64_t>(seed_index), r.game_seed);
    EXPECT_EQ(r.label, r.run_id % 2 == 0 ? "greedy" : "vanilla");
  }
  EXPECT_EQ(seeds["greedy"], seeds["vanilla"]);
}

TEST(Experiment, DeterministicAcrossRunsAndWorkerCounts) {
  const auto config = parse_experiment_config(kTwoAlgorithms);
  const auto a = run_experiment(config, 1), b = run_experiment(config, 3);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    auto x = a.records[k], y = b.records[k];
    x.wall_ns = y.wall_ns = 0;
    EXPECT_EQ(x, y);
  }
}

TEST(Experiment, FailingRunDoesNotAbortSiblings) {
  const auto config = parse_experiment_config(R"({
    "format_version": 1, "name": "mixed",
    "games": {"generator": {"num_players": 3, "actions": 2}, "seeds": [1, 2]},
    "iterations": 20, "eval_points": 3, "metrics": ["cce_gap"],
    "algorithms": [{"label": "ok", "weights": {"scheme": "uniform"}},
                   {"label": "bad", "mode": "mixed"}]})");
  const auto result = run_experiment(config);
  ASSERT_EQ(result.failures.size(), 2u);
  EXPECT_EQ(result.failures[0].category, ErrorCategory::unsupported);
  EXPECT_EQ(result.failures[0].label, "bad");
  EXPECT_EQ(result.records.size(), 2u * 3u);
}

TEST(Experiment, ConfigErrorsNameTheField) {
  const std::string base = kTwoAlgorithms;
  auto with = [&](const std::string& from, const std::string& to) {
    std::string s = base;
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  try {
    parse_experiment_config(with("\"floor_fraction\"", "\"flor_fraction\""));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::config);
    EXPECT_NE(std::string(e.what()).find("flor_fraction"), std::string::npos) << e.what();
  }
  EXPECT_EQ(category_of([&] { parse_experiment_config(with("\"format_version\": 1", "\"format_version\": 2")); }),
            ErrorCategory::config);
  EXPECT_EQ(category_of([&] { parse_experiment_config(with("\"uniform\"", "\"cubic\"")); }),
            ErrorCategory::config);
  EXPECT_EQ(category_of([&] { parse_experiment_config(with("\"iterations\": 10000", "\"iterations\": 0")); }),
            ErrorCategory::config);
  EXPECT_EQ(category_of([&] { parse_experiment_config("{not json"); }), ErrorCategory::config);
  EXPECT_EQ(category_of([&] {
              parse_experiment_config(with("\"label\": \"vanilla\"", "\"label\": \"greedy\""));
            }),
            ErrorCategory::config);
}

TEST(Records, CsvRoundTripIsExact) {
  std::vector<RunRecord> records;
  const double values[] = {0.1, 1e-300, -0.0, 123456789.123456789, 5e-324, 1.0 / 3.0};
  long id = 0;
  for (double v : values) {
    RunRecord r = rec("greedy_0.5", 18446744073709551615ULL, id * 7, v, "ce_gap");
    r.run_id = id++;
    r.wall_ns = 987654321012;
    r.weight = 3.0 / 7.0;
    records.push_back(r);
  }
  const std::string text = to_csv(records);
  EXPECT_EQ(text.substr(0, kCsvHeader.size()), kCsvHeader);
  EXPECT_EQ(parse_csv(text), records);
  EXPECT_EQ(to_csv(parse_csv(text)), text);
}

TEST(Records, ParseErrorsCarryLineNumbers) {
  const std::string bad = std::string(kCsvHeader) + "\n0,a,1,1,1,m,0.5,1\n0,a,1,x,1,m,0.5,1\n";
  try {
    parse_csv(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::config);
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos);
  }
  EXPECT_THROW(parse_csv("wrong,header\n"), Error);
  EXPECT_FALSE(is_csv_safe("a,b"));
  EXPECT_FALSE(is_csv_safe("a\"b"));
  EXPECT_TRUE(is_csv_safe("rm_plus"));
}

TEST(Stats, ConstantValuesHaveZeroWidth) {
  const std::vector<double> v{1.0, 1.0, 1.0};
  const auto s = summarize(v);
  EXPECT_EQ(s.mean, 1.0);
  ASSERT_TRUE(s.half_width);
  EXPECT_EQ(*s.half_width, 0.0);
}

TEST(Stats, TwoValuesUseOneDegreeOfFreedom) {
  const std::vector<double> v{0.0, 2.0};
  const auto s = summarize(v);
  EXPECT_EQ(s.mean, 1.0);
  // t-table: t_{0.975, 1} = 12.706; sd = sqrt(2), n = 2.
  ASSERT_TRUE(s.half_width);
  EXPECT_NEAR(*s.half_width, 12.706, 5e-4);
  EXPECT_NEAR(t_quantile_975(10), 2.228, 5e-4);
  EXPECT_NEAR(t_quantile_975(30), 2.042, 5e-4);
}

TEST(Stats, SingleValueHasNoInterval) {
  const std::vector<double> v{4.5};
  const auto s = summarize(v);
  EXPECT_EQ(s.mean, 4.5);
  EXPECT_FALSE(s.half_width);
  EXPECT_EQ(format_mean_hw(s), "4.500");
}

TEST(Stats, FormatMeanHalfWidth) {
  Summary s;
  s.count = 10;
  s.mean = 4.16;
  s.half_width = 0.023;
  EXPECT_EQ(format_mean_hw(s), "4.160 \xC2\xB1 0.023");
  EXPECT_EQ(format_mean_hw(s, 2), "4.16 \xC2\xB1 0.02");
}

TEST(Stats, AggregateIsPermutationInvariant) {
  std::vector<RunRecord> records;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    for (long it : {1L, 10L, 100L})
      for (const char* label : {"a", "b"}) records.push_back(rec(label, seed, it, u(rng)));
  const auto base = aggregate(records);
  EXPECT_EQ(base.size(), 6u);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(records.begin(), records.end(), rng);
    const auto shuffled = aggregate(records);
    ASSERT_EQ(shuffled.size(), base.size());
    for (std::size_t k = 0; k < base.size(); ++k) {
      EXPECT_EQ(shuffled[k].label, base[k].label);
      EXPECT_EQ(shuffled[k].iteration, base[k].iteration);
      EXPECT_EQ(shuffled[k].value.mean, base[k].value.mean);
      EXPECT_EQ(*shuffled[k].value.half_width, *base[k].value.half_width);
    }
  }
}

TEST(Stats, IterationsUntilRatio) {
  std::vector<RunRecord> constant, hundredth;
  for (std::uint64_t seed : {0u, 1u})
    for (long it : {1L, 10L, 100L}) {
      constant.push_back(rec("a", seed, it, 1.0));
      constant.push_back(rec("b", seed, it, 5.0));
      const double b = 1.0 / static_cast<double>(it);
      hundredth.push_back(rec("a", seed, it, b / 100.0));
      hundredth.push_back(rec("b", seed, it, b));
    }
  const auto none = iterations_until_ratio(constant, "a", "b", "m");
  ASSERT_EQ(none.per_seed.size(), 2u);
  EXPECT_FALSE(none.per_seed[0].second);
  EXPECT_FALSE(none.mean_iteration);
  const auto first = iterations_until_ratio(hundredth, "a", "b", "m");
  EXPECT_EQ(first.per_seed[0].second, 1L);
  EXPECT_EQ(first.mean_iteration, 1.0);

  constant.push_back(rec("a", 7, 1, 1.0));
  EXPECT_THROW(iterations_until_ratio(constant, "a", "b", "m"), Error);
}

TEST(Stats, SpearmanExtremes) {
  const std::vector<double> x{1, 2, 3, 4, 5}, up{2, 4, 8, 16, 32}, down{5, 4, 3, 2, 1};
  EXPECT_NEAR(spearman(x, up), 1.0, 1e-15);
  EXPECT_NEAR(spearman(x, down), -1.0, 1e-15);
  // Average ranks for ties: ranks (1.5, 1.5, 3) vs (1, 2, 3).
  const std::vector<double> tied{1, 1, 2}, plain{1, 2, 3};
  EXPECT_NEAR(spearman(tied, plain), 0.8660254037844386, 1e-12);
  const std::vector<double> flat{1, 1, 1};
  EXPECT_THROW(spearman(flat, plain), Error);
}

TEST(Plot, TwoLabelsTwoPolylines) {
  std::vector<RunRecord> records;
  for (std::uint64_t seed : {0u, 1u, 2u})
    for (long it : {1L, 10L, 100L, 1000L}) {
      records.push_back(rec("greedy", seed, it, 1.0 / (it * it) + 0.01 * seed));
      records.push_back(rec("vanilla", seed, it, 1.0 / it + 0.01 * seed));
    }
  const auto rows = aggregate(records);
  const auto a = emit_plot(rows, {});
  const auto b = emit_plot(rows, {});
  EXPECT_EQ(count(a.svg, "<polyline"), 2u);
  EXPECT_EQ(a.svg, b.svg);
  EXPECT_TRUE(a.warnings.empty());
  EXPECT_EQ(count(a.svg, "<svg "), 1u);
  EXPECT_NE(a.svg.find("</svg>"), std::string::npos);
}

TEST(Plot, NonpositiveValuesAreClampedWithWarning) {
  std::vector<RunRecord> records{rec("x", 0, 1, 1.0), rec("x", 0, 10, 0.0),
                                 rec("x", 0, 100, 1e-3)};
  const auto p = emit_plot(aggregate(records), {});
  EXPECT_FALSE(p.warnings.empty());
  EXPECT_EQ(count(p.svg, "<polyline"), 1u);
}

TEST(Plot, EmptyInputIsAnError) {
  EXPECT_THROW(emit_plot({}, {}), Error);
  std::vector<RunRecord> records{rec("x", 0, 1, 1.0, "m1"), rec("x", 0, 1, 1.0, "m2")};
  const auto rows = aggregate(records);
  EXPECT_THROW(emit_plot(rows, {}), Error);
  PlotOptions o;
  o.metric = "m2";
  EXPECT_NO_THROW(emit_plot(rows, o));
}
