#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "gw/bench/records.hpp"
#include "gw/error.hpp"
#include "gw/game.hpp"
#include "gw/solver.hpp"

namespace gw::bench {

inline constexpr int kConfigFormatVersion = 1;

// Where the games come from. Generated games use one game per seed; file and
// catalog games are fixed, and the seeds only drive the solver's RNG.
struct GameSource {
  enum class Type { generated, file, catalog };
  Type type = Type::generated;
  int num_players = 2;
  std::vector<int> actions;  // generated: one count per player
  GameKind kind = GameKind::general_sum;
  std::string path;          // file
  std::string catalog_name;  // catalog
  std::vector<std::uint64_t> seeds;
};

struct AlgorithmConfig {
  std::string label;
  VariantConfig variant;
  WeightPolicy weights;
};

struct ExperimentConfig {
  std::string name;
  GameSource games;
  std::vector<AlgorithmConfig> algorithms;
  long iterations = 1000;
  EvalSchedule schedule;
  std::vector<Metric> metrics;
  std::string csv_path;  // empty: not written by the CLI
  std::string svg_path;

  // Throws ErrorCategory::config with the offending field path.
  void validate() const;
  Game make_game(std::uint64_t seed) const;
};

// JSON document:
//   {
//     "format_version": 1,
//     "name": "...",
//     "games": {"generator": {"num_players": 7, "actions": 10, "kind": "general_sum"},
//               "seeds": [0, 1, 2]},
//     "iterations": 10000,
//     "eval_points": 20,
//     "metrics": ["ce_gap"],
//     "algorithms": [{"label": "greedy", "regret": "internal", "weights": {"scheme": "greedy"}}],
//     "output": {"csv": "out.csv", "svg": "out.svg"}
//   }
// "games" takes exactly one of "generator", "file" or "catalog". Unknown keys
// are errors. Relative paths in "file" resolve against base_dir.
ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct RunFailure {
  long run_id = 0;
  std::string label;
  std::uint64_t game_seed = 0;
  ErrorCategory category = ErrorCategory::invalid_argument;
  std::string message;
};

struct ExperimentResult {
  std::vector<RunRecord> records;  // ordered by run_id, then iteration, then metric
  std::vector<RunFailure> failures;
};

// GW_WORKERS if set to a positive integer, else 1.
int worker_count_from_env();

// Runs every (seed, algorithm) pair; run_id = seed_index * #algorithms +
// algorithm_index. The solver seed equals the game seed for every algorithm.
// A failing run is reported in failures while its siblings continue. Metric
// values do not depend on the worker count. on_run_done, if set, is called
// under a lock after each run.
ExperimentResult run_experiment(const ExperimentConfig& config, int workers = 1,
                                const std::function<void(long run_id)>& on_run_done = {});

}  // namespace gw::bench
