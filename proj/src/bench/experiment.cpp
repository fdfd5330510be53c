#include "gw/bench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "gw/game_io.hpp"
#include "json.hpp"

namespace gw::bench {

namespace {

using nlohmann::json;

// Walks a JSON document, turning every failure into a config error that names
// the field path.
class Reader {
 public:
  Reader(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {}

  void allow(std::initializer_list<const char*> keys) const {
    require(doc_.is_object(), ErrorCategory::config, where() + "expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : doc_.items()) {
      require(allowed.count(k) == 1, ErrorCategory::config, where(k) + "unknown key");
    }
  }
  bool has(const char* key) const { return doc_.contains(key); }
  Reader child(const char* key) const {
    require(has(key), ErrorCategory::config, where(key) + "missing");
    return Reader(doc_.at(key), join(key));
  }
  Reader element(std::size_t i) const {
    return Reader(doc_.at(i), path_ + "[" + std::to_string(i) + "]");
  }
  bool is_array() const { return doc_.is_array(); }
  std::size_t array_size() const {
    require(doc_.is_array(), ErrorCategory::config, where() + "expected an array");
    return doc_.size();
  }

  template <typename T>
  T get(const char* key) const {
    require(has(key), ErrorCategory::config, where(key) + "missing");
    return as<T>(doc_.at(key), key);
  }
  template <typename T>
  T get_or(const char* key, T fallback) const {
    return has(key) ? as<T>(doc_.at(key), key) : fallback;
  }
  template <typename T>
  T value() const {
    return as<T>(doc_, nullptr);
  }

  // Runs a parser on a string field, relabelling its error with the path.
  template <typename F>
  auto parse(const char* key, F&& parser) const {
    const auto text = get<std::string>(key);
    try {
      return parser(text);
    } catch (const Error& e) {
      fail(ErrorCategory::config, where(key) + e.what());
    }
  }

  std::string where(const std::string& key = {}) const {
    const std::string p = key.empty() ? path_ : join(key);
    return (p.empty() ? std::string("config") : p) + ": ";
  }

 private:
  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  template <typename T>
  T as(const json& v, const char* key) const {
    const std::string label = key ? where(key) : where();
    if constexpr (std::is_same_v<T, bool>) {
      require(v.is_boolean(), ErrorCategory::config, label + "expected a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      require(v.is_string(), ErrorCategory::config, label + "expected a string");
    } else if constexpr (std::is_integral_v<T>) {
      require(v.is_number_integer() && (std::is_signed_v<T> || v.get<long long>() >= 0),
              ErrorCategory::config, label + "expected an integer");
    } else {
      require(v.is_number(), ErrorCategory::config, label + "expected a number");
    }
    return v.get<T>();
  }

  const json& doc_;
  std::string path_;
};

AlgorithmConfig parse_algorithm(const Reader& r) {
  r.allow({"label", "regret", "mode", "plus_clamping", "policy_weighting", "optimism",
           "alternation_period", "alpha", "weights"});
  AlgorithmConfig a;
  a.label = r.get<std::string>("label");
  auto& v = a.variant;
  if (r.has("regret")) v.regret_kind = r.parse("regret", parse_regret_kind);
  if (r.has("mode")) v.mode = r.parse("mode", parse_play_mode);
  v.plus_clamping = r.get_or("plus_clamping", false);
  if (r.has("policy_weighting")) v.policy_weighting = r.parse("policy_weighting", parse_policy_weighting);
  v.optimism = r.get_or("optimism", false);
  v.alternation_period = r.get_or("alternation_period", 1);
  v.alpha = r.get_or("alpha", kDefaultInertia);
  if (r.has("weights")) {
    const Reader w = r.child("weights");
    w.allow({"scheme", "floor_fraction", "objective", "search", "grid_points", "golden_tol",
             "cap_factor"});
    auto& p = a.weights;
    if (w.has("scheme")) p.scheme = w.parse("scheme", parse_weight_scheme);
    if (w.has("floor_fraction")) p.floor_fraction = w.get<double>("floor_fraction");
    if (w.has("objective")) p.objective = w.parse("objective", parse_weight_objective);
    if (w.has("search")) p.search = w.parse("search", parse_weight_search);
    p.grid_points = w.get_or("grid_points", p.grid_points);
    p.golden_tol = w.get_or("golden_tol", p.golden_tol);
    p.cap_factor = w.get_or("cap_factor", p.cap_factor);
  }
  return a;
}

GameSource parse_games(const Reader& r, const std::filesystem::path& base_dir) {
  r.allow({"generator", "file", "catalog", "seeds"});
  GameSource g;
  const int sources = int(r.has("generator")) + int(r.has("file")) + int(r.has("catalog"));
  require(sources == 1, ErrorCategory::config,
          r.where() + "exactly one of generator, file, catalog is required");
  if (r.has("generator")) {
    const Reader gen = r.child("generator");
    gen.allow({"num_players", "actions", "kind"});
    g.type = GameSource::Type::generated;
    g.num_players = gen.get<int>("num_players");
    require(g.num_players >= 1, ErrorCategory::config, gen.where("num_players") + "must be >= 1");
    const Reader actions = gen.child("actions");
    if (!actions.is_array()) {
      g.actions.assign(g.num_players, gen.get<int>("actions"));
    } else {
      for (std::size_t i = 0; i < actions.array_size(); ++i) {
        g.actions.push_back(actions.element(i).value<int>());
      }
    }
    require(static_cast<int>(g.actions.size()) == g.num_players, ErrorCategory::config,
            gen.where("actions") + "needs one entry per player");
    for (int a : g.actions) {
      require(a >= 1, ErrorCategory::config, gen.where("actions") + "counts must be >= 1");
    }
    if (gen.has("kind")) g.kind = gen.parse("kind", parse_game_kind);
  } else if (r.has("file")) {
    g.type = GameSource::Type::file;
    std::filesystem::path p = r.get<std::string>("file");
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    g.path = p.string();
  } else {
    g.type = GameSource::Type::catalog;
    g.catalog_name = r.get<std::string>("catalog");
  }
  const Reader seeds = r.child("seeds");
  for (std::size_t i = 0; i < seeds.array_size(); ++i) {
    g.seeds.push_back(seeds.element(i).value<std::uint64_t>());
  }
  return g;
}

}  // namespace

void ExperimentConfig::validate() const {
  require(!games.seeds.empty(), ErrorCategory::config, "games.seeds: at least one seed is required");
  require(!algorithms.empty(), ErrorCategory::config, "algorithms: at least one is required");
  require(iterations >= 1, ErrorCategory::config, "iterations: must be >= 1");
  require(!metrics.empty(), ErrorCategory::config, "metrics: at least one is required");
  std::set<std::string> labels;
  for (std::size_t i = 0; i < algorithms.size(); ++i) {
    const auto& a = algorithms[i];
    const std::string where = "algorithms[" + std::to_string(i) + "]";
    require(!a.label.empty() && is_csv_safe(a.label), ErrorCategory::config,
            where + ".label: must be nonempty without commas, quotes or line breaks");
    require(labels.insert(a.label).second, ErrorCategory::config,
            where + ".label: duplicate label '" + a.label + "'");
    try {
      a.weights.validate();
    } catch (const Error& e) {
      fail(ErrorCategory::config, where + ".weights: " + e.what());
    }
  }
  try {
    schedule.iterations(iterations);
  } catch (const Error& e) {
    fail(ErrorCategory::config, std::string("eval_points: ") + e.what());
  }
}

Game ExperimentConfig::make_game(std::uint64_t seed) const {
  switch (games.type) {
    case GameSource::Type::generated:
      return generate_random_game(games.num_players, games.actions, games.kind, seed);
    case GameSource::Type::file: return read_game(games.path);
    case GameSource::Type::catalog: return catalog(games.catalog_name);
  }
  fail(ErrorCategory::config, "unknown game source");
}

ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCategory::config, std::string("config: invalid JSON: ") + e.what());
  }
  const Reader r(doc, "");
  r.allow({"format_version", "name", "games", "iterations", "eval_points", "eval_iterations",
           "metrics", "algorithms", "output"});
  const int version = r.get<int>("format_version");
  require(version == kConfigFormatVersion, ErrorCategory::config,
          "format_version: unsupported version " + std::to_string(version));
  ExperimentConfig c;
  c.name = r.get_or<std::string>("name", "");
  c.games = parse_games(r.child("games"), base_dir);
  c.iterations = r.get<long>("iterations");
  c.schedule.points = r.get_or("eval_points", c.schedule.points);
  if (r.has("eval_iterations")) {
    const Reader list = r.child("eval_iterations");
    for (std::size_t i = 0; i < list.array_size(); ++i) {
      c.schedule.explicit_iterations.push_back(list.element(i).value<long>());
    }
  }
  const Reader metrics = r.child("metrics");
  for (std::size_t i = 0; i < metrics.array_size(); ++i) {
    const auto name = metrics.element(i).value<std::string>();
    try {
      c.metrics.push_back(parse_metric(name));
    } catch (const Error& e) {
      fail(ErrorCategory::config, "metrics[" + std::to_string(i) + "]: " + e.what());
    }
  }
  const Reader algorithms = r.child("algorithms");
  for (std::size_t i = 0; i < algorithms.array_size(); ++i) {
    c.algorithms.push_back(parse_algorithm(algorithms.element(i)));
  }
  if (r.has("output")) {
    const Reader out = r.child("output");
    out.allow({"csv", "svg"});
    c.csv_path = out.get_or<std::string>("csv", "");
    c.svg_path = out.get_or<std::string>("svg", "");
    for (auto* p : {&c.csv_path, &c.svg_path}) {
      if (!p->empty() && std::filesystem::path(*p).is_relative() && !base_dir.empty()) {
        *p = (base_dir / *p).string();
      }
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCategory::io, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment_config(text.str(), path.parent_path());
}

int worker_count_from_env() {
  const char* env = std::getenv("GW_WORKERS");
  if (!env) return 1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || n < 1) return 1;
  return static_cast<int>(std::min<long>(n, 256));
}

ExperimentResult run_experiment(const ExperimentConfig& config, int workers,
                                const std::function<void(long run_id)>& on_run_done) {
  config.validate();
  const long num_algorithms = static_cast<long>(config.algorithms.size());
  const long num_runs = static_cast<long>(config.games.seeds.size()) * num_algorithms;
  std::vector<std::vector<RunRecord>> per_run(num_runs);
  std::vector<std::optional<RunFailure>> failures(num_runs);
  std::atomic<long> next{0};
  std::mutex done_mutex;

  auto execute = [&](long run_id) {
    const std::uint64_t seed = config.games.seeds[run_id / num_algorithms];
    const auto& algorithm = config.algorithms[run_id % num_algorithms];
    try {
      const Game game = config.make_game(seed);
      SolverConfig sc;
      sc.variant = algorithm.variant;
      sc.weights = algorithm.weights;
      sc.iterations = config.iterations;
      sc.seed = seed;
      sc.schedule = config.schedule;
      sc.metrics = config.metrics;
      const SolveResult result = solve(game, sc);
      auto& records = per_run[run_id];
      for (const auto& point : result.trace) {
        for (Metric m : config.metrics) {
          RunRecord rec;
          rec.run_id = run_id;
          rec.label = algorithm.label;
          rec.game_seed = seed;
          rec.iteration = point.iteration;
          rec.wall_ns = point.wall_ns;
          rec.metric = std::string(to_string(m));
          rec.value = point.metrics.at(m);
          rec.weight = point.weight;
          require(std::isfinite(rec.value), ErrorCategory::contract,
                  "metric " + rec.metric + " is not finite");
          records.push_back(std::move(rec));
        }
      }
    } catch (const Error& e) {
      per_run[run_id].clear();
      failures[run_id] = RunFailure{run_id, algorithm.label, seed, e.category(), e.what()};
    }
    if (on_run_done) {
      std::lock_guard lock(done_mutex);
      on_run_done(run_id);
    }
  };

  auto worker = [&] {
    for (long id = next++; id < num_runs; id = next++) execute(id);
  };
  const int count = static_cast<int>(std::clamp<long>(workers, 1, std::max(1L, num_runs)));
  std::vector<std::thread> pool;
  for (int i = 1; i < count; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  ExperimentResult out;
  for (long id = 0; id < num_runs; ++id) {
    out.records.insert(out.records.end(), std::make_move_iterator(per_run[id].begin()),
                       std::make_move_iterator(per_run[id].end()));
    if (failures[id]) out.failures.push_back(std::move(*failures[id]));
  }
  return out;
}

}  // namespace gw::bench
