// Command-line front end: game generation, single solves, experiments,
// aggregation, plotting, decomposition, audits, double oracle and CFR.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gw/bench/experiment.hpp"
#include "gw/bench/plot.hpp"
#include "gw/bench/records.hpp"
#include "gw/bench/stats.hpp"
#include "gw/cfr.hpp"
#include "gw/double_oracle.hpp"
#include "gw/efg.hpp"
#include "gw/error.hpp"
#include "gw/game.hpp"
#include "gw/game_io.hpp"
#include "gw/solver.hpp"

namespace {

using namespace gw;

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCategory::io, "cannot write " + path);
  out << text;
  require(static_cast<bool>(out), ErrorCategory::io, "failed writing " + path);
}

// --game FILE | --catalog NAME | --players/--actions/--kind/--seed.
struct GameOptions {
  std::string file;
  std::string catalog_name;
  int players = 2;
  std::vector<int> actions{10};
  std::string kind = "general_sum";
  std::uint64_t seed = 0;
  std::string backend = "auto";

  void add(CLI::App* app, bool allow_backend = false) {
    auto* file_opt = app->add_option("--game", file, "game file (JSON)");
    app->add_option("--catalog", catalog_name, "built-in game name")->excludes(file_opt);
    app->add_option("--players", players, "generated game: number of players")->check(CLI::PositiveNumber);
    app->add_option("--actions", actions,
                    "generated game: one action count for everyone, or one per player")
        ->expected(1, -1);
    app->add_option("--kind", kind, "generated game: general_sum | zero_sum | cooperative");
    app->add_option("--seed", seed, "generator seed (also the solver seed)");
    if (allow_backend) app->add_option("--backend", backend, "auto | dense | procedural");
  }

  Game make() const {
    if (!file.empty()) return read_game(file);
    if (!catalog_name.empty()) return catalog(catalog_name);
    std::vector<int> shape = actions;
    if (shape.size() == 1) shape.assign(players, actions[0]);
    require(static_cast<int>(shape.size()) == players, ErrorCategory::invalid_argument,
            "--actions needs one value or one per player");
    GenerateOptions options;
    if (backend == "dense") {
      options.backend = GenerateOptions::BackendChoice::dense;
    } else if (backend == "procedural") {
      options.backend = GenerateOptions::BackendChoice::procedural;
    } else {
      require(backend == "auto", ErrorCategory::invalid_argument, "unknown backend " + backend);
    }
    return generate_random_game(players, shape, parse_game_kind(kind), seed, options);
  }
};

// Variant, weight policy and run length.
struct AlgorithmOptions {
  std::string regret = "external";
  std::string mode = "pure";
  std::string scheme = "greedy";
  std::optional<double> floor;
  std::string objective = "potential";
  std::string search = "exact";
  int grid_points = 10;
  bool plus = false;
  std::string policy_weighting = "automatic";
  bool optimism = false;
  int alternation = 1;
  long iterations = 1000;
  int eval_points = 20;
  std::vector<std::string> metrics;

  void add(CLI::App* app) {
    app->add_option("--regret", regret, "external | internal");
    app->add_option("--mode", mode, "pure | mixed (two players)");
    app->add_option("--scheme", scheme, "averaging weights: uniform | linear | greedy");
    app->add_option("--floor", floor, "greedy floor as a fraction of the mean weight");
    app->add_option("--objective", objective, "potential | sum_positive_regrets");
    app->add_option("--search", search, "exact | grid | golden");
    app->add_option("--grid-points", grid_points, "grid search candidates");
    app->add_flag("--plus", plus, "clamp guiding regrets at zero (RM+)");
    app->add_option("--policy-weighting", policy_weighting,
                    "guiding regret weights: automatic | match_averaging | uniform | linear");
    app->add_flag("--optimism", optimism, "count the last guiding increment twice");
    app->add_option("--alternation", alternation, "alternation period (1 = simultaneous)");
    app->add_option("-T,--iterations", iterations, "iterations including the initial one")
        ->check(CLI::PositiveNumber);
    app->add_option("--eval-points", eval_points, "log-spaced evaluation points");
    app->add_option("--metrics", metrics, "metrics to report")->expected(1, -1);
  }

  SolverConfig make(std::uint64_t seed) const {
    SolverConfig c;
    c.variant.regret_kind = parse_regret_kind(regret);
    c.variant.mode = parse_play_mode(mode);
    c.variant.plus_clamping = plus;
    c.variant.policy_weighting = parse_policy_weighting(policy_weighting);
    c.variant.optimism = optimism;
    c.variant.alternation_period = alternation;
    c.weights.scheme = parse_weight_scheme(scheme);
    c.weights.floor_fraction = floor;
    c.weights.objective = parse_weight_objective(objective);
    c.weights.search = parse_weight_search(search);
    c.weights.grid_points = grid_points;
    c.iterations = iterations;
    c.seed = seed;
    c.schedule.points = eval_points;
    for (const auto& m : metrics) c.metrics.push_back(parse_metric(m));
    return c;
  }
};

std::vector<Metric> default_metrics(const Game& game, const SolverConfig& config) {
  if (config.variant.regret_kind == RegretKind::internal) {
    return {Metric::ce_gap, Metric::cce_gap, Metric::welfare};
  }
  if (game.num_players() == 2 && is_zero_sum(game)) return {Metric::nash_gap, Metric::cce_gap};
  return {Metric::cce_gap, Metric::welfare};
}

int cmd_generate(const GameOptions& g, const std::string& out) {
  write_text(out, game_to_json(g.make()) + "\n");
  return 0;
}

int cmd_solve(const GameOptions& g, const AlgorithmOptions& a, bool trace) {
  const Game game = g.make();
  SolverConfig config = a.make(g.seed);
  if (config.metrics.empty()) config.metrics = default_metrics(game, config);
  if (!trace) config.schedule.explicit_iterations = {config.iterations};
  const SolveResult result = solve(game, config);
  if (trace) {
    std::cout << "iteration,wall_ns,weight";
    for (Metric m : config.metrics) std::cout << ',' << to_string(m);
    std::cout << '\n';
    for (const auto& p : result.trace) {
      std::cout << p.iteration << ',' << p.wall_ns << ',' << real(p.weight);
      for (Metric m : config.metrics) std::cout << ',' << real(p.metrics.at(m));
      std::cout << '\n';
    }
  } else {
    const auto& last = result.trace.back();
    std::cout << "iterations " << last.iteration << '\n';
    for (Metric m : config.metrics) std::cout << to_string(m) << ' ' << real(last.metrics.at(m)) << '\n';
    std::cout << "wall_ms " << real(static_cast<double>(last.wall_ns) * 1e-6) << '\n';
  }
  std::cout << "audit_violations " << result.audit_violations << '\n';
  return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out, std::optional<int> workers) {
  const auto config = bench::load_experiment_config(config_path);
  const int count = workers ? *workers : bench::worker_count_from_env();
  const auto result = bench::run_experiment(config, count);
  const std::string path = out.empty() ? config.csv_path : out;
  write_text(path, bench::to_csv(result.records));
  if (!config.svg_path.empty() && !result.records.empty()) {
    const auto rows = bench::aggregate(result.records);
    bench::PlotOptions options;
    options.metric = std::string(to_string(config.metrics.front()));
    options.title = config.name;
    const auto plot = bench::emit_plot(rows, options);
    for (const auto& w : plot.warnings) std::cerr << "warning: " << w << '\n';
    write_text(config.svg_path, plot.svg);
  }
  for (const auto& f : result.failures) {
    std::cerr << "run " << f.run_id << " (" << f.label << ", seed " << f.game_seed
              << ") failed: " << category_name(f.category) << ": " << f.message << '\n';
  }
  if (!result.failures.empty()) return exit_code(result.failures.front().category);
  return 0;
}

int cmd_aggregate(const std::string& in, const std::string& out,
                  const std::vector<std::string>& ratio, double ratio_value) {
  const auto records = bench::read_csv_file(in);
  if (!ratio.empty()) {
    require(ratio.size() == 3, ErrorCategory::invalid_argument,
            "--ratio takes LABEL_A LABEL_B METRIC");
    const auto r = bench::iterations_until_ratio(records, ratio[0], ratio[1], ratio[2], ratio_value);
    std::ostringstream text;
    text << "game_seed,first_iteration\n";
    for (const auto& [seed, it] : r.per_seed) {
      text << seed << ',' << (it ? std::to_string(*it) : std::string("none")) << '\n';
    }
    text << "mean," << (r.mean_iteration ? real(*r.mean_iteration) : std::string("none")) << '\n';
    write_text(out, text.str());
    return 0;
  }
  std::ostringstream text;
  bench::write_aggregate_csv(text, bench::aggregate(records));
  write_text(out, text.str());
  return 0;
}

int cmd_plot(const std::string& in, const std::string& out, const bench::PlotOptions& options) {
  const auto rows = bench::aggregate(bench::read_csv_file(in));
  const auto plot = bench::emit_plot(rows, options);
  for (const auto& w : plot.warnings) std::cerr << "warning: " << w << '\n';
  write_text(out, plot.svg);
  return 0;
}

int cmd_decompose(const GameOptions& g, const std::string& zero_out, const std::string& coop_out) {
  const Game game = g.make();
  const auto parts = decompose(game);
  std::cout << "adversarialness " << real(adversarialness(game)) << '\n';
  std::cout << "norm_game " << real(frobenius_norm(game.materialize())) << '\n';
  std::cout << "norm_zero_sum " << real(frobenius_norm(parts.zero_sum_part)) << '\n';
  std::cout << "norm_cooperative " << real(frobenius_norm(parts.cooperative_part)) << '\n';
  if (!zero_out.empty()) write_game(parts.zero_sum_part, zero_out);
  if (!coop_out.empty()) write_game(parts.cooperative_part, coop_out);
  return 0;
}

int cmd_audit(const GameOptions& g, const AlgorithmOptions& a) {
  const Game game = g.make();
  SolverConfig config = a.make(g.seed);
  config.metrics.clear();
  Solver solver(game, config);
  const auto points = config.schedule.iterations(config.iterations);
  std::size_t next = 0;
  long violations = 0;
  double worst = 0.0;
  std::cout << "iteration,potential,bound,slack,max_avg_regret,regret_bound,holds\n";
  for (long t = 1; t <= config.iterations; ++t) {
    solver.step();
    const auto audit = theorem_bound_audit(solver.state(), game.payoff_range());
    if (!audit.holds) ++violations;
    worst = std::max(worst, audit.slack);
    if (next < points.size() && points[next] == t) {
      std::cout << t << ',' << real(audit.potential) << ',' << real(audit.bound) << ','
                << real(audit.slack) << ',' << real(audit.max_avg_regret) << ','
                << real(audit.regret_bound) << ',' << (audit.holds ? "true" : "false") << '\n';
      ++next;
    }
  }
  std::cerr << "violations " << violations << " worst_slack " << real(worst) << '\n';
  if (violations > 0) {
    std::cerr << "error: contract: the bound failed on " << violations << " iteration(s)\n";
    return exit_code(ErrorCategory::contract);
  }
  return 0;
}

int cmd_do_solve(const GameOptions& g, const AlgorithmOptions& a, DoubleOracleConfig config) {
  const Game game = g.make();
  config.inner = a.make(g.seed);
  config.inner.metrics.clear();
  config.seed = g.seed;
  const auto result = double_oracle_solve(game, config);
  std::cout << "round,support,iterations,inner_gap,max_gain,added\n";
  for (const auto& r : result.rounds) {
    std::string support;
    for (std::size_t p = 0; p < r.support_sizes.size(); ++p) {
      support += (p ? "x" : "") + std::to_string(r.support_sizes[p]);
    }
    double gain = 0.0;
    for (double v : r.full_gains) gain = std::max(gain, v);
    std::cout << r.round << ',' << support << ',' << r.iterations << ',' << real(r.inner_gap) << ','
              << real(gain) << ',' << r.added << '\n';
  }
  std::cout << "total_iterations " << result.total_iterations << '\n';
  std::cout << "final_nash_gap " << real(result.final_gap) << '\n';
  std::cout << "converged " << (result.converged ? "true" : "false") << '\n';
  return 0;
}

int cmd_cfr(const std::string& game_name, const CfrConfig& config, long iterations, int eval_points,
            const std::string& out) {
  require(game_name == "kuhn" || game_name == "leduc", ErrorCategory::invalid_argument,
          "unknown extensive game " + game_name);
  const ExtensiveGame game = game_name == "kuhn" ? build_kuhn() : build_leduc();
  EvalSchedule schedule;
  schedule.points = eval_points;
  const auto result = cfr_solve(game, config, iterations, schedule);
  std::vector<bench::RunRecord> records;
  const std::string label = std::string(to_string(config.averaging)) +
                            (config.alternating ? "_alternating" : "_simultaneous");
  for (const auto& p : result.trace) {
    records.push_back({0, label, 0, p.iteration, p.wall_ns, "exploitability", p.exploitability, p.weight});
  }
  if (!out.empty()) {
    write_text(out, bench::to_csv(records));
  } else {
    std::cout << "iteration,exploitability,weight\n";
    for (const auto& p : result.trace) {
      std::cout << p.iteration << ',' << real(p.exploitability) << ',' << real(p.weight) << '\n';
    }
  }
  std::cerr << "final_exploitability " << real(result.trace.back().exploitability)
            << " audit_violations " << result.audit_violations << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regret-matching equilibrium solver and benchmark harness"};
  app.require_subcommand(1);

  GameOptions gen_game;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "write a random or catalog game file");
  gen_game.add(generate, true);
  generate->add_option("-o,--out", gen_out, "output path (default stdout)");

  GameOptions solve_game;
  AlgorithmOptions solve_alg;
  bool solve_trace = false;
  auto* solve_cmd = app.add_subcommand("solve", "run one solve and print final metrics");
  solve_game.add(solve_cmd);
  solve_alg.add(solve_cmd);
  solve_cmd->add_flag("--trace", solve_trace, "print every scheduled evaluation as CSV");

  std::string bench_config, bench_out;
  std::optional<int> bench_workers;
  auto* bench_cmd = app.add_subcommand("bench", "run an experiment config and write records CSV");
  bench_cmd->add_option("config", bench_config, "experiment config (JSON)")->required();
  bench_cmd->add_option("-o,--out", bench_out, "CSV path (default: config output.csv or stdout)");
  bench_cmd->add_option("-j,--workers", bench_workers, "worker threads (default $GW_WORKERS or 1)")
      ->check(CLI::PositiveNumber);

  std::string agg_in, agg_out;
  std::vector<std::string> agg_ratio;
  double agg_ratio_value = 10.0;
  auto* agg_cmd = app.add_subcommand("aggregate", "mean and 95% half-width per label and iteration");
  agg_cmd->add_option("input", agg_in, "records CSV")->required();
  agg_cmd->add_option("-o,--out", agg_out, "output path (default stdout)");
  agg_cmd->add_option("--ratio", agg_ratio,
                      "LABEL_A LABEL_B METRIC: first iteration where A is ratio times below B")
      ->expected(3);
  agg_cmd->add_option("--ratio-value", agg_ratio_value, "ratio for --ratio");

  std::string plot_in, plot_out, plot_x = "iteration";
  bench::PlotOptions plot_options;
  auto* plot_cmd = app.add_subcommand("plot", "log-log SVG of aggregated records");
  plot_cmd->add_option("input", plot_in, "records CSV")->required();
  plot_cmd->add_option("-o,--out", plot_out, "SVG path (default stdout)");
  plot_cmd->add_option("--metric", plot_options.metric, "metric to plot");
  plot_cmd->add_option("--x", plot_x, "iteration | time");
  plot_cmd->add_option("--title", plot_options.title, "plot title");
  plot_cmd->add_option("--epsilon", plot_options.epsilon, "clamp for nonpositive values");

  GameOptions dec_game;
  std::string dec_zero, dec_coop;
  auto* dec_cmd = app.add_subcommand("decompose", "zero-sum / cooperative split and adversarialness");
  dec_game.add(dec_cmd);
  dec_cmd->add_option("--zero-sum-out", dec_zero, "write the zero-sum part");
  dec_cmd->add_option("--cooperative-out", dec_coop, "write the cooperative part");

  GameOptions audit_game;
  AlgorithmOptions audit_alg;
  auto* audit_cmd = app.add_subcommand("audit", "check the regret potential bound along a solve");
  audit_game.add(audit_cmd);
  audit_alg.add(audit_cmd);

  GameOptions do_game;
  AlgorithmOptions do_alg;
  DoubleOracleConfig do_config;
  bool do_no_seed = false, do_fixed = false;
  auto* do_cmd = app.add_subcommand("do-solve", "double oracle with an inner regret solver");
  do_game.add(do_cmd);
  do_alg.add(do_cmd);
  do_cmd->add_option("--rounds", do_config.max_rounds, "maximum outer rounds");
  do_cmd->add_option("--outer-tol", do_config.outer_tol, "minimum best-response gain to add");
  do_cmd->add_flag("--no-seed", do_no_seed, "start each round from scratch");
  do_cmd->add_flag("--fixed-budget", do_fixed, "run all rounds even after convergence");

  std::string cfr_game = "kuhn", cfr_averaging = "uniform", cfr_out;
  CfrConfig cfr_config;
  long cfr_iterations = 1000;
  int cfr_points = 20;
  auto* cfr_cmd = app.add_subcommand("cfr", "counterfactual regret minimization on Kuhn or Leduc");
  cfr_cmd->add_option("--game", cfr_game, "kuhn | leduc");
  cfr_cmd->add_option("--averaging", cfr_averaging, "uniform | linear | greedy");
  cfr_cmd->add_option("--floor", cfr_config.floor_fraction, "greedy floor fraction");
  cfr_cmd->add_flag("--alternating", cfr_config.alternating, "alternate player updates");
  cfr_cmd->add_option("-T,--iterations", cfr_iterations, "iterations")->check(CLI::PositiveNumber);
  cfr_cmd->add_option("--eval-points", cfr_points, "log-spaced evaluation points");
  cfr_cmd->add_option("-o,--out", cfr_out, "records CSV (default: table on stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*generate) return cmd_generate(gen_game, gen_out);
    if (*solve_cmd) return cmd_solve(solve_game, solve_alg, solve_trace);
    if (*bench_cmd) return cmd_bench(bench_config, bench_out, bench_workers);
    if (*agg_cmd) return cmd_aggregate(agg_in, agg_out, agg_ratio, agg_ratio_value);
    if (*plot_cmd) {
      require(plot_x == "iteration" || plot_x == "time", ErrorCategory::invalid_argument,
              "--x must be iteration or time");
      plot_options.x_axis = plot_x == "time" ? bench::PlotAxis::time : bench::PlotAxis::iteration;
      return cmd_plot(plot_in, plot_out, plot_options);
    }
    if (*dec_cmd) return cmd_decompose(dec_game, dec_zero, dec_coop);
    if (*audit_cmd) return cmd_audit(audit_game, audit_alg);
    if (*do_cmd) {
      do_config.seed_previous = !do_no_seed;
      do_config.stop_when_converged = !do_fixed;
      return cmd_do_solve(do_game, do_alg, do_config);
    }
    if (*cfr_cmd) {
      cfr_config.averaging = parse_weight_scheme(cfr_averaging);
      return cmd_cfr(cfr_game, cfr_config, cfr_iterations, cfr_points, cfr_out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << category_name(e.category()) << ": " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
