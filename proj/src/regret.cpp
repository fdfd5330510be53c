#include "gw/regret.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "gw/error.hpp"

namespace gw {

std::string_view to_string(RegretKind kind) noexcept {
  return kind == RegretKind::external ? "external" : "internal";
}

std::string_view to_string(PlayMode mode) noexcept {
  return mode == PlayMode::pure_sampled ? "pure_sampled" : "mixed_two_player";
}

std::string_view to_string(PolicyWeighting weighting) noexcept {
  switch (weighting) {
    case PolicyWeighting::automatic: return "automatic";
    case PolicyWeighting::match_averaging: return "match_averaging";
    case PolicyWeighting::uniform: return "uniform";
    case PolicyWeighting::linear: return "linear";
  }
  return "match_averaging";
}

RegretKind parse_regret_kind(std::string_view text) {
  if (text == "external") return RegretKind::external;
  if (text == "internal") return RegretKind::internal;
  fail(ErrorCategory::invalid_argument, "unknown regret kind '" + std::string(text) + "'");
}

PlayMode parse_play_mode(std::string_view text) {
  if (text == "pure_sampled" || text == "pure") return PlayMode::pure_sampled;
  if (text == "mixed_two_player" || text == "mixed") return PlayMode::mixed_two_player;
  fail(ErrorCategory::invalid_argument, "unknown play mode '" + std::string(text) + "'");
}

PolicyWeighting parse_policy_weighting(std::string_view text) {
  if (text == "automatic") return PolicyWeighting::automatic;
  if (text == "match_averaging") return PolicyWeighting::match_averaging;
  if (text == "uniform") return PolicyWeighting::uniform;
  if (text == "linear") return PolicyWeighting::linear;
  fail(ErrorCategory::invalid_argument, "unknown policy weighting '" + std::string(text) + "'");
}

void VariantConfig::validate(const Game& game) const {
  require(alpha > 0.0 && std::isfinite(alpha), ErrorCategory::invalid_argument,
          "inertia alpha must be positive");
  require(alternation_period >= 1, ErrorCategory::invalid_argument,
          "alternation_period must be >= 1");
  if (mode == PlayMode::mixed_two_player) {
    require(game.num_players() == 2, ErrorCategory::unsupported,
            "mixed_two_player mode needs exactly two players");
  }
}

RegretLayout::RegretLayout(const Game& game, RegretKind kind)
    : RegretLayout(std::vector<int>(game.actions().begin(), game.actions().end()), kind) {}

RegretLayout::RegretLayout(std::vector<int> actions, RegretKind kind)
    : kind_(kind), actions_(std::move(actions)) {
  offsets_.reserve(actions_.size());
  for (std::size_t p = 0; p < actions_.size(); ++p) {
    offsets_.push_back(size_);
    size_ += block_size(static_cast<int>(p));
  }
}

std::size_t RegretLayout::block_size(int player) const {
  const auto a = static_cast<std::size_t>(actions_.at(player));
  return kind_ == RegretKind::external ? a : a * a;
}

std::vector<std::vector<double>> external_instant_regret(const Game& game,
                                                         std::span<const int> joint) {
  const std::uint64_t cell = game.cell_index(joint);
  std::vector<std::vector<double>> out(game.num_players());
  for (int p = 0; p < game.num_players(); ++p) {
    const std::uint64_t base = cell - game.stride(p) * joint[p];
    const double played = game.payoff_at(cell, p);
    out[p].resize(game.num_actions(p));
    for (int a = 0; a < game.num_actions(p); ++a) {
      out[p][a] = a == joint[p] ? 0.0 : game.payoff_at(base + game.stride(p) * a, p) - played;
    }
  }
  return out;
}

std::vector<RegretMatrix> internal_instant_regret(const Game& game, std::span<const int> joint) {
  const auto external = external_instant_regret(game, joint);
  std::vector<RegretMatrix> out(game.num_players());
  for (int p = 0; p < game.num_players(); ++p) {
    const int n = game.num_actions(p);
    out[p].size = n;
    out[p].entries.assign(static_cast<std::size_t>(n) * n, 0.0);
    std::copy(external[p].begin(), external[p].end(),
              out[p].entries.begin() + static_cast<std::ptrdiff_t>(joint[p]) * n);
  }
  return out;
}

void instant_regret(const Game& game, const RegretLayout& layout, std::span<const int> joint,
                    std::span<double> out) {
  require(out.size() == layout.size(), ErrorCategory::invalid_argument,
          "instant_regret: output size mismatch");
  const std::uint64_t cell = game.cell_index(joint);
  std::fill(out.begin(), out.end(), 0.0);
  for (int p = 0; p < game.num_players(); ++p) {
    const std::uint64_t stride = game.stride(p);
    const std::uint64_t base = cell - stride * joint[p];
    const double played = game.payoff_at(cell, p);
    const std::size_t row = layout.kind() == RegretKind::external
                                ? layout.offset(p)
                                : layout.internal_index(p, joint[p], 0);
    for (int a = 0; a < game.num_actions(p); ++a) {
      if (a == joint[p]) continue;
      out[row + a] = game.payoff_at(base + stride * a, p) - played;
    }
  }
}

void mixed_instant_regret_2p(const Game& game, const RegretLayout& layout,
                             const MixedProfile& profile, std::span<double> out) {
  require(game.num_players() == 2, ErrorCategory::unsupported,
          "mixed instant regret is only supported for two players");
  require(out.size() == layout.size(), ErrorCategory::invalid_argument,
          "mixed_instant_regret_2p: output size mismatch");
  validate_profile(game, profile);
  const int rows = game.num_actions(0);
  const int cols = game.num_actions(1);
  // value[p][a] = u_p(a, pi_{-p})
  std::vector<double> value0(rows, 0.0);
  std::vector<double> value1(cols, 0.0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const std::uint64_t cell = static_cast<std::uint64_t>(r) * cols + c;
      value0[r] += profile[1][c] * game.payoff_at(cell, 0);
      value1[c] += profile[0][r] * game.payoff_at(cell, 1);
    }
  }
  const std::vector<double>* values[2] = {&value0, &value1};
  std::fill(out.begin(), out.end(), 0.0);
  for (int p = 0; p < 2; ++p) {
    const auto& v = *values[p];
    const auto& pi = profile[p];
    const int n = game.num_actions(p);
    if (layout.kind() == RegretKind::external) {
      const double mean = std::inner_product(pi.begin(), pi.end(), v.begin(), 0.0);
      for (int a = 0; a < n; ++a) out[layout.offset(p) + a] = v[a] - mean;
    } else {
      for (int a = 0; a < n; ++a) {
        if (pi[a] == 0.0) continue;
        for (int b = 0; b < n; ++b) {
          if (b != a) out[layout.internal_index(p, a, b)] = pi[a] * (v[b] - v[a]);
        }
      }
    }
  }
}

std::vector<double> rm_external_policy(std::span<const double> guiding) {
  std::vector<double> policy(guiding.size(), 0.0);
  double total = 0.0;
  for (std::size_t a = 0; a < guiding.size(); ++a) {
    if (guiding[a] > 0.0) {
      policy[a] = guiding[a];
      total += guiding[a];
    }
  }
  if (total > 0.0) {
    for (double& x : policy) x /= total;
  } else if (!policy.empty()) {
    std::fill(policy.begin(), policy.end(), 1.0 / static_cast<double>(policy.size()));
  }
  return policy;
}

std::vector<double> rm_internal_policy(std::span<const double> guiding_row, double alpha,
                                       int last_action) {
  require(alpha > 0.0, ErrorCategory::invalid_argument, "inertia alpha must be positive");
  require(last_action >= 0 && static_cast<std::size_t>(last_action) < guiding_row.size(),
          ErrorCategory::out_of_range, "last action out of range");
  std::vector<double> policy(guiding_row.size(), 0.0);
  double total = 0.0;
  for (std::size_t a = 0; a < guiding_row.size(); ++a) {
    if (static_cast<int>(a) != last_action && guiding_row[a] > 0.0) total += guiding_row[a];
  }
  const double denom = alpha + total;
  for (std::size_t a = 0; a < guiding_row.size(); ++a) {
    if (static_cast<int>(a) != last_action && guiding_row[a] > 0.0) {
      policy[a] = guiding_row[a] / denom;
    }
  }
  policy[last_action] = alpha / denom;
  return policy;
}

std::vector<double> rm_internal_stationary_policy(std::span<const double> guiding_block,
                                                  int num_actions) {
  const int n = num_actions;
  require(guiding_block.size() == static_cast<std::size_t>(n) * n,
          ErrorCategory::invalid_argument, "internal block has the wrong size");
  Eigen::MatrixXd positive = Eigen::MatrixXd::Zero(n, n);
  double max_row = 0.0;
  for (int a = 0; a < n; ++a) {
    double row = 0.0;
    for (int b = 0; b < n; ++b) {
      const double x = guiding_block[static_cast<std::size_t>(a) * n + b];
      if (a != b && x > 0.0) {
        positive(a, b) = x;
        row += x;
      }
    }
    max_row = std::max(max_row, row);
  }
  if (max_row <= 0.0) return std::vector<double>(n, 1.0 / n);

  Eigen::MatrixXd transition = positive / max_row;
  for (int a = 0; a < n; ++a) transition(a, a) = 1.0 - transition.row(a).sum();

  // q^T (P - I) = 0 with sum(q) = 1, solved in the least-squares sense.
  Eigen::MatrixXd system(n + 1, n);
  system.topRows(n) = (transition - Eigen::MatrixXd::Identity(n, n)).transpose();
  system.row(n).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs(n) = 1.0;
  Eigen::VectorXd q = system.colPivHouseholderQr().solve(rhs);

  if (!q.allFinite() || q.minCoeff() < -1e-9) {
    // Reducible chains admit many stationary laws; the lazy walk from uniform
    // converges to one of them.
    Eigen::MatrixXd lazy = 0.5 * (transition + Eigen::MatrixXd::Identity(n, n));
    q = Eigen::VectorXd::Constant(n, 1.0 / n);
    for (int it = 0; it < 10000; ++it) {
      Eigen::VectorXd next = lazy.transpose() * q;
      const double change = (next - q).lpNorm<1>();
      q = next;
      if (change < 1e-15) break;
    }
  }
  std::vector<double> policy(n);
  double total = 0.0;
  for (int a = 0; a < n; ++a) {
    policy[a] = std::max(0.0, q(a));
    total += policy[a];
  }
  for (double& x : policy) x /= total;
  return policy;
}

double potential(std::span<const double> regrets, double w_sum) {
  require(w_sum > 0.0, ErrorCategory::invalid_argument, "potential: w_sum must be positive");
  double sum = 0.0;
  for (double r : regrets) {
    if (r > 0.0) {
      const double x = r / w_sum;
      sum += x * x;
    }
  }
  return sum;
}

RegretState make_regret_state(const Game& game, RegretKind kind) {
  RegretState state;
  state.layout = RegretLayout(game, kind);
  state.regrets.assign(state.layout.size(), 0.0);
  state.guiding.assign(state.layout.size(), 0.0);
  state.boost.assign(state.layout.size(), 0.0);
  return state;
}

bool guiding_turn(const VariantConfig& config, int player, long iteration) noexcept {
  if (config.alternation_period <= 1) return true;
  const long n = config.alternation_period;
  return iteration % n == player % n;
}

void apply_guiding_transforms(RegretState& state, const VariantConfig& config,
                              std::span<const double> instant, double w, long iteration) {
  require(instant.size() == state.guiding.size(), ErrorCategory::invalid_argument,
          "guiding update: size mismatch");
  double scale = 1.0;   // multiplies the stored guiding regrets
  double step = 1.0;    // multiplies the instantaneous regret
  switch (config.policy_weighting) {
    case PolicyWeighting::automatic:
    case PolicyWeighting::match_averaging:
      if (w > 1.0) {
        scale = 1.0 / w;
      } else {
        step = w;
      }
      break;
    case PolicyWeighting::uniform: break;
    case PolicyWeighting::linear: step = static_cast<double>(iteration); break;
  }
  const auto& layout = state.layout;
  for (int p = 0; p < layout.num_players(); ++p) {
    const bool turn = guiding_turn(config, p, iteration);
    const std::size_t begin = layout.offset(p);
    const std::size_t end = begin + layout.block_size(p);
    for (std::size_t j = begin; j < end; ++j) {
      const double increment = turn ? step * instant[j] : 0.0;
      double g = state.guiding[j];
      if (scale != 1.0) g *= scale;
      g += increment;
      if (config.plus_clamping && g < 0.0) g = 0.0;
      state.guiding[j] = g;
      state.boost[j] = config.optimism ? increment : 0.0;
    }
  }
}

std::vector<double> selection_regrets(const RegretState& state, const VariantConfig& config) {
  std::vector<double> out = state.guiding;
  if (config.optimism) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += state.boost[j];
  }
  return out;
}

}  // namespace gw
