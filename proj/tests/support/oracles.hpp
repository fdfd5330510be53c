#pragma once

// Brute-force reference implementations used as test oracles. They share no
// code with the library beyond Game::payoff and the Kuhn infoset key format.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gw/game.hpp"
#include "gw/rng.hpp"

namespace oracle {

// Every joint action of the shape in row-major order (last player fastest).
inline std::vector<std::vector<int>> all_joints(const std::vector<int>& shape) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(shape.size(), 0);
  while (true) {
    out.push_back(a);
    int p = static_cast<int>(shape.size()) - 1;
    while (p >= 0 && ++a[p] == shape[p]) a[p--] = 0;
    if (p < 0) break;
  }
  return out;
}

inline std::vector<int> shape_of(const gw::Game& g) {
  return {g.actions().begin(), g.actions().end()};
}

// Distribution as a list of (joint, probability), normalized.
using Dist = std::vector<std::pair<std::vector<int>, double>>;

inline double product_probability(const gw::MixedProfile& pi, const std::vector<int>& a) {
  double p = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) p *= pi[i][a[i]];
  return p;
}

// max_i max_b [u_i(b, pi_-i) - u_i(pi)] by enumeration.
inline double nash_gap(const gw::Game& g, const gw::MixedProfile& pi) {
  const auto joints = all_joints(shape_of(g));
  double best = -INFINITY;
  for (int i = 0; i < g.num_players(); ++i) {
    double value = 0.0;
    for (const auto& a : joints) value += product_probability(pi, a) * g.payoff(i, a);
    for (int b = 0; b < g.num_actions(i); ++b) {
      double dev = 0.0;
      for (const auto& a : joints) {
        auto d = a;
        d[i] = b;
        dev += product_probability(pi, a) * g.payoff(i, d);
      }
      best = std::max(best, dev - value);
    }
  }
  return best;
}

// Best pure response by scanning every action and every opponent cell.
inline int best_action(const gw::Game& g, int player, const gw::MixedProfile& pi) {
  const auto joints = all_joints(shape_of(g));
  int best = 0;
  double best_value = -INFINITY;
  for (int b = 0; b < g.num_actions(player); ++b) {
    double v = 0.0;
    for (const auto& a : joints) {
      auto d = a;
      d[player] = b;
      v += product_probability(pi, a) * g.payoff(player, d);
    }
    if (v > best_value + 1e-15) {
      best_value = v;
      best = b;
    }
  }
  return best;
}

// max_i max_b sum_a p(a) (u_i(b, a_-i) - u_i(a)), unclamped.
inline double cce_gap_raw(const gw::Game& g, const Dist& dist) {
  double best = -INFINITY;
  for (int i = 0; i < g.num_players(); ++i) {
    for (int b = 0; b < g.num_actions(i); ++b) {
      double gain = 0.0;
      for (const auto& [a, p] : dist) {
        auto d = a;
        d[i] = b;
        gain += p * (g.payoff(i, d) - g.payoff(i, a));
      }
      best = std::max(best, gain);
    }
  }
  return best;
}

// max_i max over all swap functions phi: A_i -> A_i of the expected gain.
inline double ce_gap(const gw::Game& g, const Dist& dist) {
  double best = 0.0;
  for (int i = 0; i < g.num_players(); ++i) {
    const int n = g.num_actions(i);
    std::vector<int> phi(n, 0);
    while (true) {
      double gain = 0.0;
      for (const auto& [a, p] : dist) {
        auto d = a;
        d[i] = phi[a[i]];
        gain += p * (g.payoff(i, d) - g.payoff(i, a));
      }
      best = std::max(best, gain);
      int k = n - 1;
      while (k >= 0 && ++phi[k] == n) phi[k--] = 0;
      if (k < 0) break;
    }
  }
  return best;
}

inline Dist random_dist(const gw::Game& g, gw::Rng& rng, int support) {
  const auto joints = all_joints(shape_of(g));
  Dist out;
  double total = 0.0;
  for (int k = 0; k < support; ++k) {
    const double w = rng.uniform() + 1e-3;
    out.emplace_back(joints[rng.below(joints.size())], w);
    total += w;
  }
  for (auto& e : out) e.second /= total;
  return out;
}

inline gw::MixedProfile random_profile(const gw::Game& g, gw::Rng& rng) {
  gw::MixedProfile pi;
  for (int i = 0; i < g.num_players(); ++i) {
    std::vector<double> v(g.num_actions(i));
    double total = 0.0;
    for (double& x : v) total += (x = rng.uniform() + 1e-3);
    for (double& x : v) x /= total;
    pi.policies.push_back(v);
  }
  return pi;
}

// ---------------------------------------------------------------------------
// Kuhn poker from the rules: cards 0 < 1 < 2, ante 1, bet 1. A strategy maps
// an infoset key (card letter + history over {p, b}) to the probability of b.

using KuhnStrategy = std::function<double(const std::string& key)>;

inline char card_letter(int c) { return "JQK"[c]; }

inline double kuhn_terminal(const std::string& h, int c0, int c1) {
  const double s = c0 > c1 ? 1.0 : -1.0;
  if (h == "pp") return s;
  if (h == "bb" || h == "pbb") return 2.0 * s;
  if (h == "bp") return 1.0;
  if (h == "pbp") return -1.0;
  return NAN;
}

// Expected payoff of player 0 at history h for a fixed deal.
inline double kuhn_value(const KuhnStrategy& sigma, const std::string& h, int c0, int c1) {
  const double t = kuhn_terminal(h, c0, c1);
  if (!std::isnan(t)) return t;
  const int player = static_cast<int>(h.size() % 2);
  const std::string key = std::string(1, card_letter(player == 0 ? c0 : c1)) + h;
  const double pb = sigma(key);
  return (1.0 - pb) * kuhn_value(sigma, h + "p", c0, c1) + pb * kuhn_value(sigma, h + "b", c0, c1);
}

inline double kuhn_game_value(const KuhnStrategy& sigma) {
  double v = 0.0;
  for (int c0 = 0; c0 < 3; ++c0)
    for (int c1 = 0; c1 < 3; ++c1)
      if (c0 != c1) v += kuhn_value(sigma, "", c0, c1) / 6.0;
  return v;
}

inline const std::vector<std::string>& kuhn_keys(int player) {
  static const std::vector<std::string> p0{"J", "Q", "K", "Jpb", "Qpb", "Kpb"};
  static const std::vector<std::string> p1{"Jp", "Qp", "Kp", "Jb", "Qb", "Kb"};
  return player == 0 ? p0 : p1;
}

// Best-response value of `player` by enumerating all 64 pure strategies.
inline double kuhn_best_response(const KuhnStrategy& sigma, int player) {
  const auto& keys = kuhn_keys(player);
  double best = -INFINITY;
  for (int mask = 0; mask < 64; ++mask) {
    std::map<std::string, double> pure;
    for (int k = 0; k < 6; ++k) pure[keys[k]] = (mask >> k) & 1;
    KuhnStrategy mixed = [&](const std::string& key) {
      const auto it = pure.find(key);
      return it != pure.end() ? it->second : sigma(key);
    };
    const double v = kuhn_game_value(mixed);
    best = std::max(best, player == 0 ? v : -v);
  }
  return best;
}

// Counterfactual regret at every infoset for one strategy, from the rules:
// r_I(a) = sum over histories in I of (chance * opponent reach) * (v(ha) - v(h)),
// values from the acting player's perspective.
inline std::map<std::string, std::array<double, 2>> kuhn_counterfactual_regrets(
    const KuhnStrategy& sigma) {
  std::map<std::string, std::array<double, 2>> out;
  for (int c0 = 0; c0 < 3; ++c0) {
    for (int c1 = 0; c1 < 3; ++c1) {
      if (c0 == c1) continue;
      // The four decision histories of Kuhn poker.
      for (const std::string h : {"", "p", "b", "pb"}) {
        const int player = static_cast<int>(h.size() % 2);
        // Reach of h by the opponent of `player`.
        double opp = 1.0;
        for (std::size_t k = 0; k < h.size(); ++k) {
          const int actor = static_cast<int>(k % 2);
          if (actor == player) continue;
          const std::string key =
              std::string(1, card_letter(actor == 0 ? c0 : c1)) + h.substr(0, k);
          const double pb = sigma(key);
          opp *= h[k] == 'b' ? pb : 1.0 - pb;
        }
        const double sign = player == 0 ? 1.0 : -1.0;
        const std::string key = std::string(1, card_letter(player == 0 ? c0 : c1)) + h;
        const double vp = sign * kuhn_value(sigma, h + "p", c0, c1);
        const double vb = sign * kuhn_value(sigma, h + "b", c0, c1);
        const double pb = sigma(key);
        const double v = (1.0 - pb) * vp + pb * vb;
        auto& r = out[key];
        r[0] += opp / 6.0 * (vp - v);
        r[1] += opp / 6.0 * (vb - v);
      }
    }
  }
  return out;
}

// One member of the Kuhn equilibrium family, alpha in [0, 1/3]. Probabilities
// of bet/call per infoset.
inline double kuhn_equilibrium(double alpha, const std::string& key) {
  static const std::map<std::string, int> index{
      {"J", 0}, {"Q", 1}, {"K", 2}, {"Jpb", 3}, {"Qpb", 4}, {"Kpb", 5},
      {"Jp", 6}, {"Qp", 7}, {"Kp", 8}, {"Jb", 9}, {"Qb", 10}, {"Kb", 11}};
  switch (index.at(key)) {
    case 0: return alpha;              // bluff with J
    case 1: return 0.0;                // check Q
    case 2: return 3.0 * alpha;        // value bet K
    case 3: return 0.0;                // fold J to a bet
    case 4: return alpha + 1.0 / 3.0;  // call with Q
    case 5: return 1.0;                // call with K
    case 6: return 1.0 / 3.0;          // bluff J when checked to
    case 7: return 0.0;                // check back Q
    case 8: return 1.0;                // bet K
    case 9: return 0.0;                // fold J
    case 10: return 1.0 / 3.0;         // call Q a third of the time
    case 11: return 1.0;               // call K
  }
  return NAN;
}

}  // namespace oracle
