#include "gw/efg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "gw/error.hpp"

namespace gw {

int ExtensiveGame::num_terminals() const {
  return static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(), [](const EfgNode& n) {
    return n.type == NodeType::terminal;
  }));
}

double ExtensiveGame::payoff_range() const {
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const auto& n : nodes_) {
    if (n.type != NodeType::terminal) continue;
    for (double u : n.payoffs) {
      if (first) {
        lo = hi = u;
        first = false;
      }
      lo = std::min(lo, u);
      hi = std::max(hi, u);
    }
  }
  return hi - lo;
}

int ExtensiveGame::add_node(EfgNode node) {
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

void ExtensiveGame::add_child(int parent, int child, double chance_prob) {
  auto& p = nodes_.at(parent);
  p.children.push_back(child);
  if (p.type == NodeType::chance) p.chance_probs.push_back(chance_prob);
}

int ExtensiveGame::intern_infoset(int player, const std::string& key, int num_actions) {
  const auto [it, inserted] =
      infoset_ids_.try_emplace({player, key}, static_cast<int>(infosets_.size()));
  if (inserted) {
    Infoset info;
    info.player = player;
    info.num_actions = num_actions;
    info.key = key;
    infosets_.push_back(std::move(info));
  } else {
    require(infosets_[it->second].num_actions == num_actions, ErrorCategory::invalid_argument,
            "infoset " + key + " has inconsistent action counts");
  }
  return it->second;
}

void ExtensiveGame::finalize() {
  require(!nodes_.empty(), ErrorCategory::invalid_argument, "empty game tree");
  std::vector<int> parents(nodes_.size(), -1);
  std::vector<int> stack{0};
  nodes_[0].depth = 0;
  std::size_t visited = 0;
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    ++visited;
    for (int c : nodes_[id].children) {
      require(c > id && c < static_cast<int>(nodes_.size()) && parents[c] < 0,
              ErrorCategory::invalid_argument,
              "children must be unique and numbered after their parent");
      parents[c] = id;
      nodes_[c].depth = nodes_[id].depth + 1;
      stack.push_back(c);
    }
  }
  require(visited == nodes_.size(), ErrorCategory::invalid_argument,
          "game tree has unreachable nodes");
  for (auto& info : infosets_) info.nodes.clear();
  std::vector<bool> depth_set(infosets_.size(), false);
  for (int id = 0; id < static_cast<int>(nodes_.size()); ++id) {
    const auto& n = nodes_[id];
    switch (n.type) {
      case NodeType::chance: {
        require(!n.children.empty() && n.children.size() == n.chance_probs.size(),
                ErrorCategory::invalid_argument, "chance node without outcomes");
        double total = 0.0;
        for (double p : n.chance_probs) {
          require(p > 0.0, ErrorCategory::invalid_argument, "chance probability must be > 0");
          total += p;
        }
        require(std::abs(total - 1.0) <= 1e-12, ErrorCategory::invalid_argument,
                "chance probabilities must sum to 1");
        break;
      }
      case NodeType::decision: {
        require(n.infoset >= 0 && n.infoset < static_cast<int>(infosets_.size()),
                ErrorCategory::invalid_argument, "decision node without infoset");
        auto& info = infosets_[n.infoset];
        require(info.player == n.player, ErrorCategory::invalid_argument,
                "infoset mixes players");
        require(static_cast<int>(n.children.size()) == info.num_actions,
                ErrorCategory::invalid_argument, "infoset mixes action counts");
        if (!depth_set[n.infoset]) {
          info.depth = n.depth;
          depth_set[n.infoset] = true;
        }
        require(info.depth == n.depth, ErrorCategory::invalid_argument, "infoset mixes depths");
        info.nodes.push_back(id);
        break;
      }
      case NodeType::terminal:
        require(n.children.empty(), ErrorCategory::invalid_argument, "terminal with children");
        break;
    }
  }
}

namespace {

const char kRankNames[] = {'J', 'Q', 'K'};

EfgNode terminal(double payoff0) {
  EfgNode n;
  n.type = NodeType::terminal;
  n.payoffs = {payoff0, -payoff0};
  return n;
}

}  // namespace

ExtensiveGame build_kuhn() {
  ExtensiveGame g("kuhn");
  EfgNode root;
  root.type = NodeType::chance;
  const int root_id = g.add_node(root);

  for (int c0 = 0; c0 < 3; ++c0) {
    for (int c1 = 0; c1 < 3; ++c1) {
      if (c0 == c1) continue;
      const std::array<int, 2> cards{c0, c1};
      const double showdown = c0 > c1 ? 1.0 : -1.0;

      std::function<int(const std::string&)> build = [&](const std::string& h) -> int {
        double payoff;
        bool done = true;
        if (h == "pp") {
          payoff = showdown;
        } else if (h == "bb" || h == "pbb") {
          payoff = 2.0 * showdown;
        } else if (h == "bp") {
          payoff = 1.0;
        } else if (h == "pbp") {
          payoff = -1.0;
        } else {
          done = false;
          payoff = 0.0;
        }
        if (done) {
          EfgNode t = terminal(payoff);
          t.private_card = cards;
          t.betting = h;
          return g.add_node(t);
        }
        const int player = static_cast<int>(h.size() % 2);
        EfgNode d;
        d.type = NodeType::decision;
        d.player = player;
        d.private_card = cards;
        d.betting = h;
        d.infoset = g.intern_infoset(player, std::string(1, kRankNames[cards[player]]) + h, 2);
        const int id = g.add_node(d);
        for (const char a : {'p', 'b'}) {
          const int child = build(h + a);
          g.add_child(id, child);
        }
        return id;
      };

      const int deal = build("");
      g.add_child(root_id, deal, 1.0 / 6.0);
    }
  }
  g.finalize();
  return g;
}

namespace {

struct LeducState {
  std::array<int, 2> cards{};  // 0..5, rank = card / 2
  int board = -1;
  int round = 0;
  std::array<double, 2> contrib{1.0, 1.0};
  int raises = 0;       // bets and raises this round
  int actions = 0;      // actions this round
  bool facing = false;  // current player faces an unmatched bet
  int player = 0;
  std::string betting;
};

double leduc_showdown(const LeducState& s) {
  const int br = s.board / 2;
  const int r0 = s.cards[0] / 2, r1 = s.cards[1] / 2;
  const bool pair0 = r0 == br, pair1 = r1 == br;
  if (pair0 != pair1) return pair0 ? s.contrib[1] : -s.contrib[0];
  if (r0 == r1) return 0.0;
  return r0 > r1 ? s.contrib[1] : -s.contrib[0];
}

class LeducBuilder {
 public:
  explicit LeducBuilder(ExtensiveGame& g) : g_(g) {}

  int decision(LeducState s) {
    EfgNode d;
    d.type = NodeType::decision;
    d.player = s.player;
    d.private_card = s.cards;
    d.public_card = s.board;
    d.betting = s.betting;
    const int num_actions = s.facing ? (s.raises < 2 ? 3 : 2) : 2;
    std::string key;
    key += kRankNames[s.cards[s.player] / 2];
    key += s.board >= 0 ? kRankNames[s.board / 2] : '-';
    key += ':';
    key += s.betting;
    d.infoset = g_.intern_infoset(s.player, key, num_actions);
    const int id = g_.add_node(d);
    const double bet = s.round == 0 ? 2.0 : 4.0;
    const int me = s.player, other = 1 - s.player;

    for (int a = 0; a < num_actions; ++a) {
      LeducState next = s;
      next.actions = s.actions + 1;
      next.player = other;
      int child;
      if (!s.facing) {
        if (a == 0) {  // check
          next.betting += 'k';
          child = next.actions == 2 ? end_round(next) : decision(next);
        } else {  // bet
          next.betting += 'b';
          next.contrib[me] += bet;
          next.raises = s.raises + 1;
          next.facing = true;
          child = decision(next);
        }
      } else if (a == 0) {  // fold
        next.betting += 'f';
        EfgNode t = terminal(me == 0 ? -s.contrib[0] : s.contrib[1]);
        t.private_card = s.cards;
        t.public_card = s.board;
        t.betting = next.betting;
        child = g_.add_node(t);
      } else if (a == 1) {  // call
        next.betting += 'c';
        next.contrib[me] = s.contrib[other];
        next.facing = false;
        child = end_round(next);
      } else {  // raise
        next.betting += 'r';
        next.contrib[me] = s.contrib[other] + bet;
        next.raises = s.raises + 1;
        next.facing = true;
        child = decision(next);
      }
      g_.add_child(id, child);
    }
    return id;
  }

 private:
  int end_round(LeducState s) {
    if (s.round == 1) {
      EfgNode t = terminal(leduc_showdown(s));
      t.private_card = s.cards;
      t.public_card = s.board;
      t.betting = s.betting;
      return g_.add_node(t);
    }
    EfgNode c;
    c.type = NodeType::chance;
    c.private_card = s.cards;
    c.betting = s.betting;
    const int id = g_.add_node(c);
    for (int b = 0; b < 6; ++b) {
      if (b == s.cards[0] || b == s.cards[1]) continue;
      LeducState next = s;
      next.board = b;
      next.round = 1;
      next.raises = 0;
      next.actions = 0;
      next.facing = false;
      next.player = 0;
      next.betting += '/';
      const int child = decision(next);
      g_.add_child(id, child, 0.25);
    }
    return id;
  }

  ExtensiveGame& g_;
};

}  // namespace

ExtensiveGame build_leduc() {
  ExtensiveGame g("leduc");
  EfgNode root;
  root.type = NodeType::chance;
  const int root_id = g.add_node(root);
  LeducBuilder builder(g);
  for (int c0 = 0; c0 < 6; ++c0) {
    for (int c1 = 0; c1 < 6; ++c1) {
      if (c0 == c1) continue;
      LeducState s;
      s.cards = {c0, c1};
      const int child = builder.decision(s);
      g.add_child(root_id, child, 1.0 / 30.0);
    }
  }
  g.finalize();
  return g;
}

}  // namespace gw
