#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace gw {

enum class NodeType { chance, decision, terminal };

struct EfgNode {
  NodeType type = NodeType::terminal;
  int player = -1;   // decision nodes: 0 or 1
  int infoset = -1;  // decision nodes
  int depth = 0;
  std::vector<int> children;
  std::vector<double> chance_probs;  // chance nodes, parallel to children
  std::array<double, 2> payoffs{};   // terminal nodes
  // Descriptive state for audits and debugging.
  std::array<int, 2> private_card{-1, -1};
  int public_card = -1;
  std::string betting;
};

struct Infoset {
  int player = 0;
  int num_actions = 0;
  int depth = 0;
  std::string key;
  std::vector<int> nodes;
};

// Two-player game tree with explicit chance nodes. Node 0 is the root.
class ExtensiveGame {
 public:
  explicit ExtensiveGame(std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }
  const std::vector<EfgNode>& nodes() const noexcept { return nodes_; }
  const std::vector<Infoset>& infosets() const noexcept { return infosets_; }
  const EfgNode& node(int id) const { return nodes_.at(id); }
  const Infoset& infoset(int id) const { return infosets_.at(id); }
  int num_terminals() const;
  // Largest minus smallest terminal payoff of either player.
  double payoff_range() const;

  // Builder interface.
  int add_node(EfgNode node);
  void add_child(int parent, int child, double chance_prob = 0.0);
  // Returns the id of (player, key), creating it on first use. Action counts
  // must agree across calls.
  int intern_infoset(int player, const std::string& key, int num_actions);
  // Computes depths, fills Infoset::nodes and checks structural invariants:
  // chance probabilities sum to 1, every child id exceeds its parent id,
  // infoset members share player, action count and depth. Throws
  // invalid_argument on violations.
  void finalize();

 private:
  std::string name_;
  std::vector<EfgNode> nodes_;
  std::vector<Infoset> infosets_;
  std::map<std::pair<int, std::string>, int> infoset_ids_;
};

// Kuhn poker: cards J < Q < K, ante 1, one bet of size 1 per deal. Actions at
// every decision are (0) pass/check/fold and (1) bet/call. The root chance node
// deals the 6 ordered card pairs.
ExtensiveGame build_kuhn();

// Leduc poker: six cards (J, Q, K in two suits), ante 1, two betting rounds
// with bet sizes 2 then 4, at most two bets/raises per round. One public card
// is revealed between rounds. A pair with the public card wins, otherwise the
// higher private rank wins; equal ranks split. Actions when not facing a bet:
// (0) check, (1) bet. Facing a bet: (0) fold, (1) call, (2) raise if allowed.
// Infosets key on the acting player's private rank, the public rank once
// dealt, and the betting sequence, so suits are not observable.
ExtensiveGame build_leduc();

}  // namespace gw
