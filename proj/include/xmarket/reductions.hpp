#pragma once

// Constructions that turn coordination games and Local Max-Cut instances
// into markets, with converters between their solutions.

#include <vector>

#include "xmarket/coordination.hpp"
#include "xmarket/market.hpp"

namespace xmarket {

/// Bookkeeping for a game -> market construction.
///
/// Player i owns the contiguous item block A_i = {a_{i,s} : s in S_i}
/// (ascending s) and the contiguous agent block N_i = {x_i, d_i^1, ...,
/// d_i^{|S_i|-1}}. Blocks appear in player order.
struct GameReductionMap {
  Int delta = 0;
  std::vector<int> item_label;    // f(a): the strategy an item stands for
  std::vector<int> item_player;   // owner of each item's block
  std::vector<int> agent_player;  // owner of each agent's block
  std::vector<int> agent_role;    // 0 for x_i, r >= 1 for dummy d_i^r
  std::vector<int> block_start;   // first agent/item index of each block; size players + 1

  std::size_t players() const { return block_start.size() - 1; }
  int real_agent(int player) const { return block_start[player]; }
  /// Index of a_{player, strategy}; throws std::invalid_argument if absent.
  int item_of(int player, int strategy) const;

  /// Throws std::invalid_argument on inconsistent tables.
  void validate() const;

  friend bool operator==(const GameReductionMap&, const GameReductionMap&) = default;
};

struct GameReduction {
  MarketInstance market;
  GameReductionMap map;
};

/// Delta = 10 * max(1, max degree).
Int reduction_delta(const CoordinationGame& game);

/// Market whose 2k-stable allocations correspond to k-equilibria. Agent
/// edges copy the game edges between real agents with weight 2; items are
/// adjacent iff their labels agree; every block member values its own block
/// at Delta; costs follow the two case tables (dense).
GameReduction reduce_game_to_market(const CoordinationGame& game);

/// pi_s: x_i takes a_{i,s_i}; dummy d_i^r takes the r-th (or (r+1)-th, once
/// r reaches rank_i(s_i)) strategy of S_i in ascending order.
Allocation profile_to_allocation(const CoordinationGame& game, const GameReductionMap& map,
                                 const StrategyProfile& profile);

/// True iff every agent holds an item from its own block.
bool is_valid_allocation(const GameReductionMap& map, const Allocation& alloc);

/// s_pi(i) = f(pi(x_i)). Throws std::invalid_argument naming the first agent
/// that holds an item outside its block.
StrategyProfile allocation_to_profile(const GameReductionMap& map, const Allocation& alloc);

struct CheckReduction {
  MarketInstance market;  // trivial costs
  Allocation allocation;
  int stability_level = 2;  // 2k
  GameReductionMap map;
};

/// Cost-free market and allocation that is 2k-stable iff `profile` is a
/// k-equilibrium. Dummies of player i value only a_{i,s_i}, at Delta.
CheckReduction reduce_check_instance(const CoordinationGame& game, const StrategyProfile& profile, int k);

// ---------------------------------------------------------------------------
// Local Max-Cut

struct CutEdge {
  int u = 0;
  int v = 0;
  Int weight = 1;
  friend bool operator==(const CutEdge&, const CutEdge&) = default;
};

class MaxCutInstance {
 public:
  /// Throws std::invalid_argument on self-loops, duplicates, unknown
  /// vertices or non-positive weights.
  MaxCutInstance(std::size_t vertices, std::vector<CutEdge> edges);

  std::size_t size() const { return vertices_; }
  const std::vector<CutEdge>& edges() const { return edges_; }
  int max_degree() const;

  friend bool operator==(const MaxCutInstance&, const MaxCutInstance&) = default;

 private:
  std::size_t vertices_;
  std::vector<CutEdge> edges_;
};

/// x[v] in {0, 1}.
using CutAssignment = std::vector<int>;

/// Side of every item of a reduced max-cut market (0 for A_0, 1 for A_1);
/// agents 0..vertices-1 are the vertex agents.
struct MaxCutMap {
  std::size_t vertices = 0;
  std::vector<int> item_side;

  void validate() const;
  friend bool operator==(const MaxCutMap&, const MaxCutMap&) = default;
};

struct MaxCutReduction {
  MarketInstance market;
  MaxCutMap map;
};

/// Items A_0 = [0, |V|), A_1 = [|V|, 2|V|), complete bipartite item graph;
/// agents are the vertices followed by |V| isolated dummies; weights doubled;
/// zero valuations; a side change costs +1 for vertex agents, -1 for dummies.
MaxCutReduction reduce_maxcut_to_market(const MaxCutInstance& cut);

/// x(v) = side of the item held by vertex agent v.
CutAssignment recover_cut(const MarketInstance& market, const MaxCutMap& map, const Allocation& alloc);

/// Every vertex has at least as much cut weight as uncut weight.
bool is_local_maxcut(const MaxCutInstance& cut, const CutAssignment& x);

/// Total weight of cut edges.
Int cut_value(const MaxCutInstance& cut, const CutAssignment& x);

}  // namespace xmarket
