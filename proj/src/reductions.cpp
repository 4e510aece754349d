#include "xmarket/reductions.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace xmarket {

// ---------------------------------------------------------------------------
// GameReductionMap

int GameReductionMap::item_of(int player, int strategy) const {
  for (int a = block_start[player]; a < block_start[player + 1]; ++a) {
    if (item_label[a] == strategy) return a;
  }
  throw std::invalid_argument("player " + std::to_string(player) + " has no item for strategy " +
                              std::to_string(strategy));
}

void GameReductionMap::validate() const {
  if (block_start.size() < 2 || block_start.front() != 0) {
    throw std::invalid_argument("reduction map needs block starts beginning at 0");
  }
  const std::size_t n = static_cast<std::size_t>(block_start.back());
  if (item_label.size() != n || item_player.size() != n || agent_player.size() != n || agent_role.size() != n) {
    throw std::invalid_argument("reduction map tables must all have one entry per agent/item");
  }
  if (delta < 10 || delta % 2 != 0) throw std::invalid_argument("reduction map delta must be even and >= 10");
  for (std::size_t p = 0; p + 1 < block_start.size(); ++p) {
    const int begin = block_start[p];
    const int end = block_start[p + 1];
    if (end <= begin) throw std::invalid_argument("every player block must be non-empty");
    for (int a = begin; a < end; ++a) {
      if (item_player[a] != static_cast<int>(p) || agent_player[a] != static_cast<int>(p)) {
        throw std::invalid_argument("block membership disagrees with block starts at index " + std::to_string(a));
      }
      if (agent_role[a] != a - begin) {
        throw std::invalid_argument("agent roles must be 0 for x_i followed by 1..|S_i|-1");
      }
      if (a > begin && item_label[a] <= item_label[a - 1]) {
        throw std::invalid_argument("item labels must increase within a block");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Game -> market

Int reduction_delta(const CoordinationGame& game) { return 10 * static_cast<Int>(std::max(1, game.max_degree())); }

namespace {

GameReductionMap build_map(const CoordinationGame& game) {
  GameReductionMap map;
  map.delta = reduction_delta(game);
  map.block_start.push_back(0);
  for (std::size_t p = 0; p < game.size(); ++p) {
    const auto set = game.strategy_set(static_cast<int>(p));
    for (std::size_t r = 0; r < set.size(); ++r) {
      map.item_label.push_back(set[r]);
      map.item_player.push_back(static_cast<int>(p));
      map.agent_player.push_back(static_cast<int>(p));
      map.agent_role.push_back(static_cast<int>(r));
    }
    map.block_start.push_back(static_cast<int>(map.item_label.size()));
  }
  return map;
}

std::vector<ItemEdge> same_label_edges(const GameReductionMap& map) {
  std::vector<ItemEdge> edges;
  const int n = static_cast<int>(map.item_label.size());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (map.item_label[a] == map.item_label[b]) edges.push_back({a, b});
    }
  }
  return edges;
}

std::vector<AgentEdge> real_agent_edges(const CoordinationGame& game, const GameReductionMap& map) {
  std::vector<AgentEdge> edges;
  for (const PlayerEdge& e : game.edges()) edges.push_back({map.real_agent(e.u), map.real_agent(e.v), 2});
  return edges;
}

}  // namespace

GameReduction reduce_game_to_market(const CoordinationGame& game) {
  GameReductionMap map = build_map(game);
  const std::size_t n = map.item_label.size();
  const Int delta = map.delta;
  const Int players = static_cast<Int>(game.size());

  std::vector<Int> valuations(n * n, 0);
  for (std::size_t agent = 0; agent < n; ++agent) {
    for (std::size_t item = 0; item < n; ++item) {
      if (map.item_player[item] == map.agent_player[agent]) valuations[agent * n + item] = delta;
    }
  }

  // table[from in own block][to in own block]; from == to costs nothing.
  std::vector<CostSpec> costs;
  costs.reserve(n);
  for (std::size_t agent = 0; agent < n; ++agent) {
    CostSpec::Partition part;
    part.labels = map.item_player;
    part.own_label = map.agent_player[agent];
    part.table[1][1] = map.agent_role[agent] == 0 ? 1 : -1;
    part.table[0][1] = delta / 2;
    part.table[0][0] = -delta / 2;
    part.table[1][0] = -players * delta;
    costs.push_back(CostSpec::partitioned(std::move(part)).densified(n));
  }

  MarketInstance market(n, real_agent_edges(game, map), same_label_edges(map), std::move(valuations),
                        std::move(costs));
  return GameReduction{std::move(market), std::move(map)};
}

Allocation profile_to_allocation(const CoordinationGame& game, const GameReductionMap& map,
                                 const StrategyProfile& profile) {
  validate_profile(game, profile);
  if (map.players() != game.size()) throw std::invalid_argument("reduction map does not belong to this game");
  std::vector<int> items(map.item_label.size());
  for (std::size_t p = 0; p < game.size(); ++p) {
    const int player = static_cast<int>(p);
    const int begin = map.block_start[player];
    const int chosen = map.item_of(player, profile[p]);
    const int rank = chosen - begin + 1;
    items[begin] = chosen;
    const int dummies = map.block_start[player + 1] - begin - 1;
    for (int r = 1; r <= dummies; ++r) {
      // r-th smallest strategy sits at offset r - 1 of the block.
      items[begin + r] = r < rank ? begin + r - 1 : begin + r;
    }
  }
  return Allocation(std::move(items));
}

bool is_valid_allocation(const GameReductionMap& map, const Allocation& alloc) {
  if (alloc.size() != map.agent_player.size()) return false;
  for (std::size_t agent = 0; agent < alloc.size(); ++agent) {
    if (map.item_player[alloc[static_cast<int>(agent)]] != map.agent_player[agent]) return false;
  }
  return true;
}

StrategyProfile allocation_to_profile(const GameReductionMap& map, const Allocation& alloc) {
  if (alloc.size() != map.agent_player.size()) {
    throw std::invalid_argument("allocation size does not match the reduced market");
  }
  for (std::size_t agent = 0; agent < alloc.size(); ++agent) {
    const int item = alloc[static_cast<int>(agent)];
    if (map.item_player[item] != map.agent_player[agent]) {
      throw std::invalid_argument("invalid allocation: agent " + std::to_string(agent) + " of player " +
                                  std::to_string(map.agent_player[agent]) + " holds item " + std::to_string(item) +
                                  " of player " + std::to_string(map.item_player[item]));
    }
  }
  StrategyProfile profile(map.players());
  for (std::size_t p = 0; p < map.players(); ++p) {
    profile[p] = map.item_label[alloc[map.real_agent(static_cast<int>(p))]];
  }
  return profile;
}

CheckReduction reduce_check_instance(const CoordinationGame& game, const StrategyProfile& profile, int k) {
  validate_profile(game, profile);
  if (k < 1 || static_cast<std::size_t>(k) > game.size()) {
    throw std::invalid_argument("equilibrium level k=" + std::to_string(k) + " outside [1, " +
                                std::to_string(game.size()) + "]");
  }
  GameReductionMap map = build_map(game);
  const std::size_t n = map.item_label.size();
  const Int delta = map.delta;

  std::vector<Int> valuations(n * n, 0);
  for (std::size_t agent = 0; agent < n; ++agent) {
    const int player = map.agent_player[agent];
    if (map.agent_role[agent] == 0) {
      for (std::size_t item = 0; item < n; ++item) {
        if (map.item_player[item] == player) valuations[agent * n + item] = delta;
      }
    } else {
      valuations[agent * n + map.item_of(player, profile[player])] = delta;
    }
  }

  MarketInstance market(n, real_agent_edges(game, map), same_label_edges(map), std::move(valuations),
                        std::vector<CostSpec>(n, CostSpec::trivial()));
  Allocation alloc = profile_to_allocation(game, map, profile);
  // Coalitions larger than the market do not exist, so 2k is capped at n.
  const int level = std::min(2 * k, std::max(2, static_cast<int>(n)));
  return CheckReduction{std::move(market), std::move(alloc), level, std::move(map)};
}

// ---------------------------------------------------------------------------
// Local Max-Cut

MaxCutInstance::MaxCutInstance(std::size_t vertices, std::vector<CutEdge> edges)
    : vertices_(vertices), edges_(std::move(edges)) {
  if (vertices_ < 1) throw std::invalid_argument("a max-cut instance needs at least one vertex");
  const int n = static_cast<int>(vertices_);
  for (CutEdge& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) throw std::invalid_argument("edge references unknown vertex");
    if (e.u == e.v) throw std::invalid_argument("self-loop at vertex " + std::to_string(e.u));
    if (e.weight <= 0) throw std::invalid_argument("edge weights must be positive");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const CutEdge& l, const CutEdge& r) { return l.u != r.u ? l.u < r.u : l.v < r.v; });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].u == edges_[k - 1].u && edges_[k].v == edges_[k - 1].v) {
      throw std::invalid_argument("duplicate edge in max-cut graph");
    }
  }
}

int MaxCutInstance::max_degree() const {
  std::vector<int> degree(vertices_, 0);
  for (const CutEdge& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  return degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());
}

void MaxCutMap::validate() const {
  if (item_side.size() != 2 * vertices) throw std::invalid_argument("max-cut map needs 2|V| item sides");
  std::size_t zeros = 0;
  for (int side : item_side) {
    if (side != 0 && side != 1) throw std::invalid_argument("item sides must be 0 or 1");
    zeros += side == 0 ? 1 : 0;
  }
  if (zeros != vertices) throw std::invalid_argument("max-cut map needs |V| items on each side");
}

MaxCutReduction reduce_maxcut_to_market(const MaxCutInstance& cut) {
  const std::size_t v = cut.size();
  const std::size_t n = 2 * v;
  MaxCutMap map;
  map.vertices = v;
  map.item_side.assign(n, 0);
  std::fill(map.item_side.begin() + static_cast<std::ptrdiff_t>(v), map.item_side.end(), 1);

  std::vector<ItemEdge> item_edges;
  for (std::size_t a = 0; a < v; ++a) {
    for (std::size_t b = v; b < n; ++b) item_edges.push_back({static_cast<int>(a), static_cast<int>(b)});
  }
  std::vector<AgentEdge> agent_edges;
  for (const CutEdge& e : cut.edges()) agent_edges.push_back({e.u, e.v, 2 * e.weight});

  std::vector<CostSpec> costs;
  costs.reserve(n);
  for (std::size_t agent = 0; agent < n; ++agent) {
    CostSpec::Partition part;
    part.labels = map.item_side;
    part.own_label = 0;
    const Int cross = agent < v ? 1 : -1;
    part.table[0][1] = cross;
    part.table[1][0] = cross;
    costs.push_back(CostSpec::partitioned(std::move(part)).densified(n));
  }

  MarketInstance market(n, std::move(agent_edges), std::move(item_edges), std::vector<Int>(n * n, 0),
                        std::move(costs));
  return MaxCutReduction{std::move(market), std::move(map)};
}

CutAssignment recover_cut(const MarketInstance& market, const MaxCutMap& map, const Allocation& alloc) {
  map.validate();
  if (market.size() != map.item_side.size() || alloc.size() != market.size()) {
    throw std::invalid_argument("market, map and allocation sizes disagree");
  }
  CutAssignment x(map.vertices);
  for (std::size_t vtx = 0; vtx < map.vertices; ++vtx) x[vtx] = map.item_side[alloc[static_cast<int>(vtx)]];
  return x;
}

bool is_local_maxcut(const MaxCutInstance& cut, const CutAssignment& x) {
  if (x.size() != cut.size()) throw std::invalid_argument("cut assignment size does not match the graph");
  std::vector<Int> balance(cut.size(), 0);  // cut weight minus uncut weight
  for (const CutEdge& e : cut.edges()) {
    const Int signed_weight = x[e.u] != x[e.v] ? e.weight : -e.weight;
    balance[e.u] += signed_weight;
    balance[e.v] += signed_weight;
  }
  return std::all_of(balance.begin(), balance.end(), [](Int b) { return b >= 0; });
}

Int cut_value(const MaxCutInstance& cut, const CutAssignment& x) {
  if (x.size() != cut.size()) throw std::invalid_argument("cut assignment size does not match the graph");
  Int total = 0;
  for (const CutEdge& e : cut.edges()) total += x[e.u] != x[e.v] ? e.weight : 0;
  return total;
}

}  // namespace xmarket
