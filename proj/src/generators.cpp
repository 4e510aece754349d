#include "xmarket/generators.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

#include "xmarket/random.hpp"

namespace xmarket {

namespace {

// Pairs in random order, each kept with probability 1/2 while both endpoints
// stay under the degree cap.
std::vector<std::pair<int, int>> random_capped_graph(Rng& rng, std::size_t n, int max_degree) {
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) pairs.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  rng.shuffle(pairs);
  std::vector<int> degree(n, 0);
  std::vector<std::pair<int, int>> kept;
  for (const auto& [u, v] : pairs) {
    if (degree[u] >= max_degree || degree[v] >= max_degree || !rng.coin()) continue;
    ++degree[u];
    ++degree[v];
    kept.emplace_back(u, v);
  }
  return kept;
}

}  // namespace

CoordinationGame generate_coordination_game(const GameGenOptions& options) {
  if (options.players < 1 || options.strategies < 1 || options.max_degree < 0) {
    throw std::invalid_argument("game generator needs players >= 1, strategies >= 1, max_degree >= 0");
  }
  Rng rng(options.seed);
  std::vector<PlayerEdge> edges;
  for (const auto& [u, v] : random_capped_graph(rng, options.players, options.max_degree)) edges.push_back({u, v});
  std::vector<std::vector<int>> sets(options.players);
  for (auto& set : sets) {
    for (int s = 1; s <= options.strategies; ++s) {
      if (rng.coin()) set.push_back(s);
    }
    if (set.empty()) set.push_back(static_cast<int>(rng.between(1, options.strategies)));
  }
  return CoordinationGame(options.players, std::move(edges), options.strategies, std::move(sets));
}

MaxCutInstance generate_maxcut(const MaxCutGenOptions& options) {
  if (options.vertices < 1 || options.max_degree < 0 || options.max_weight < 1) {
    throw std::invalid_argument("max-cut generator needs vertices >= 1, max_degree >= 0, max_weight >= 1");
  }
  Rng rng(options.seed);
  std::vector<CutEdge> edges;
  for (const auto& [u, v] : random_capped_graph(rng, options.vertices, options.max_degree)) {
    edges.push_back({u, v, rng.between(1, options.max_weight)});
  }
  return MaxCutInstance(options.vertices, std::move(edges));
}

MarketInstance generate_market(const MarketGenOptions& options) {
  if (options.agents < 1 || options.max_weight < 1 || options.max_valuation < 0 ||
      options.min_cost > options.max_cost) {
    throw std::invalid_argument("market generator options out of range");
  }
  Rng rng(options.seed);
  const std::size_t n = options.agents;
  std::vector<AgentEdge> agent_edges;
  std::vector<ItemEdge> item_edges;
  if (options.graphical) {
    for (const auto& [u, v] : random_capped_graph(rng, n, options.max_degree)) {
      agent_edges.push_back({u, v, rng.between(1, options.max_weight)});
    }
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (rng.coin()) item_edges.push_back({static_cast<int>(a), static_cast<int>(b)});
      }
    }
  }
  std::vector<Int> valuations(n * n);
  for (Int& v : valuations) v = rng.between(0, options.max_valuation);
  std::vector<CostSpec> costs;
  costs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Int> entries(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) entries[a * n + b] = a == b ? 0 : rng.between(options.min_cost, options.max_cost);
    }
    costs.push_back(CostSpec::dense(n, std::move(entries)));
  }
  return MarketInstance(n, std::move(agent_edges), std::move(item_edges), std::move(valuations), std::move(costs));
}

}  // namespace xmarket
