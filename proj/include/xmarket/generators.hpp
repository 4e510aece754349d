#pragma once

// Seeded random instance generators. The same options always produce the
// same instance.

#include <cstdint>

#include "xmarket/coordination.hpp"
#include "xmarket/market.hpp"
#include "xmarket/reductions.hpp"

namespace xmarket {

struct GameGenOptions {
  std::size_t players = 3;
  int strategies = 3;   // m
  int max_degree = 2;
  std::uint64_t seed = 0;
};

/// Random graph under the degree cap; each S_i is a random non-empty subset
/// of [1, m].
CoordinationGame generate_coordination_game(const GameGenOptions& options);

struct MaxCutGenOptions {
  std::size_t vertices = 6;
  int max_degree = 5;
  Int max_weight = 7;
  std::uint64_t seed = 0;
};

/// Random graph under the degree cap with weights uniform in [1, max_weight].
MaxCutInstance generate_maxcut(const MaxCutGenOptions& options);

struct MarketGenOptions {
  std::size_t agents = 5;
  int max_degree = 4;
  Int max_weight = 10;     // agent edge weights in [1, max_weight]
  Int max_valuation = 10;  // valuations in [0, max_valuation]
  Int min_cost = -5;
  Int max_cost = 5;
  bool graphical = true;   // false: no agent or item edges
  std::uint64_t seed = 0;
};

/// Random market with a random agent graph, a random item graph (each pair
/// with probability 1/2) and dense random costs.
MarketInstance generate_market(const MarketGenOptions& options);

}  // namespace xmarket
