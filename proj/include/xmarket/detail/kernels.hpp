#pragma once

// Allocation-free evaluation helpers shared by the enumeration kernels.

#include <span>
#include <vector>

#include "xmarket/market.hpp"

namespace xmarket {

/// Builds an exchange without validation. Callers guarantee sorted distinct
/// members and a fixed-point-free permutation.
CoalitionalExchange make_exchange_unchecked(std::vector<int> members, std::vector<int> images);

namespace detail {

/// u_agent for the allocation given as a raw agent -> item array.
inline Int utility_at(const MarketInstance& inst, std::span<const int> items, int agent) {
  const int held = items[agent];
  Int u = inst.valuation(agent, held);
  for (const Neighbor& nb : inst.neighbors(agent)) {
    if (inst.items_adjacent(held, items[nb.agent])) u += nb.weight;
  }
  return u;
}

/// Sum of weights of agent edges with both endpoints flagged in `inside`
/// whose allocated items are adjacent.
inline Int realized_inside_weight(const MarketInstance& inst, std::span<const int> items,
                                  std::span<const int> members, std::span<const char> inside) {
  Int total = 0;
  for (int x : members) {
    for (const Neighbor& nb : inst.neighbors(x)) {
      if (nb.agent > x && inside[nb.agent] && inst.items_adjacent(items[x], items[nb.agent])) {
        total += nb.weight;
      }
    }
  }
  return total;
}

}  // namespace detail
}  // namespace xmarket
