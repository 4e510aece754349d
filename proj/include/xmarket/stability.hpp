#pragma once

// Exact k-stability and core-stability checking by enumeration of coalitions
// and fixed-point-free bijections.
//
// Enumeration order is fixed: coalitions in lexicographic order of their
// sorted member lists (a list precedes its extensions), and for each
// coalition the derangements in lexicographic order of the image sequence
// (mu(x_1), ..., mu(x_m)). Witnesses are the first blocking exchange in that
// order.

#include <vector>

#include "xmarket/market.hpp"

namespace xmarket {

/// Throws std::invalid_argument unless 2 <= k <= max(n, 2). A one-agent
/// market accepts k = 2 and is vacuously stable.
void validate_stability_level(const MarketInstance& inst, int k);

/// Number of (X, mu) pairs with 2 <= |X| <= k: sum_j C(n, j) * D_j.
double candidate_exchange_count(std::size_t n, int k);

/// Every permissible blocking exchange with |X| <= k, in enumeration order.
/// Coalitions are split by their first two members and searched in parallel;
/// results are merged back into enumeration order.
std::vector<CoalitionalExchange> enumerate_blocking(const MarketInstance& inst, const Allocation& alloc, int k);

/// Stops at the first witness. k = n checks core stability.
StabilityReport check_k_stable(const MarketInstance& inst, const Allocation& alloc, int k);

namespace reference {

// Serial brute force over every subset and every permutation, built only on
// the public predicates. Same enumeration order as the parallel kernels.

std::vector<CoalitionalExchange> enumerate_blocking(const MarketInstance& inst, const Allocation& alloc, int k);
StabilityReport check_k_stable(const MarketInstance& inst, const Allocation& alloc, int k);

}  // namespace reference

}  // namespace xmarket
