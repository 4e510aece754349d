#pragma once

// Fixtures and brute-force oracles shared by the unit and acceptance tests.
// The oracles work from the raw instance data (edge lists, valuation rows,
// cost lookups) and never call the library's utility or search code.

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

#include "xmarket/coordination.hpp"
#include "xmarket/market.hpp"
#include "xmarket/random.hpp"

namespace xmarket::testing {

using Matrix = std::vector<std::vector<Int>>;

inline std::vector<Int> flatten(const Matrix& m) {
  std::vector<Int> out;
  for (const auto& row : m) out.insert(out.end(), row.begin(), row.end());
  return out;
}

inline CostSpec dense_cost(const Matrix& m) { return CostSpec::dense(m.size(), flatten(m)); }

/// Two agents i1, i2 and two items a, b without edges. i1 earns 2 for any
/// exchange, i2 pays 2.
inline MarketInstance two_agent_market() {
  MarketInstance m(2, {}, {}, {10, 9, 8, 5}, {dense_cost({{0, -2}, {-2, 0}}), dense_cost({{0, 2}, {2, 0}})});
  m.set_names({"i1", "i2"}, {"a", "b"});
  return m;
}

inline std::vector<std::vector<int>> all_permutations(std::size_t n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// u_i from the definition: scan the agent edge list and the item edge list.
inline Int oracle_utility(const MarketInstance& m, const std::vector<int>& items, int i) {
  Int u = m.valuation(i, items[i]);
  for (const auto& e : m.agent_edges()) {
    if (e.u != i && e.v != i) continue;
    int j = e.u == i ? e.v : e.u;
    int a = std::min(items[i], items[j]);
    int b = std::max(items[i], items[j]);
    for (const auto& f : m.item_edges()) {
      if (f.a == a && f.b == b) u += e.weight;
    }
  }
  return u;
}

inline Int oracle_potential(const MarketInstance& m, const std::vector<int>& items) {
  Int phi = 0;
  for (int i = 0; i < static_cast<int>(m.size()); ++i) phi += m.valuation(i, items[i]) + oracle_utility(m, items, i);
  return phi;
}

struct RawExchange {
  std::vector<int> members;
  std::vector<int> images;
  friend auto operator<=>(const RawExchange&, const RawExchange&) = default;
};

/// Every (X, mu) with 2 <= |X| <= k: subsets by bitmask, images by
/// std::next_permutation, fixed points filtered out.
inline std::vector<RawExchange> all_exchanges(std::size_t n, std::size_t k) {
  std::vector<RawExchange> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) members.push_back(static_cast<int>(i));
    }
    if (members.size() < 2 || members.size() > k) continue;
    std::vector<int> images = members;
    do {
      bool deranged = true;
      for (std::size_t t = 0; t < members.size(); ++t) deranged = deranged && images[t] != members[t];
      if (deranged) out.push_back({members, images});
    } while (std::next_permutation(images.begin(), images.end()));
  }
  return out;
}

inline std::vector<int> oracle_apply(const std::vector<int>& items, const RawExchange& ex) {
  std::vector<int> after = items;
  for (std::size_t t = 0; t < ex.members.size(); ++t) after[ex.members[t]] = items[ex.images[t]];
  return after;
}

inline Int oracle_cost_total(const MarketInstance& m, const std::vector<int>& items, const RawExchange& ex) {
  Int total = 0;
  for (std::size_t t = 0; t < ex.members.size(); ++t) {
    total += m.cost(ex.members[t], items[ex.members[t]], items[ex.images[t]]);
  }
  return total;
}

inline bool oracle_blocking(const MarketInstance& m, const std::vector<int>& items, const RawExchange& ex) {
  if (oracle_cost_total(m, items, ex) < 0) return false;
  std::vector<int> after = oracle_apply(items, ex);
  for (std::size_t t = 0; t < ex.members.size(); ++t) {
    int x = ex.members[t];
    Int net = oracle_utility(m, after, x) - m.cost(x, items[x], after[x]);
    if (net <= oracle_utility(m, items, x)) return false;
  }
  return true;
}

/// All blocking exchanges with |X| <= k, as a sorted set.
inline std::set<RawExchange> oracle_blocking_set(const MarketInstance& m, const std::vector<int>& items, std::size_t k) {
  std::set<RawExchange> out;
  for (const auto& ex : all_exchanges(m.size(), k)) {
    if (oracle_blocking(m, items, ex)) out.insert(ex);
  }
  return out;
}

inline bool oracle_2_stable(const MarketInstance& m, const std::vector<int>& items) {
  const int n = static_cast<int>(m.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (oracle_blocking(m, items, {{i, j}, {j, i}})) return false;
    }
  }
  return true;
}

inline Int brute_max_matching(const Matrix& w) {
  Int best = std::numeric_limits<Int>::min();
  for (const auto& p : all_permutations(w.size())) {
    Int total = 0;
    for (std::size_t i = 0; i < w.size(); ++i) total += w[i][p[i]];
    best = std::max(best, total);
  }
  return best;
}

inline int oracle_payoff(const CoordinationGame& g, const StrategyProfile& s, int i) {
  int p = 0;
  for (const auto& e : g.edges()) {
    if ((e.u == i || e.v == i) && s[e.u] == s[e.v]) ++p;
  }
  return p;
}

inline std::vector<StrategyProfile> all_profiles(const CoordinationGame& g) {
  std::vector<StrategyProfile> out;
  StrategyProfile s(g.size());
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == g.size()) {
      out.push_back(s);
      return;
    }
    for (int x : g.strategy_set(static_cast<int>(i))) {
      s[i] = x;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

/// Scans every profile t; K = {i : t_i != s_i}.
inline bool oracle_k_equilibrium(const CoordinationGame& g, const StrategyProfile& s, int k) {
  for (const auto& t : all_profiles(g)) {
    int changed = 0;
    bool all_gain = true;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (t[i] == s[i]) continue;
      ++changed;
      all_gain = all_gain && oracle_payoff(g, t, static_cast<int>(i)) > oracle_payoff(g, s, static_cast<int>(i));
    }
    if (changed >= 1 && changed <= k && all_gain) return false;
  }
  return true;
}

/// Random market with valuations in [0, max_v] and a zero-diagonal cost
/// matrix per agent with entries in [lo, hi].
inline MarketInstance random_nongraphical_market(Rng& rng, std::size_t n, Int max_v, Int lo, Int hi) {
  std::vector<Int> vals(n * n);
  for (Int& v : vals) v = rng.between(0, max_v);
  std::vector<CostSpec> costs;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Int> c(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) c[a * n + b] = a == b ? 0 : rng.between(lo, hi);
    }
    costs.push_back(CostSpec::dense(n, std::move(c)));
  }
  return MarketInstance(n, {}, {}, std::move(vals), std::move(costs));
}

}  // namespace xmarket::testing
