#include "xmarket/local_search.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "xmarket/detail/kernels.hpp"
#include "xmarket/random.hpp"

namespace xmarket {

void SearchConfig::validate(std::size_t n) const {
  if (init == InitKind::kRandom && !seed) throw std::invalid_argument("random init requires a seed");
  if (init != InitKind::kRandom && seed) throw std::invalid_argument("a seed is only meaningful with random init");
  if (init == InitKind::kGiven && !initial) throw std::invalid_argument("given init requires an initial allocation");
  if (init != InitKind::kGiven && initial) {
    throw std::invalid_argument("an initial allocation is only meaningful with given init");
  }
  if (initial && initial->size() != n) throw std::invalid_argument("initial allocation size does not match market");
  if (max_steps && *max_steps < 0) throw std::invalid_argument("max_steps must be non-negative");
}

Allocation initial_allocation(std::size_t n, const SearchConfig& config) {
  switch (config.init) {
    case InitKind::kGiven:
      return *config.initial;
    case InitKind::kRandom: {
      Rng rng(*config.seed);
      return Allocation(rng.permutation(n));
    }
    case InitKind::kIdentity:
      break;
  }
  return Allocation::identity(n);
}

std::vector<CoalitionalExchange> neighborhood(const MarketInstance& inst, const Allocation& alloc) {
  if (alloc.size() != inst.size()) throw std::invalid_argument("allocation size does not match market size");
  std::vector<CoalitionalExchange> out;
  const int n = static_cast<int>(inst.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (inst.cost(i, alloc[i], alloc[j]) + inst.cost(j, alloc[j], alloc[i]) >= 0) {
        out.push_back(CoalitionalExchange::swap(i, j));
      }
    }
  }
  return out;
}

Int potential_upper_bound(const MarketInstance& inst) {
  const int n = static_cast<int>(inst.size());
  Int bound = 0;
  for (int i = 0; i < n; ++i) {
    Int best = 0;
    for (int a = 0; a < n; ++a) best = std::max(best, inst.valuation(i, a));
    bound += 2 * best;
  }
  for (const AgentEdge& e : inst.agent_edges()) bound += 2 * e.weight;
  return bound;
}

namespace {

struct PairMove {
  int i = -1;
  int j = -1;
  Int delta = 0;
};

// Scans unordered pairs in lexicographic order for permissible blocking
// swaps. Best improvement keeps the largest potential gain, ties going to the
// earliest pair.
std::optional<PairMove> select_move(const MarketInstance& inst, std::vector<int>& items,
                                    const std::vector<Int>& util, PivotRule pivot) {
  std::optional<PairMove> chosen;
  const int n = static_cast<int>(inst.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int a = items[i];
      const int b = items[j];
      const Int ci = inst.cost(i, a, b);
      const Int cj = inst.cost(j, b, a);
      if (ci + cj < 0) continue;
      items[i] = b;
      items[j] = a;
      const Int ui = detail::utility_at(inst, items, i);
      const Int uj = detail::utility_at(inst, items, j);
      items[i] = a;
      items[j] = b;
      if (ui - ci <= util[i] || uj - cj <= util[j]) continue;
      // An edge {i, j} is realized before the swap iff it is realized after,
      // so the coalition-internal correction cancels.
      const Int delta = 2 * (ui + uj - util[i] - util[j]);
      if (pivot == PivotRule::kFirstImprovement) return PairMove{i, j, delta};
      if (!chosen || delta > chosen->delta) chosen = PairMove{i, j, delta};
    }
  }
  return chosen;
}

}  // namespace

SearchResult find_2_stable(const MarketInstance& inst, const SearchConfig& config) {
  config.validate(inst.size());
  const int n = static_cast<int>(inst.size());
  const Allocation start = initial_allocation(inst.size(), config);
  std::vector<int> items(start.items().begin(), start.items().end());
  std::vector<Int> util(n);

  const Int initial_phi = potential(inst, start);
  Int phi = initial_phi;
  SearchTrace trace;
  bool complete = true;
  for (;;) {
    for (int x = 0; x < n; ++x) util[x] = detail::utility_at(inst, items, x);
    const std::optional<PairMove> move = select_move(inst, items, util, config.pivot);
    if (!move) break;
    if (config.max_steps && static_cast<std::int64_t>(trace.steps.size()) >= *config.max_steps) {
      complete = false;
      break;
    }
    std::swap(items[move->i], items[move->j]);
    trace.steps.push_back({static_cast<std::int64_t>(trace.steps.size()) + 1, move->i, move->j, phi,
                           phi + move->delta});
    phi += move->delta;
  }

  return SearchResult{Allocation(std::move(items)), std::move(trace), initial_phi, complete};
}

void write_trace(std::ostream& out, const SearchTrace& trace) {
  out << "# step i j phi_before phi_after\n";
  for (const SearchStep& s : trace.steps) {
    out << s.step << ' ' << s.i << ' ' << s.j << ' ' << s.potential_before << ' ' << s.potential_after << '\n';
  }
}

}  // namespace xmarket
