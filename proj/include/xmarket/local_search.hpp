#pragma once

// Potential ascent over the pairwise-swap neighborhood. Every accepted move is
// a permissible blocking pair, which strictly raises the potential, so the
// search ends at a 2-stable allocation.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "xmarket/market.hpp"

namespace xmarket {

enum class PivotRule { kBestImprovement, kFirstImprovement };
enum class InitKind { kIdentity, kGiven, kRandom };

struct SearchConfig {
  PivotRule pivot = PivotRule::kBestImprovement;
  InitKind init = InitKind::kIdentity;
  std::optional<Allocation> initial;        // required iff init == kGiven
  std::optional<std::uint64_t> seed;        // required iff init == kRandom
  std::optional<std::int64_t> max_steps;

  /// Throws std::invalid_argument when the fields are inconsistent.
  void validate(std::size_t n) const;
};

struct SearchStep {
  std::int64_t step = 0;
  int i = 0;
  int j = 0;
  Int potential_before = 0;
  Int potential_after = 0;
};

struct SearchTrace {
  std::vector<SearchStep> steps;
};

struct SearchResult {
  Allocation allocation;
  SearchTrace trace;
  Int initial_potential = 0;
  /// False only when max_steps ran out before a 2-stable allocation.
  bool complete = true;

  std::int64_t step_count() const { return static_cast<std::int64_t>(trace.steps.size()); }
};

/// Pair exchanges i <-> j (i < j) that are permissible under `alloc`.
std::vector<CoalitionalExchange> neighborhood(const MarketInstance& inst, const Allocation& alloc);

SearchResult find_2_stable(const MarketInstance& inst, const SearchConfig& config);

/// The allocation a search starts from.
Allocation initial_allocation(std::size_t n, const SearchConfig& config);

/// 2 * sum_i max_a v_i(a) + 2 * sum_e w(e), an upper bound on the potential.
Int potential_upper_bound(const MarketInstance& inst);

/// One line per step: "step i j phi_before phi_after", preceded by a header.
void write_trace(std::ostream& out, const SearchTrace& trace);

}  // namespace xmarket
