#pragma once

// Core-stable allocations for markets without local structure, through a
// maximum-weight perfect matching on w(i, a) = v_i(a) + 1.

#include <stdexcept>
#include <string>
#include <vector>

#include "xmarket/market.hpp"

namespace xmarket {

enum class InstanceClass { kNonGraphicalEquivalent, kGeneral };

struct Classification {
  InstanceClass kind = InstanceClass::kGeneral;
  /// Names the violated condition for kGeneral, empty otherwise.
  std::string reason;
};

/// Non-graphical-equivalent iff the agent graph is edge-empty or complete
/// with a single common weight, and the item graph is edge-empty or complete.
/// Under those conditions every agent's graph term is the same constant for
/// every allocation.
Classification classify_instance(const MarketInstance& inst);

class ClassMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Matching {
  std::vector<int> assignment;  // row -> column
  Int total = 0;
};

/// Hungarian algorithm with potentials, O(n^3). Throws std::invalid_argument
/// for a non-square matrix.
Matching max_weight_perfect_matching(const std::vector<std::vector<Int>>& weights);

/// Throws ClassMismatch when classify_instance reports kGeneral.
Allocation solve_core_stable(const MarketInstance& inst);

}  // namespace xmarket
