#include "xmarket/assignment.hpp"

#include <limits>

namespace xmarket {

Classification classify_instance(const MarketInstance& inst) {
  const std::size_t n = inst.size();
  const std::size_t complete = n * (n - 1) / 2;

  const auto& agent_edges = inst.agent_edges();
  bool agent_ok = agent_edges.empty();
  if (!agent_ok && agent_edges.size() == complete) {
    agent_ok = true;
    for (const AgentEdge& e : agent_edges) agent_ok &= e.weight == agent_edges.front().weight;
  }
  const std::size_t item_count = inst.item_edges().size();
  const bool item_ok = item_count == 0 || item_count == complete;

  Classification out;
  if (agent_ok && item_ok) {
    out.kind = InstanceClass::kNonGraphicalEquivalent;
    return out;
  }
  if (!agent_ok) {
    out.reason = "agent graph is neither edge-empty nor a uniform-weighted complete graph";
  }
  if (!item_ok) {
    if (!out.reason.empty()) out.reason += "; ";
    out.reason += "item graph is neither edge-empty nor complete";
  }
  return out;
}

Matching max_weight_perfect_matching(const std::vector<std::vector<Int>>& weights) {
  const std::size_t n = weights.size();
  for (std::size_t r = 0; r < n; ++r) {
    if (weights[r].size() != n) {
      throw std::invalid_argument("weight matrix is not square: row " + std::to_string(r) + " has " +
                                  std::to_string(weights[r].size()) + " entries, expected " +
                                  std::to_string(n));
    }
  }
  Matching result;
  if (n == 0) return result;

  // Minimisation on negated weights; rows and columns are 1-based, column 0
  // is the virtual start of each augmenting path.
  constexpr Int kInf = std::numeric_limits<Int>::max() / 4;
  std::vector<Int> row_pot(n + 1, 0);
  std::vector<Int> col_pot(n + 1, 0);
  std::vector<std::size_t> col_match(n + 1, 0);
  std::vector<std::size_t> way(n + 1, 0);

  for (std::size_t row = 1; row <= n; ++row) {
    col_match[0] = row;
    std::size_t col0 = 0;
    std::vector<Int> min_slack(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[col0] = 1;
      const std::size_t row0 = col_match[col0];
      Int delta = kInf;
      std::size_t col1 = 0;
      for (std::size_t col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const Int slack = -weights[row0 - 1][col - 1] - row_pot[row0] - col_pot[col];
        if (slack < min_slack[col]) {
          min_slack[col] = slack;
          way[col] = col0;
        }
        if (min_slack[col] < delta) {
          delta = min_slack[col];
          col1 = col;
        }
      }
      for (std::size_t col = 0; col <= n; ++col) {
        if (used[col]) {
          row_pot[col_match[col]] += delta;
          col_pot[col] -= delta;
        } else {
          min_slack[col] -= delta;
        }
      }
      col0 = col1;
    } while (col_match[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      col_match[col0] = col_match[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  result.assignment.assign(n, -1);
  for (std::size_t col = 1; col <= n; ++col) {
    result.assignment[col_match[col] - 1] = static_cast<int>(col - 1);
  }
  for (std::size_t r = 0; r < n; ++r) result.total += weights[r][result.assignment[r]];
  return result;
}

Allocation solve_core_stable(const MarketInstance& inst) {
  const Classification cls = classify_instance(inst);
  if (cls.kind != InstanceClass::kNonGraphicalEquivalent) {
    throw ClassMismatch("instance is not solvable by assignment: " + cls.reason);
  }
  // Graph terms are constant across allocations here, so only valuations
  // matter.
  const std::size_t n = inst.size();
  std::vector<std::vector<Int>> weights(n, std::vector<Int>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < n; ++a) {
      weights[i][a] = inst.valuation(static_cast<int>(i), static_cast<int>(a)) + 1;
    }
  }
  return Allocation(max_weight_perfect_matching(weights).assignment);
}

}  // namespace xmarket
