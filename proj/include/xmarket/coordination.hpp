#pragma once

// Network coordination games: a player's payoff is the number of incident
// edges whose other endpoint plays the same strategy.

#include <optional>
#include <span>
#include <vector>

namespace xmarket {

struct PlayerEdge {
  int u = 0;
  int v = 0;
  friend bool operator==(const PlayerEdge&, const PlayerEdge&) = default;
};

class CoordinationGame {
 public:
  /// Strategies are integers in [1, m]. Each strategy set must be non-empty;
  /// sets are stored sorted. Throws std::invalid_argument on bad input.
  CoordinationGame(std::size_t players, std::vector<PlayerEdge> edges, int m,
                   std::vector<std::vector<int>> strategy_sets);

  std::size_t size() const { return strategy_sets_.size(); }
  int strategy_universe() const { return m_; }
  const std::vector<PlayerEdge>& edges() const { return edges_; }
  std::span<const int> strategy_set(int player) const { return strategy_sets_[player]; }
  const std::vector<std::vector<int>>& strategy_sets() const { return strategy_sets_; }
  std::span<const int> neighbors(int player) const { return adjacency_[player]; }
  int degree(int player) const { return static_cast<int>(adjacency_[player].size()); }
  int max_degree() const;
  bool allows(int player, int strategy) const;

  friend bool operator==(const CoordinationGame& l, const CoordinationGame& r) {
    return l.m_ == r.m_ && l.edges_ == r.edges_ && l.strategy_sets_ == r.strategy_sets_;
  }

 private:
  int m_;
  std::vector<PlayerEdge> edges_;
  std::vector<std::vector<int>> strategy_sets_;
  std::vector<std::vector<int>> adjacency_;
};

/// One strategy per player.
using StrategyProfile = std::vector<int>;

/// Throws std::invalid_argument unless profile[i] is in S_i for every player.
void validate_profile(const CoordinationGame& game, const StrategyProfile& profile);

int payoff(const CoordinationGame& game, const StrategyProfile& profile, int player);

/// s -> t where exactly the coalition members change strategy.
struct Deviation {
  std::vector<int> coalition;
  StrategyProfile target;
  friend bool operator==(const Deviation&, const Deviation&) = default;
};

struct DeviationReport {
  bool is_equilibrium = true;
  int k = 1;
  std::optional<Deviation> witness;
};

/// Searches coalitions K with |K| <= k (lexicographic, prefix first) and for
/// each the joint re-assignments with t_i != s_i for all i in K, in
/// mixed-radix order with the first member most significant. The witness is
/// the first deviation that strictly raises every member's payoff.
DeviationReport check_k_equilibrium(const CoordinationGame& game, const StrategyProfile& profile, int k);

namespace reference {
/// Serial version without pruning; same order and witness.
DeviationReport check_k_equilibrium(const CoordinationGame& game, const StrategyProfile& profile, int k);
}  // namespace reference

}  // namespace xmarket
