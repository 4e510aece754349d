#pragma once

// Graphical one-sided matching markets with exchange costs: instance model,
// allocations, coalitional exchanges, utilities and the potential function.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace xmarket {

using Int = std::int64_t;

/// Raised when an instance violates a structural invariant.
class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Undirected weighted agent edge, stored with u < v.
struct AgentEdge {
  int u = 0;
  int v = 0;
  Int weight = 1;
  friend bool operator==(const AgentEdge&, const AgentEdge&) = default;
};

/// Undirected item edge, stored with a < b.
struct ItemEdge {
  int a = 0;
  int b = 0;
  friend bool operator==(const ItemEdge&, const ItemEdge&) = default;
};

/// Per-agent exchange cost c(from, to).
///
/// Three storage forms are supported. Trivial is identically zero. Dense is a
/// row-major m x m matrix. Partitioned stores an item label per item and a
/// 2x2 table indexed by [label(from) == own][label(to) == own]; its diagonal
/// (from == to) is always zero.
class CostSpec {
 public:
  enum class Kind { kTrivial, kDense, kPartitioned };

  struct Partition {
    std::vector<int> labels;
    int own_label = 0;
    std::array<std::array<Int, 2>, 2> table{};
    friend bool operator==(const Partition&, const Partition&) = default;
  };

  CostSpec() = default;

  static CostSpec trivial() { return {}; }
  static CostSpec dense(std::size_t m, std::vector<Int> row_major);
  static CostSpec partitioned(Partition partition);

  Kind kind() const { return kind_; }

  Int operator()(int from, int to) const {
    switch (kind_) {
      case Kind::kDense:
        return entries_[static_cast<std::size_t>(from) * m_ + static_cast<std::size_t>(to)];
      case Kind::kPartitioned: {
        if (from == to) return 0;
        const auto& p = partition_;
        return p.table[p.labels[from] == p.own_label ? 1 : 0][p.labels[to] == p.own_label ? 1 : 0];
      }
      case Kind::kTrivial:
        break;
    }
    return 0;
  }

  /// Dense copy over m items (identity for Dense specs of the same size).
  CostSpec densified(std::size_t m) const;

  std::size_t dense_size() const { return m_; }
  const std::vector<Int>& dense_entries() const { return entries_; }
  const Partition& partition() const { return partition_; }

  /// Largest |c(a,b)| the spec can produce.
  Int max_abs() const;

  friend bool operator==(const CostSpec&, const CostSpec&) = default;

 private:
  Kind kind_ = Kind::kTrivial;
  std::size_t m_ = 0;
  std::vector<Int> entries_;
  Partition partition_;
};

/// An agent's weighted neighbor in the agent graph.
struct Neighbor {
  int agent = 0;
  Int weight = 0;
};

/// Market instance: agent graph, item graph, valuations and cost functions.
/// The number of items always equals the number of agents. Immutable after
/// construction.
class MarketInstance {
 public:
  /// Valuations are row-major: valuations[agent * n + item].
  /// Throws InvalidInstance on any invariant violation, including the
  /// magnitude bound n * (max|v| + max|c| + sum w) <= 2^40.
  MarketInstance(std::size_t n, std::vector<AgentEdge> agent_edges, std::vector<ItemEdge> item_edges,
                 std::vector<Int> valuations, std::vector<CostSpec> costs);

  std::size_t size() const { return n_; }

  Int valuation(int agent, int item) const {
    return valuations_[static_cast<std::size_t>(agent) * n_ + static_cast<std::size_t>(item)];
  }
  Int cost(int agent, int from, int to) const { return costs_[agent](from, to); }
  bool items_adjacent(int a, int b) const {
    return item_adjacency_[static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b)] != 0;
  }

  std::span<const Neighbor> neighbors(int agent) const {
    return {neighbor_list_.data() + neighbor_offset_[agent],
            neighbor_list_.data() + neighbor_offset_[agent + 1]};
  }
  /// Sum of the weights of all agent edges incident to `agent`.
  Int incident_weight(int agent) const { return incident_weight_[agent]; }

  const std::vector<AgentEdge>& agent_edges() const { return agent_edges_; }
  const std::vector<ItemEdge>& item_edges() const { return item_edges_; }
  const std::vector<Int>& valuations() const { return valuations_; }
  const std::vector<CostSpec>& costs() const { return costs_; }

  /// Optional display names; empty when the instance carries none.
  const std::vector<std::string>& agent_names() const { return agent_names_; }
  const std::vector<std::string>& item_names() const { return item_names_; }
  void set_names(std::vector<std::string> agent_names, std::vector<std::string> item_names);

  /// Copy with every cost spec stored densely.
  MarketInstance densified() const;

  friend bool operator==(const MarketInstance& lhs, const MarketInstance& rhs);

  /// Bound on n * (max|v| + max|c| + sum w).
  static constexpr Int kMagnitudeLimit = Int{1} << 40;

 private:
  std::size_t n_;
  std::vector<AgentEdge> agent_edges_;
  std::vector<ItemEdge> item_edges_;
  std::vector<Int> valuations_;
  std::vector<CostSpec> costs_;
  std::vector<std::string> agent_names_;
  std::vector<std::string> item_names_;

  std::vector<char> item_adjacency_;
  std::vector<std::size_t> neighbor_offset_;
  std::vector<Neighbor> neighbor_list_;
  std::vector<Int> incident_weight_;
};

/// Bijection agent -> item.
class Allocation {
 public:
  /// Throws std::invalid_argument unless `items` is a permutation of 0..n-1.
  explicit Allocation(std::vector<int> items);

  static Allocation identity(std::size_t n);

  std::size_t size() const { return items_.size(); }
  int operator[](int agent) const { return items_[agent]; }
  std::span<const int> items() const { return items_; }

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::vector<int> items_;
};

/// A coalition X (sorted, |X| >= 2) with a fixed-point-free bijection mu on X.
/// images()[k] is mu(members()[k]).
class CoalitionalExchange {
 public:
  /// Members may be given in any order; they are sorted together with their
  /// images. Throws std::invalid_argument for duplicates, |X| < 2, a fixed
  /// point, or images that are not a permutation of the members.
  CoalitionalExchange(std::vector<int> members, std::vector<int> images);

  /// The pair exchange i <-> j.
  static CoalitionalExchange swap(int i, int j);

  std::size_t size() const { return members_.size(); }
  std::span<const int> members() const { return members_; }
  std::span<const int> images() const { return images_; }

  /// The exchange with mu replaced by its inverse.
  CoalitionalExchange inverse() const;

  friend bool operator==(const CoalitionalExchange&, const CoalitionalExchange&) = default;
  friend auto operator<=>(const CoalitionalExchange&, const CoalitionalExchange&) = default;

 private:
  struct Trusted {};
  CoalitionalExchange(Trusted, std::vector<int> members, std::vector<int> images)
      : members_(std::move(members)), images_(std::move(images)) {}
  friend CoalitionalExchange make_exchange_unchecked(std::vector<int>, std::vector<int>);

  std::vector<int> members_;
  std::vector<int> images_;
};

/// Verdict of a k-stability check. `witness` is set iff the allocation is not
/// stable, and is then a permissible blocking exchange.
struct StabilityReport {
  bool stable = true;
  int k = 2;
  std::optional<CoalitionalExchange> witness;
};

Int utility(const MarketInstance& inst, const Allocation& alloc, int agent);

Allocation apply_exchange(const Allocation& alloc, const CoalitionalExchange& ex);

/// Sum over x in X of c_x(pi(x), pi(mu(x))).
Int exchange_cost_total(const MarketInstance& inst, const Allocation& alloc, const CoalitionalExchange& ex);
bool is_permissible(const MarketInstance& inst, const Allocation& alloc, const CoalitionalExchange& ex);

/// Permissible, and every member's utility after the exchange minus its own
/// cost strictly exceeds its utility before.
bool is_blocking(const MarketInstance& inst, const Allocation& alloc, const CoalitionalExchange& ex);

/// phi(pi) = sum_i v_i(pi(i)) + u_i(pi).
Int potential(const MarketInstance& inst, const Allocation& alloc);

/// phi(after) - phi(before), evaluated from coalition-local terms only.
Int potential_delta(const MarketInstance& inst, const Allocation& alloc, const CoalitionalExchange& ex);

/// Per-member net utility after the exchange, u_x(pi') - c_x(pi(x), pi'(x)),
/// in member order.
std::vector<Int> net_utilities_after(const MarketInstance& inst, const Allocation& alloc,
                                     const CoalitionalExchange& ex);

}  // namespace xmarket
