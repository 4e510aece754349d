#include "xmarket/market.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <tuple>

#include "xmarket/detail/kernels.hpp"

namespace xmarket {

namespace {

std::string edge_text(int u, int v) {
  return "{" + std::to_string(u) + "," + std::to_string(v) + "}";
}

// Adds `term` to `acc`, returning false once the running total passes `limit`.
bool accumulate_bounded(Int& acc, Int term, Int limit) {
  if (term > limit || acc > limit - term) return false;
  acc += term;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// CostSpec

CostSpec CostSpec::dense(std::size_t m, std::vector<Int> row_major) {
  if (row_major.size() != m * m) {
    throw InvalidInstance("dense cost matrix must have " + std::to_string(m * m) + " entries, got " +
                          std::to_string(row_major.size()));
  }
  CostSpec spec;
  spec.kind_ = Kind::kDense;
  spec.m_ = m;
  spec.entries_ = std::move(row_major);
  return spec;
}

CostSpec CostSpec::partitioned(Partition partition) {
  CostSpec spec;
  spec.kind_ = Kind::kPartitioned;
  spec.partition_ = std::move(partition);
  return spec;
}

CostSpec CostSpec::densified(std::size_t m) const {
  if (kind_ == Kind::kDense && m_ == m) return *this;
  std::vector<Int> entries(m * m, 0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      entries[a * m + b] = (*this)(static_cast<int>(a), static_cast<int>(b));
    }
  }
  return dense(m, std::move(entries));
}

Int CostSpec::max_abs() const {
  Int best = 0;
  switch (kind_) {
    case Kind::kDense:
      for (Int c : entries_) best = std::max(best, c < 0 ? -c : c);
      break;
    case Kind::kPartitioned:
      for (const auto& row : partition_.table) {
        for (Int c : row) best = std::max(best, c < 0 ? -c : c);
      }
      break;
    case Kind::kTrivial:
      break;
  }
  return best;
}

// ---------------------------------------------------------------------------
// MarketInstance

MarketInstance::MarketInstance(std::size_t n, std::vector<AgentEdge> agent_edges,
                               std::vector<ItemEdge> item_edges, std::vector<Int> valuations,
                               std::vector<CostSpec> costs)
    : n_(n),
      agent_edges_(std::move(agent_edges)),
      item_edges_(std::move(item_edges)),
      valuations_(std::move(valuations)),
      costs_(std::move(costs)) {
  if (n_ < 1) throw InvalidInstance("n >= 1 required");
  const int ni = static_cast<int>(n_);

  if (valuations_.size() != n_ * n_) {
    throw InvalidInstance("valuations must be an n x n table (numbers of agents and items are equal)");
  }
  for (std::size_t k = 0; k < valuations_.size(); ++k) {
    if (valuations_[k] < 0) {
      throw InvalidInstance("valuation of agent " + std::to_string(k / n_) + " for item " +
                            std::to_string(k % n_) + " is negative");
    }
  }

  if (costs_.size() != n_) throw InvalidInstance("one cost function per agent required");
  for (std::size_t i = 0; i < n_; ++i) {
    const CostSpec& c = costs_[i];
    if (c.kind() == CostSpec::Kind::kDense && c.dense_size() != n_) {
      throw InvalidInstance("cost matrix of agent " + std::to_string(i) + " is not n x n");
    }
    if (c.kind() == CostSpec::Kind::kPartitioned && c.partition().labels.size() != n_) {
      throw InvalidInstance("cost partition of agent " + std::to_string(i) + " must label every item");
    }
  }

  for (AgentEdge& e : agent_edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= ni || e.v >= ni) {
      throw InvalidInstance("agent edge " + edge_text(e.u, e.v) + " references an unknown agent");
    }
    if (e.u == e.v) throw InvalidInstance("agent edge " + edge_text(e.u, e.v) + " is a self-loop");
    if (e.weight <= 0) throw InvalidInstance("agent edge " + edge_text(e.u, e.v) + " has non-positive weight");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(agent_edges_.begin(), agent_edges_.end(),
            [](const AgentEdge& l, const AgentEdge& r) { return std::tie(l.u, l.v) < std::tie(r.u, r.v); });
  for (std::size_t k = 1; k < agent_edges_.size(); ++k) {
    if (agent_edges_[k].u == agent_edges_[k - 1].u && agent_edges_[k].v == agent_edges_[k - 1].v) {
      throw InvalidInstance("duplicate agent edge " + edge_text(agent_edges_[k].u, agent_edges_[k].v));
    }
  }

  for (ItemEdge& e : item_edges_) {
    if (e.a < 0 || e.b < 0 || e.a >= ni || e.b >= ni) {
      throw InvalidInstance("item edge " + edge_text(e.a, e.b) + " references an unknown item");
    }
    if (e.a == e.b) throw InvalidInstance("item edge " + edge_text(e.a, e.b) + " is a self-loop");
    if (e.a > e.b) std::swap(e.a, e.b);
  }
  std::sort(item_edges_.begin(), item_edges_.end(),
            [](const ItemEdge& l, const ItemEdge& r) { return std::tie(l.a, l.b) < std::tie(r.a, r.b); });
  for (std::size_t k = 1; k < item_edges_.size(); ++k) {
    if (item_edges_[k] == item_edges_[k - 1]) {
      throw InvalidInstance("duplicate item edge " + edge_text(item_edges_[k].a, item_edges_[k].b));
    }
  }

  // Magnitude bound keeps every potential and delta far from overflow.
  {
    const Int limit = kMagnitudeLimit;
    Int max_v = valuations_.empty() ? 0 : *std::max_element(valuations_.begin(), valuations_.end());
    Int max_c = 0;
    for (const CostSpec& c : costs_) max_c = std::max(max_c, c.max_abs());
    Int sum = 0;
    bool ok = accumulate_bounded(sum, max_v, limit) && accumulate_bounded(sum, max_c, limit);
    for (const AgentEdge& e : agent_edges_) {
      if (!ok) break;
      ok = accumulate_bounded(sum, e.weight, limit);
    }
    if (!ok || sum > limit / static_cast<Int>(n_)) {
      throw InvalidInstance("n * (max|v| + max|c| + sum w) exceeds 2^40");
    }
  }

  item_adjacency_.assign(n_ * n_, 0);
  for (const ItemEdge& e : item_edges_) {
    item_adjacency_[static_cast<std::size_t>(e.a) * n_ + e.b] = 1;
    item_adjacency_[static_cast<std::size_t>(e.b) * n_ + e.a] = 1;
  }

  std::vector<std::size_t> degree(n_, 0);
  for (const AgentEdge& e : agent_edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  neighbor_offset_.assign(n_ + 1, 0);
  for (std::size_t i = 0; i < n_; ++i) neighbor_offset_[i + 1] = neighbor_offset_[i] + degree[i];
  neighbor_list_.resize(neighbor_offset_[n_]);
  incident_weight_.assign(n_, 0);
  std::vector<std::size_t> fill(neighbor_offset_.begin(), neighbor_offset_.end() - 1);
  for (const AgentEdge& e : agent_edges_) {
    neighbor_list_[fill[e.u]++] = {e.v, e.weight};
    neighbor_list_[fill[e.v]++] = {e.u, e.weight};
    incident_weight_[e.u] += e.weight;
    incident_weight_[e.v] += e.weight;
  }
}

void MarketInstance::set_names(std::vector<std::string> agent_names, std::vector<std::string> item_names) {
  auto check = [this](const std::vector<std::string>& names, const char* what) {
    if (names.empty()) return;
    if (names.size() != n_) throw InvalidInstance(std::string(what) + " names must cover all n entries");
    std::set<std::string> seen(names.begin(), names.end());
    if (seen.size() != names.size()) throw InvalidInstance(std::string(what) + " names must be distinct");
  };
  check(agent_names, "agent");
  check(item_names, "item");
  agent_names_ = std::move(agent_names);
  item_names_ = std::move(item_names);
}

MarketInstance MarketInstance::densified() const {
  std::vector<CostSpec> dense;
  dense.reserve(n_);
  for (const CostSpec& c : costs_) dense.push_back(c.densified(n_));
  MarketInstance out(n_, agent_edges_, item_edges_, valuations_, std::move(dense));
  out.agent_names_ = agent_names_;
  out.item_names_ = item_names_;
  return out;
}

bool operator==(const MarketInstance& lhs, const MarketInstance& rhs) {
  return lhs.n_ == rhs.n_ && lhs.agent_edges_ == rhs.agent_edges_ && lhs.item_edges_ == rhs.item_edges_ &&
         lhs.valuations_ == rhs.valuations_ && lhs.costs_ == rhs.costs_ &&
         lhs.agent_names_ == rhs.agent_names_ && lhs.item_names_ == rhs.item_names_;
}

// ---------------------------------------------------------------------------
// Allocation

Allocation::Allocation(std::vector<int> items) : items_(std::move(items)) {
  std::vector<char> used(items_.size(), 0);
  for (std::size_t agent = 0; agent < items_.size(); ++agent) {
    const int item = items_[agent];
    if (item < 0 || static_cast<std::size_t>(item) >= items_.size()) {
      throw std::invalid_argument("allocation maps agent " + std::to_string(agent) + " to unknown item " +
                                  std::to_string(item));
    }
    if (used[item]) {
      throw std::invalid_argument("allocation is not a bijection: item " + std::to_string(item) +
                                  " assigned twice");
    }
    used[item] = 1;
  }
}

Allocation Allocation::identity(std::size_t n) {
  std::vector<int> items(n);
  std::iota(items.begin(), items.end(), 0);
  return Allocation(std::move(items));
}

// ---------------------------------------------------------------------------
// CoalitionalExchange

CoalitionalExchange::CoalitionalExchange(std::vector<int> members, std::vector<int> images) {
  if (members.size() != images.size()) throw std::invalid_argument("mu must map every coalition member");
  if (members.size() < 2) throw std::invalid_argument("a coalitional exchange needs at least two members");
  std::vector<std::size_t> order(members.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return members[l] < members[r]; });
  members_.reserve(members.size());
  images_.reserve(images.size());
  for (std::size_t k : order) {
    members_.push_back(members[k]);
    images_.push_back(images[k]);
  }
  for (std::size_t k = 0; k < members_.size(); ++k) {
    if (members_[k] < 0) throw std::invalid_argument("negative agent index in coalition");
    if (k > 0 && members_[k] == members_[k - 1]) {
      throw std::invalid_argument("agent " + std::to_string(members_[k]) + " appears twice in coalition");
    }
    if (images_[k] == members_[k]) {
      throw std::invalid_argument("mu has a fixed point at agent " + std::to_string(members_[k]));
    }
  }
  std::vector<int> sorted_images = images_;
  std::sort(sorted_images.begin(), sorted_images.end());
  if (sorted_images != members_) throw std::invalid_argument("mu is not a bijection on the coalition");
}

CoalitionalExchange CoalitionalExchange::swap(int i, int j) { return CoalitionalExchange({i, j}, {j, i}); }

CoalitionalExchange CoalitionalExchange::inverse() const {
  std::vector<int> inv(members_.size());
  for (std::size_t k = 0; k < members_.size(); ++k) {
    const auto pos = std::lower_bound(members_.begin(), members_.end(), images_[k]) - members_.begin();
    inv[pos] = members_[k];
  }
  return CoalitionalExchange(Trusted{}, members_, std::move(inv));
}

CoalitionalExchange make_exchange_unchecked(std::vector<int> members, std::vector<int> images) {
  return CoalitionalExchange(CoalitionalExchange::Trusted{}, std::move(members), std::move(images));
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

void require_agent(const MarketInstance& inst, int agent) {
  if (agent < 0 || static_cast<std::size_t>(agent) >= inst.size()) {
    throw std::out_of_range("agent index " + std::to_string(agent) + " out of range");
  }
}

void require_allocation(const MarketInstance& inst, const Allocation& alloc) {
  if (alloc.size() != inst.size()) {
    throw std::invalid_argument("allocation size " + std::to_string(alloc.size()) +
                                " does not match market size " + std::to_string(inst.size()));
  }
}

void require_exchange(const Allocation& alloc, const CoalitionalExchange& ex) {
  if (static_cast<std::size_t>(ex.members().back()) >= alloc.size()) {
    throw std::out_of_range("coalition member " + std::to_string(ex.members().back()) + " out of range");
  }
}

}  // namespace

Int utility(const MarketInstance& inst, const Allocation& alloc, int agent) {
  require_allocation(inst, alloc);
  require_agent(inst, agent);
  return detail::utility_at(inst, alloc.items(), agent);
}

Allocation apply_exchange(const Allocation& alloc, const CoalitionalExchange& ex) {
  require_exchange(alloc, ex);
  std::vector<int> items(alloc.items().begin(), alloc.items().end());
  for (std::size_t k = 0; k < ex.size(); ++k) items[ex.members()[k]] = alloc[ex.images()[k]];
  return Allocation(std::move(items));
}

Int exchange_cost_total(const MarketInstance& inst, const Allocation& alloc, const CoalitionalExchange& ex) {
  require_allocation(inst, alloc);
  require_exchange(alloc, ex);
  Int total = 0;
  for (std::size_t k = 0; k < ex.size(); ++k) {
    const int x = ex.members()[k];
    total += inst.cost(x, alloc[x], alloc[ex.images()[k]]);
  }
  return total;
}

bool is_permissible(const MarketInstance& inst, const Allocation& alloc, const CoalitionalExchange& ex) {
  return exchange_cost_total(inst, alloc, ex) >= 0;
}

std::vector<Int> net_utilities_after(const MarketInstance& inst, const Allocation& alloc,
                                     const CoalitionalExchange& ex) {
  require_allocation(inst, alloc);
  const Allocation after = apply_exchange(alloc, ex);
  std::vector<Int> net;
  net.reserve(ex.size());
  for (int x : ex.members()) {
    net.push_back(detail::utility_at(inst, after.items(), x) - inst.cost(x, alloc[x], after[x]));
  }
  return net;
}

bool is_blocking(const MarketInstance& inst, const Allocation& alloc, const CoalitionalExchange& ex) {
  if (!is_permissible(inst, alloc, ex)) return false;
  const std::vector<Int> net = net_utilities_after(inst, alloc, ex);
  for (std::size_t k = 0; k < ex.size(); ++k) {
    if (net[k] <= detail::utility_at(inst, alloc.items(), ex.members()[k])) return false;
  }
  return true;
}

Int potential(const MarketInstance& inst, const Allocation& alloc) {
  require_allocation(inst, alloc);
  Int phi = 0;
  const int n = static_cast<int>(inst.size());
  for (int i = 0; i < n; ++i) {
    phi += inst.valuation(i, alloc[i]) + detail::utility_at(inst, alloc.items(), i);
  }
  return phi;
}

Int potential_delta(const MarketInstance& inst, const Allocation& alloc, const CoalitionalExchange& ex) {
  require_allocation(inst, alloc);
  const Allocation after = apply_exchange(alloc, ex);
  std::vector<char> inside(inst.size(), 0);
  for (int x : ex.members()) inside[x] = 1;

  Int sum_after = 0;
  Int sum_before = 0;
  for (int x : ex.members()) {
    sum_after += detail::utility_at(inst, after.items(), x);
    sum_before += detail::utility_at(inst, alloc.items(), x);
  }
  const Int inside_after = detail::realized_inside_weight(inst, after.items(), ex.members(), inside);
  const Int inside_before = detail::realized_inside_weight(inst, alloc.items(), ex.members(), inside);
  return 2 * (sum_after - sum_before - inside_after + inside_before);
}

}  // namespace xmarket
