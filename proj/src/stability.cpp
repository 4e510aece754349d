#include "xmarket/stability.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <functional>
#include <stdexcept>
#include <string>

#include "xmarket/detail/kernels.hpp"

namespace xmarket {

void validate_stability_level(const MarketInstance& inst, int k) {
  const auto n = static_cast<int>(inst.size());
  if (k < 2 || k > std::max(n, 2)) {
    throw std::invalid_argument("stability level k=" + std::to_string(k) + " outside [2, " +
                                std::to_string(std::max(n, 2)) + "]");
  }
}

double candidate_exchange_count(std::size_t n, int k) {
  double total = 0.0;
  double binom = 1.0;  // C(n, j)
  double derangements_prev = 1.0;  // D_0
  double derangements = 0.0;       // D_1
  for (int j = 1; j <= k && static_cast<std::size_t>(j) <= n; ++j) {
    binom = binom * static_cast<double>(n - static_cast<std::size_t>(j) + 1) / j;
    if (j >= 2) {
      const double next = (j - 1) * (derangements + derangements_prev);
      derangements_prev = derangements;
      derangements = next;
      total += binom * derangements;
    }
  }
  return total;
}

namespace {

// Per-thread working memory for the blocking search.
struct Scratch {
  std::vector<int> items;    // allocation being edited in place
  std::vector<int> members;  // current coalition
  std::vector<int> images;   // current mu, aligned with members
  std::vector<char> used;    // image slots taken, indexed by member position
};

class BlockingSearch {
 public:
  BlockingSearch(const MarketInstance& inst, const Allocation& alloc, int k)
      : inst_(inst), base_(alloc.items()), n_(static_cast<int>(inst.size())), k_(k) {
    base_utility_.resize(n_);
    for (int x = 0; x < n_; ++x) base_utility_[x] = detail::utility_at(inst_, base_, x);

    // x receiving pi(y) can only block if its best conceivable net utility,
    // v_x(pi(y)) + all incident weight - c_x(pi(x), pi(y)), beats u_x(pi).
    pair_ok_.assign(static_cast<std::size_t>(n_) * n_, 0);
    pair_cost_.assign(static_cast<std::size_t>(n_) * n_, 0);
    for (int x = 0; x < n_; ++x) {
      bool any = false;
      for (int y = 0; y < n_; ++y) {
        if (x == y) continue;
        const Int c = inst_.cost(x, base_[x], base_[y]);
        pair_cost_[index(x, y)] = c;
        const Int bound = inst_.valuation(x, base_[y]) + inst_.incident_weight(x) - c;
        if (bound > base_utility_[x]) {
          pair_ok_[index(x, y)] = 1;
          any = true;
        }
      }
      if (any) candidates_.push_back(x);
    }
  }

  // Coalitions are partitioned by their first two members (positions into
  // the candidate list); each part is contiguous in enumeration order.
  std::vector<std::pair<int, int>> prefixes() const {
    std::vector<std::pair<int, int>> out;
    const int c = static_cast<int>(candidates_.size());
    for (int p = 0; p < c; ++p) {
      for (int q = p + 1; q < c; ++q) out.emplace_back(p, q);
    }
    return out;
  }

  Scratch make_scratch() const {
    Scratch s;
    s.items.assign(base_.begin(), base_.end());
    s.members.reserve(k_);
    s.images.resize(k_);
    s.used.resize(k_);
    return s;
  }

  // Visits blocking exchanges whose coalition starts with the given prefix.
  // `emit(members, images)` returns false to stop; run_prefix then returns
  // false as well.
  template <class Emit>
  bool run_prefix(std::pair<int, int> prefix, Scratch& s, Emit&& emit) const {
    s.members.clear();
    s.members.push_back(candidates_[prefix.first]);
    s.members.push_back(candidates_[prefix.second]);
    return extend(prefix.second + 1, s, emit);
  }

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(x) * n_ + y; }

  template <class Emit>
  bool extend(int next, Scratch& s, Emit& emit) const {
    const std::size_t size = s.members.size();
    std::fill(s.used.begin(), s.used.begin() + size, 0);
    if (!derange(0, 0, s, emit)) return false;
    if (static_cast<int>(size) == k_) return true;
    for (int r = next; r < static_cast<int>(candidates_.size()); ++r) {
      s.members.push_back(candidates_[r]);
      const bool go_on = extend(r + 1, s, emit);
      s.members.pop_back();
      if (!go_on) return false;
    }
    return true;
  }

  template <class Emit>
  bool derange(std::size_t pos, Int cost, Scratch& s, Emit& emit) const {
    const std::size_t size = s.members.size();
    if (pos == size) {
      if (cost < 0 || !blocks(s)) return true;
      return emit(s.members, std::vector<int>(s.images.begin(), s.images.begin() + size));
    }
    const int x = s.members[pos];
    for (std::size_t t = 0; t < size; ++t) {
      if (t == pos || s.used[t]) continue;
      const int y = s.members[t];
      if (!pair_ok_[index(x, y)]) continue;
      s.used[t] = 1;
      s.images[pos] = y;
      const bool go_on = derange(pos + 1, cost + pair_cost_[index(x, y)], s, emit);
      s.used[t] = 0;
      if (!go_on) return false;
    }
    return true;
  }

  bool blocks(Scratch& s) const {
    const std::size_t size = s.members.size();
    for (std::size_t p = 0; p < size; ++p) s.items[s.members[p]] = base_[s.images[p]];
    bool blocking = true;
    for (std::size_t p = 0; p < size && blocking; ++p) {
      const int x = s.members[p];
      const Int net = detail::utility_at(inst_, s.items, x) - pair_cost_[index(x, s.images[p])];
      blocking = net > base_utility_[x];
    }
    for (int x : s.members) s.items[x] = base_[x];
    return blocking;
  }

  const MarketInstance& inst_;
  std::span<const int> base_;
  int n_;
  int k_;
  std::vector<Int> base_utility_;
  std::vector<char> pair_ok_;
  std::vector<Int> pair_cost_;
  std::vector<int> candidates_;
};

void require_matching_sizes(const MarketInstance& inst, const Allocation& alloc) {
  if (alloc.size() != inst.size()) {
    throw std::invalid_argument("allocation size does not match market size");
  }
}

}  // namespace

std::vector<CoalitionalExchange> enumerate_blocking(const MarketInstance& inst, const Allocation& alloc, int k) {
  require_matching_sizes(inst, alloc);
  validate_stability_level(inst, k);
  const BlockingSearch search(inst, alloc, k);
  const auto tasks = search.prefixes();
  std::vector<std::vector<CoalitionalExchange>> found(tasks.size());

#pragma omp parallel
  {
    Scratch scratch = search.make_scratch();
#pragma omp for schedule(dynamic)
    for (long t = 0; t < static_cast<long>(tasks.size()); ++t) {
      search.run_prefix(tasks[t], scratch, [&](const std::vector<int>& members, std::vector<int> images) {
        found[t].push_back(make_exchange_unchecked(members, std::move(images)));
        return true;
      });
    }
  }

  std::vector<CoalitionalExchange> out;
  for (auto& part : found) {
    for (auto& ex : part) out.push_back(std::move(ex));
  }
  return out;
}

StabilityReport check_k_stable(const MarketInstance& inst, const Allocation& alloc, int k) {
  require_matching_sizes(inst, alloc);
  validate_stability_level(inst, k);
  StabilityReport report;
  report.k = k;
  const BlockingSearch search(inst, alloc, k);
  const auto tasks = search.prefixes();
  const long task_count = static_cast<long>(tasks.size());
  std::vector<std::optional<CoalitionalExchange>> first(tasks.size());
  std::atomic<long> earliest{task_count};

#pragma omp parallel
  {
    Scratch scratch = search.make_scratch();
#pragma omp for schedule(dynamic)
    for (long t = 0; t < task_count; ++t) {
      if (t >= earliest.load(std::memory_order_relaxed)) continue;
      search.run_prefix(tasks[t], scratch, [&](const std::vector<int>& members, std::vector<int> images) {
        first[t] = make_exchange_unchecked(members, std::move(images));
        return false;
      });
      if (first[t]) {
        long seen = earliest.load(std::memory_order_relaxed);
        while (t < seen && !earliest.compare_exchange_weak(seen, t, std::memory_order_relaxed)) {
        }
      }
    }
  }

  const long hit = earliest.load();
  if (hit < task_count) {
    report.stable = false;
    report.witness = std::move(first[hit]);
  }
  return report;
}

namespace reference {

namespace {

// Calls visit(X, mu) for every exchange with |X| <= k in enumeration order
// until visit returns false.
void for_each_exchange(std::size_t n, int k,
                       const std::function<bool(const CoalitionalExchange&)>& visit) {
  std::vector<int> members;
  std::function<bool(int)> subsets = [&](int next) {
    if (members.size() >= 2) {
      std::vector<int> images = members;
      do {
        bool fixed_point = false;
        for (std::size_t p = 0; p < members.size(); ++p) fixed_point |= images[p] == members[p];
        if (!fixed_point && !visit(CoalitionalExchange(members, images))) return false;
      } while (std::next_permutation(images.begin(), images.end()));
    }
    if (static_cast<int>(members.size()) == k) return true;
    for (int r = next; r < static_cast<int>(n); ++r) {
      members.push_back(r);
      const bool go_on = subsets(r + 1);
      members.pop_back();
      if (!go_on) return false;
    }
    return true;
  };
  subsets(0);
}

}  // namespace

std::vector<CoalitionalExchange> enumerate_blocking(const MarketInstance& inst, const Allocation& alloc, int k) {
  require_matching_sizes(inst, alloc);
  validate_stability_level(inst, k);
  std::vector<CoalitionalExchange> out;
  for_each_exchange(inst.size(), k, [&](const CoalitionalExchange& ex) {
    if (is_blocking(inst, alloc, ex)) out.push_back(ex);
    return true;
  });
  return out;
}

StabilityReport check_k_stable(const MarketInstance& inst, const Allocation& alloc, int k) {
  require_matching_sizes(inst, alloc);
  validate_stability_level(inst, k);
  StabilityReport report;
  report.k = k;
  for_each_exchange(inst.size(), k, [&](const CoalitionalExchange& ex) {
    if (!is_blocking(inst, alloc, ex)) return true;
    report.stable = false;
    report.witness = ex;
    return false;
  });
  return report;
}

}  // namespace reference

}  // namespace xmarket
