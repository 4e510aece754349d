#include "xmarket/coordination.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <string>

namespace xmarket {

CoordinationGame::CoordinationGame(std::size_t players, std::vector<PlayerEdge> edges, int m,
                                   std::vector<std::vector<int>> strategy_sets)
    : m_(m), edges_(std::move(edges)), strategy_sets_(std::move(strategy_sets)) {
  if (players < 1) throw std::invalid_argument("a game needs at least one player");
  if (m_ < 1) throw std::invalid_argument("strategy universe size m must be positive");
  if (strategy_sets_.size() != players) throw std::invalid_argument("one strategy set per player required");
  for (std::size_t i = 0; i < players; ++i) {
    auto& set = strategy_sets_[i];
    if (set.empty()) throw std::invalid_argument("strategy set of player " + std::to_string(i) + " is empty");
    std::sort(set.begin(), set.end());
    for (std::size_t p = 0; p < set.size(); ++p) {
      if (set[p] < 1 || set[p] > m_) {
        throw std::invalid_argument("strategy " + std::to_string(set[p]) + " of player " + std::to_string(i) +
                                    " outside [1, m]");
      }
      if (p > 0 && set[p] == set[p - 1]) {
        throw std::invalid_argument("strategy set of player " + std::to_string(i) + " repeats " +
                                    std::to_string(set[p]));
      }
    }
  }
  const int n = static_cast<int>(players);
  for (PlayerEdge& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) throw std::invalid_argument("edge references unknown player");
    if (e.u == e.v) throw std::invalid_argument("self-loop at player " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const PlayerEdge& l, const PlayerEdge& r) { return l.u != r.u ? l.u < r.u : l.v < r.v; });
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw std::invalid_argument("duplicate edge in game graph");
  }
  adjacency_.resize(players);
  for (const PlayerEdge& e : edges_) {
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
}

int CoordinationGame::max_degree() const {
  int best = 0;
  for (const auto& adj : adjacency_) best = std::max(best, static_cast<int>(adj.size()));
  return best;
}

bool CoordinationGame::allows(int player, int strategy) const {
  const auto& set = strategy_sets_[player];
  return std::binary_search(set.begin(), set.end(), strategy);
}

void validate_profile(const CoordinationGame& game, const StrategyProfile& profile) {
  if (profile.size() != game.size()) {
    throw std::invalid_argument("profile has " + std::to_string(profile.size()) + " entries for " +
                                std::to_string(game.size()) + " players");
  }
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (!game.allows(static_cast<int>(i), profile[i])) {
      throw std::invalid_argument("player " + std::to_string(i) + " plays " + std::to_string(profile[i]) +
                                  " outside its strategy set");
    }
  }
}

int payoff(const CoordinationGame& game, const StrategyProfile& profile, int player) {
  int count = 0;
  for (int other : game.neighbors(player)) count += profile[other] == profile[player] ? 1 : 0;
  return count;
}

namespace {

void validate_level(const CoordinationGame& game, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > game.size()) {
    throw std::invalid_argument("equilibrium level k=" + std::to_string(k) + " outside [1, " +
                                std::to_string(game.size()) + "]");
  }
}

// Depth-first deviation search over coalitions drawn from `candidates`.
class DeviationSearch {
 public:
  DeviationSearch(const CoordinationGame& game, const StrategyProfile& profile, int k,
                  std::vector<int> candidates)
      : game_(game), base_(profile), k_(k), candidates_(std::move(candidates)) {
    base_payoff_.resize(game.size());
    for (std::size_t i = 0; i < game.size(); ++i) base_payoff_[i] = payoff(game, profile, static_cast<int>(i));
  }

  std::size_t task_count() const { return candidates_.size(); }

  // First profitable deviation whose coalition starts at candidates_[first].
  std::optional<Deviation> run(std::size_t first) const {
    StrategyProfile work = base_;
    std::vector<int> coalition{candidates_[first]};
    std::optional<Deviation> found;
    extend(first + 1, coalition, work, found);
    return found;
  }

 private:
  bool extend(std::size_t next, std::vector<int>& coalition, StrategyProfile& work,
              std::optional<Deviation>& found) const {
    if (assign(0, coalition, work, found)) return true;
    if (static_cast<int>(coalition.size()) == k_) return false;
    for (std::size_t r = next; r < candidates_.size(); ++r) {
      coalition.push_back(candidates_[r]);
      const bool done = extend(r + 1, coalition, work, found);
      coalition.pop_back();
      if (done) return true;
    }
    return false;
  }

  // Mixed-radix walk over alternatives, first member most significant.
  bool assign(std::size_t pos, const std::vector<int>& coalition, StrategyProfile& work,
              std::optional<Deviation>& found) const {
    if (pos == coalition.size()) {
      for (int i : coalition) {
        if (payoff(game_, work, i) <= base_payoff_[i]) return false;
      }
      found = Deviation{coalition, work};
      return true;
    }
    const int player = coalition[pos];
    bool done = false;
    for (int s : game_.strategy_set(player)) {
      if (s == base_[player]) continue;
      work[player] = s;
      if (assign(pos + 1, coalition, work, found)) {
        done = true;
        break;
      }
    }
    work[player] = base_[player];
    return done;
  }

  const CoordinationGame& game_;
  const StrategyProfile& base_;
  int k_;
  std::vector<int> candidates_;
  std::vector<int> base_payoff_;
};

}  // namespace

DeviationReport check_k_equilibrium(const CoordinationGame& game, const StrategyProfile& profile, int k) {
  validate_profile(game, profile);
  validate_level(game, k);

  // A player already matching every neighbour, or with a single strategy,
  // cannot be part of a profitable deviation.
  std::vector<int> candidates;
  for (std::size_t i = 0; i < game.size(); ++i) {
    const int p = static_cast<int>(i);
    if (game.strategy_set(p).size() > 1 && payoff(game, profile, p) < game.degree(p)) candidates.push_back(p);
  }
  const DeviationSearch search(game, profile, k, std::move(candidates));
  const long tasks = static_cast<long>(search.task_count());
  std::vector<std::optional<Deviation>> found(search.task_count());
  std::atomic<long> earliest{tasks};

#pragma omp parallel for schedule(dynamic)
  for (long t = 0; t < tasks; ++t) {
    if (t >= earliest.load(std::memory_order_relaxed)) continue;
    found[t] = search.run(static_cast<std::size_t>(t));
    if (found[t]) {
      long seen = earliest.load(std::memory_order_relaxed);
      while (t < seen && !earliest.compare_exchange_weak(seen, t, std::memory_order_relaxed)) {
      }
    }
  }

  DeviationReport report;
  report.k = k;
  const long hit = earliest.load();
  if (hit < tasks) {
    report.is_equilibrium = false;
    report.witness = std::move(found[hit]);
  }
  return report;
}

namespace reference {

DeviationReport check_k_equilibrium(const CoordinationGame& game, const StrategyProfile& profile, int k) {
  validate_profile(game, profile);
  validate_level(game, k);
  std::vector<int> everyone(game.size());
  for (std::size_t i = 0; i < game.size(); ++i) everyone[i] = static_cast<int>(i);
  const DeviationSearch search(game, profile, k, everyone);
  DeviationReport report;
  report.k = k;
  for (std::size_t t = 0; t < search.task_count(); ++t) {
    if (auto dev = search.run(t)) {
      report.is_equilibrium = false;
      report.witness = std::move(dev);
      break;
    }
  }
  return report;
}

}  // namespace reference

}  // namespace xmarket
