#include "xmarket/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "xmarket/assignment.hpp"
#include "xmarket/coordination.hpp"
#include "xmarket/generators.hpp"
#include "xmarket/io.hpp"
#include "xmarket/local_search.hpp"
#include "xmarket/reductions.hpp"
#include "xmarket/stability.hpp"

namespace xmarket {

namespace {

constexpr double kCandidateWarning = 1e8;

struct Options {
  // gen
  std::size_t players = 3, vertices = 6, agents = 5;
  int strategies = 3;
  int max_degree = -1;
  Int max_weight = 7;
  bool non_graphical = false;
  std::uint64_t seed = 0;
  // shared paths
  std::string market, allocation, game, profile, maxcut, map, output, map_output, allocation_output, trace;
  int k = 2;
  // solve local2
  std::string pivot = "best", init = "identity";
  std::optional<std::uint64_t> search_seed;
  std::optional<std::int64_t> max_steps;
};

// Writes `text` to `path`, or to `out` when no path was given.
void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty()) {
    out << text;
  } else {
    io::write_file(path, text);
  }
}

std::string agent_label(const MarketInstance& m, int agent) {
  return m.agent_names().empty() ? std::to_string(agent) : m.agent_names()[agent];
}

std::string list(const std::vector<std::string>& parts) {
  std::string s = "[";
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
  return s + "]";
}

std::string format_witness(const MarketInstance& m, const Allocation& alloc, const CoalitionalExchange& ex) {
  std::vector<std::string> members, mu, gains;
  std::vector<Int> after = net_utilities_after(m, alloc, ex);
  for (std::size_t t = 0; t < ex.size(); ++t) {
    int x = ex.members()[t];
    members.push_back(agent_label(m, x));
    mu.push_back(agent_label(m, x) + "->" + agent_label(m, ex.images()[t]));
    gains.push_back(std::to_string(after[t]) + ">" + std::to_string(utility(m, alloc, x)));
  }
  return "X=" + list(members) + " mu=" + list(mu) + " cost_total=" + std::to_string(exchange_cost_total(m, alloc, ex)) +
         " gains=" + list(gains);
}

int cmd_gen_coordgame(const Options& o, std::ostream& out) {
  GameGenOptions g;
  g.players = o.players;
  g.strategies = o.strategies;
  g.max_degree = o.max_degree < 0 ? 2 : o.max_degree;
  g.seed = o.seed;
  emit(out, o.output, io::save_game(generate_coordination_game(g)));
  return kExitOk;
}

int cmd_gen_maxcut(const Options& o, std::ostream& out) {
  MaxCutGenOptions g;
  g.vertices = o.vertices;
  g.max_degree = o.max_degree < 0 ? 5 : o.max_degree;
  g.max_weight = o.max_weight;
  g.seed = o.seed;
  emit(out, o.output, io::save_maxcut(generate_maxcut(g)));
  return kExitOk;
}

int cmd_gen_market(const Options& o, std::ostream& out) {
  MarketGenOptions g;
  g.agents = o.agents;
  g.max_degree = o.max_degree < 0 ? 4 : o.max_degree;
  g.graphical = !o.non_graphical;
  g.seed = o.seed;
  emit(out, o.output, io::save_market(generate_market(g)));
  return kExitOk;
}

int cmd_reduce_game(const Options& o, std::ostream& out) {
  CoordinationGame game = io::load_game(io::read_file(o.game));
  GameReduction r = reduce_game_to_market(game);
  emit(out, o.output, io::save_market(r.market));
  if (!o.map_output.empty()) io::write_file(o.map_output, io::save_reduction_map({"coordgame", r.map, {}, {}}));
  return kExitOk;
}

int cmd_reduce_checkgame(const Options& o, std::ostream& out) {
  CoordinationGame game = io::load_game(io::read_file(o.game));
  StrategyProfile profile = io::load_profile(io::read_file(o.profile));
  CheckReduction r = reduce_check_instance(game, profile, o.k);
  emit(out, o.output, io::save_market(r.market));
  if (!o.map_output.empty()) {
    io::write_file(o.map_output, io::save_reduction_map({"checkgame", r.map, {}, r.stability_level}));
  }
  if (!o.allocation_output.empty()) io::write_file(o.allocation_output, io::save_allocation(r.allocation));
  return kExitOk;
}

int cmd_reduce_maxcut(const Options& o, std::ostream& out) {
  MaxCutInstance cut = io::load_maxcut(io::read_file(o.maxcut));
  MaxCutReduction r = reduce_maxcut_to_market(cut);
  emit(out, o.output, io::save_market(r.market));
  if (!o.map_output.empty()) io::write_file(o.map_output, io::save_reduction_map({"maxcut", {}, r.map, {}}));
  return kExitOk;
}

int cmd_solve_local2(const Options& o, std::ostream& out, std::ostream& err) {
  MarketInstance market = io::load_market(io::read_file(o.market));
  SearchConfig config;
  config.pivot = o.pivot == "first" ? PivotRule::kFirstImprovement : PivotRule::kBestImprovement;
  if (o.init == "random") {
    config.init = InitKind::kRandom;
  } else if (o.init == "given") {
    config.init = InitKind::kGiven;
    if (o.allocation.empty()) throw std::invalid_argument("--init given requires --initial");
    config.initial = io::load_allocation(io::read_file(o.allocation), &market);
  }
  if (config.init != InitKind::kGiven && !o.allocation.empty()) {
    throw std::invalid_argument("--initial requires --init given");
  }
  config.seed = o.search_seed;
  config.max_steps = o.max_steps;
  SearchResult r = find_2_stable(market, config);
  emit(out, o.output, io::save_allocation(r.allocation));
  if (!o.trace.empty()) {
    std::ofstream trace(o.trace, std::ios::trunc);
    if (!trace) throw std::runtime_error("cannot write '" + o.trace + "'");
    write_trace(trace, r.trace);
  }
  err << "steps=" << r.step_count() << " potential=" << r.initial_potential << "->"
      << potential(market, r.allocation) << "\n";
  if (!r.complete) {
    err << "warning: stopped after --max-steps; the allocation is not 2-stable\n";
    return kExitWitness;
  }
  return kExitOk;
}

int cmd_solve_assignment(const Options& o, std::ostream& out) {
  MarketInstance market = io::load_market(io::read_file(o.market));
  emit(out, o.output, io::save_allocation(solve_core_stable(market)));
  return kExitOk;
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  MarketInstance market = io::load_market(io::read_file(o.market));
  Allocation alloc = io::load_allocation(io::read_file(o.allocation), &market);
  validate_stability_level(market, o.k);
  double candidates = candidate_exchange_count(market.size(), o.k);
  if (candidates > kCandidateWarning) {
    std::ostringstream msg;
    msg << "warning: up to " << candidates << " candidate exchanges to examine\n";
    err << msg.str();
  }
  StabilityReport report = check_k_stable(market, alloc, o.k);
  if (report.stable) {
    out << "stable k=" << report.k << "\n";
    return kExitOk;
  }
  out << "unstable k=" << report.k << "\n" << format_witness(market, alloc, *report.witness) << "\n";
  return kExitWitness;
}

int cmd_check_eq(const Options& o, std::ostream& out) {
  CoordinationGame game = io::load_game(io::read_file(o.game));
  StrategyProfile profile = io::load_profile(io::read_file(o.profile));
  DeviationReport report = check_k_equilibrium(game, profile, o.k);
  if (report.is_equilibrium) {
    out << "equilibrium k=" << report.k << "\n";
    return kExitOk;
  }
  const Deviation& d = *report.witness;
  std::vector<std::string> members, moves, gains;
  for (int i : d.coalition) {
    members.push_back(std::to_string(i));
    moves.push_back(std::to_string(i) + ":" + std::to_string(profile[i]) + "->" + std::to_string(d.target[i]));
    gains.push_back(std::to_string(payoff(game, d.target, i)) + ">" + std::to_string(payoff(game, profile, i)));
  }
  out << "not-equilibrium k=" << report.k << "\nK=" << list(members) << " t=" << list(moves)
      << " gains=" << list(gains) << "\n";
  return kExitWitness;
}

int cmd_recover_cut(const Options& o, std::ostream& out, std::ostream& err) {
  MarketInstance market = io::load_market(io::read_file(o.market));
  io::ReductionMapFile map = io::load_reduction_map(io::read_file(o.map));
  if (!map.maxcut) throw std::invalid_argument("reduction map does not come from a max-cut instance");
  Allocation alloc = io::load_allocation(io::read_file(o.allocation), &market);
  CutAssignment x = recover_cut(market, *map.maxcut, alloc);
  emit(out, o.output, io::save_cut(x));
  if (!o.maxcut.empty()) {
    MaxCutInstance cut = io::load_maxcut(io::read_file(o.maxcut));
    bool local = is_local_maxcut(cut, x);
    err << "cut_value=" << cut_value(cut, x) << " local_maxcut=" << (local ? "yes" : "no") << "\n";
    if (!local) return kExitWitness;
  }
  return kExitOk;
}

int cmd_recover_profile(const Options& o, std::ostream& out) {
  io::ReductionMapFile map = io::load_reduction_map(io::read_file(o.map));
  if (!map.game) throw std::invalid_argument("reduction map does not come from a coordination game");
  Allocation alloc = io::load_allocation(io::read_file(o.allocation));
  emit(out, o.output, io::save_profile(allocation_to_profile(*map.game, alloc)));
  return kExitOk;
}

int cmd_potential(const Options& o, std::ostream& out) {
  MarketInstance market = io::load_market(io::read_file(o.market));
  Allocation alloc = io::load_allocation(io::read_file(o.allocation), &market);
  out << "potential=" << potential(market, alloc) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  std::function<int()> action;

  CLI::App app{"Graphical one-sided matching markets with exchange costs"};
  app.name("xmarket");
  app.require_subcommand(1);

  auto seed_opt = [&](CLI::App* c) { c->add_option("--seed", o.seed, "Generator seed")->required(); };
  auto out_opt = [&](CLI::App* c) { c->add_option("-o,--output", o.output, "Output file (default: stdout)"); };

  CLI::App* gen = app.add_subcommand("gen", "Generate a seeded random instance");
  gen->require_subcommand(1);
  {
    auto* c = gen->add_subcommand("coordgame", "Random network coordination game");
    c->add_option("--players", o.players)->check(CLI::PositiveNumber);
    c->add_option("--strategies", o.strategies, "Strategy universe size m")->check(CLI::PositiveNumber);
    c->add_option("--max-degree", o.max_degree)->check(CLI::NonNegativeNumber);
    seed_opt(c);
    out_opt(c);
    c->callback([&] { action = [&] { return cmd_gen_coordgame(o, out); }; });
  }
  {
    auto* c = gen->add_subcommand("maxcut", "Random weighted Local Max-Cut instance");
    c->add_option("--vertices", o.vertices)->check(CLI::PositiveNumber);
    c->add_option("--max-degree", o.max_degree)->check(CLI::NonNegativeNumber);
    c->add_option("--max-weight", o.max_weight)->check(CLI::PositiveNumber);
    seed_opt(c);
    out_opt(c);
    c->callback([&] { action = [&] { return cmd_gen_maxcut(o, out); }; });
  }
  {
    auto* c = gen->add_subcommand("market", "Random market with dense costs");
    c->add_option("--agents", o.agents)->check(CLI::PositiveNumber);
    c->add_option("--max-degree", o.max_degree)->check(CLI::NonNegativeNumber);
    c->add_flag("--non-graphical", o.non_graphical, "No agent or item edges");
    seed_opt(c);
    out_opt(c);
    c->callback([&] { action = [&] { return cmd_gen_market(o, out); }; });
  }

  CLI::App* reduce = app.add_subcommand("reduce", "Build a market from another problem");
  reduce->require_subcommand(1);
  {
    auto* c = reduce->add_subcommand("game", "Coordination game -> market");
    c->add_option("game", o.game, "Game file")->required();
    c->add_option("--map", o.map_output, "Write the reduction map here");
    out_opt(c);
    c->callback([&] { action = [&] { return cmd_reduce_game(o, out); }; });
  }
  {
    auto* c = reduce->add_subcommand("checkgame", "Game + profile + k -> cost-free market + allocation");
    c->add_option("game", o.game, "Game file")->required();
    c->add_option("profile", o.profile, "Profile file")->required();
    c->add_option("--k", o.k, "Coalition size bound")->required()->check(CLI::PositiveNumber);
    c->add_option("--map", o.map_output, "Write the reduction map here");
    c->add_option("--allocation-out", o.allocation_output, "Write the allocation here");
    out_opt(c);
    c->callback([&] { action = [&] { return cmd_reduce_checkgame(o, out); }; });
  }
  {
    auto* c = reduce->add_subcommand("maxcut", "Local Max-Cut instance -> market");
    c->add_option("maxcut", o.maxcut, "Max-cut file")->required();
    c->add_option("--map", o.map_output, "Write the reduction map here");
    out_opt(c);
    c->callback([&] { action = [&] { return cmd_reduce_maxcut(o, out); }; });
  }

  CLI::App* solve = app.add_subcommand("solve", "Compute a stable allocation");
  solve->require_subcommand(1);
  {
    auto* c = solve->add_subcommand("local2", "2-stable allocation by potential ascent");
    c->add_option("market", o.market, "Market file")->required();
    c->add_option("--pivot", o.pivot)->check(CLI::IsMember({"best", "first"}));
    c->add_option("--init", o.init)->check(CLI::IsMember({"identity", "random", "given"}));
    c->add_option("--initial", o.allocation, "Start allocation for --init given");
    c->add_option("--seed", o.search_seed, "Seed for --init random");
    c->add_option("--max-steps", o.max_steps)->check(CLI::NonNegativeNumber);
    c->add_option("--trace", o.trace, "Write one line per step here");
    out_opt(c);
    c->callback([&] { action = [&] { return cmd_solve_local2(o, out, err); }; });
  }
  {
    auto* c = solve->add_subcommand("assignment", "Core-stable allocation for non-graphical markets");
    c->add_option("market", o.market, "Market file")->required();
    out_opt(c);
    c->callback([&] { action = [&] { return cmd_solve_assignment(o, out); }; });
  }

  {
    auto* c = app.add_subcommand("check", "Decide k-stability of an allocation");
    c->add_option("market", o.market, "Market file")->required();
    c->add_option("allocation", o.allocation, "Allocation file")->required();
    c->add_option("--k", o.k, "Coalition size bound")->required();
    c->callback([&] { action = [&] { return cmd_check(o, out, err); }; });
  }
  {
    auto* c = app.add_subcommand("check-eq", "Decide whether a profile is a k-equilibrium");
    c->add_option("game", o.game, "Game file")->required();
    c->add_option("profile", o.profile, "Profile file")->required();
    c->add_option("--k", o.k, "Coalition size bound")->required();
    c->callback([&] { action = [&] { return cmd_check_eq(o, out); }; });
  }
  {
    auto* c = app.add_subcommand("recover-cut", "Cut held by the vertex agents of a reduced market");
    c->add_option("market", o.market, "Reduced market file")->required();
    c->add_option("map", o.map, "Reduction map file")->required();
    c->add_option("allocation", o.allocation, "Allocation file")->required();
    c->add_option("--graph", o.maxcut, "Original max-cut file; reports local optimality");
    out_opt(c);
    c->callback([&] { action = [&] { return cmd_recover_cut(o, out, err); }; });
  }
  {
    auto* c = app.add_subcommand("recover-profile", "Strategy profile of a valid reduced allocation");
    c->add_option("map", o.map, "Reduction map file")->required();
    c->add_option("allocation", o.allocation, "Allocation file")->required();
    out_opt(c);
    c->callback([&] { action = [&] { return cmd_recover_profile(o, out); }; });
  }
  {
    auto* c = app.add_subcommand("potential", "Potential of an allocation");
    c->add_option("market", o.market, "Market file")->required();
    c->add_option("allocation", o.allocation, "Allocation file")->required();
    c->callback([&] { action = [&] { return cmd_potential(o, out); }; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    return action();
  } catch (const io::ParseError& e) {
    err << "error: parse error at byte " << e.position() << ": " << e.what() << "\n";
  } catch (const io::ValidationError& e) {
    err << "error: invalid input at " << e.path() << ": " << e.rule() << "\n";
  } catch (const ClassMismatch& e) {
    err << "error: class mismatch: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitInvalid;
}

}  // namespace xmarket
