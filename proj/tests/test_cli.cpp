#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <unistd.h>

#include "support.hpp"
#include "xmarket/cli.hpp"
#include "xmarket/io.hpp"
#include "xmarket/reductions.hpp"

using namespace xmarket;
using namespace xmarket::testing;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "xmarket");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() / ("xmarket_cli_" + std::to_string(::getpid()) + "_" +
                                                       std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

const std::string kFixtures = XMARKET_FIXTURE_DIR;

}  // namespace

TEST_CASE("check on the two-agent fixture") {
  Run unstable = run({"check", kFixtures + "/two_agent.json", kFixtures + "/two_agent_ab.json", "--k", "2"});
  CHECK(unstable.code == kExitWitness);
  CHECK(unstable.out == "unstable k=2\nX=[i1,i2] mu=[i1->i2,i2->i1] cost_total=0 gains=[11>10,6>5]\n");

  Run stable = run({"check", kFixtures + "/two_agent.json", kFixtures + "/two_agent_ba.json", "--k", "2"});
  CHECK(stable.code == kExitOk);
  CHECK(stable.out == "stable k=2\n");

  Run pot = run({"potential", kFixtures + "/two_agent.json", kFixtures + "/two_agent_ab.json"});
  CHECK(pot.code == kExitOk);
  CHECK(pot.out == "potential=30\n");

  Run solved = run({"solve", "assignment", kFixtures + "/two_agent.json"});
  CHECK(solved.code == kExitOk);
  CHECK(io::load_allocation(solved.out) == Allocation({1, 0}));
}

TEST_CASE("solve local2 then check") {
  TempDir dir;
  for (int seed = 0; seed < 100; ++seed) {
    std::string market = dir / "m.json", alloc = dir / "a.json";
    std::string agents = std::to_string(2 + seed % 7);
    REQUIRE(run({"gen", "market", "--agents", agents, "--seed", std::to_string(seed), "-o", market}).code == 0);
    std::vector<std::string> solve{"solve", "local2", market, "-o", alloc};
    if (seed % 2) {
      solve.insert(solve.end(), {"--init", "random", "--seed", std::to_string(seed * 7)});
    }
    if (seed % 3 == 0) {
      solve.push_back("--pivot");
      solve.push_back("first");
    }
    REQUIRE(run(solve).code == kExitOk);
    Run check = run({"check", market, alloc, "--k", "2"});
    CHECK(check.code == kExitOk);
    CHECK(check.out == "stable k=2\n");
  }
}

TEST_CASE("max-cut pipeline on a degree-5 graph") {
  TempDir dir;
  std::vector<CutEdge> edges;
  for (int v = 1; v <= 5; ++v) edges.push_back({0, v, v});
  edges.push_back({1, 2, 3});
  edges.push_back({3, 4, 6});
  MaxCutInstance cut(6, edges);
  io::write_file(dir / "g.json", io::save_maxcut(cut));

  REQUIRE(run({"reduce", "maxcut", dir / "g.json", "--map", dir / "map.json", "-o", dir / "m.json"}).code == 0);
  REQUIRE(run({"solve", "local2", dir / "m.json", "-o", dir / "a.json"}).code == 0);
  Run rec = run({"recover-cut", dir / "m.json", dir / "map.json", dir / "a.json", "--graph", dir / "g.json"});
  CHECK(rec.code == kExitOk);
  CHECK(rec.err.find("local_maxcut=yes") != std::string::npos);
  CHECK(is_local_maxcut(cut, io::load_cut(rec.out)));
}

TEST_CASE("game commands") {
  TempDir dir;
  io::write_file(dir / "g.json", io::save_game(CoordinationGame(2, {{0, 1}}, 2, {{1, 2}, {1, 2}})));
  io::write_file(dir / "bad.json", io::save_profile({1, 2}));
  io::write_file(dir / "good.json", io::save_profile({1, 1}));

  Run no = run({"check-eq", dir / "g.json", dir / "bad.json", "--k", "1"});
  CHECK(no.code == kExitWitness);
  CHECK(no.out == "not-equilibrium k=1\nK=[0] t=[0:1->2] gains=[1>0]\n");
  CHECK(run({"check-eq", dir / "g.json", dir / "good.json", "--k", "2"}).code == kExitOk);

  // checkgame reduction agrees with check-eq
  for (const char* profile : {"bad.json", "good.json"}) {
    for (int k = 1; k <= 2; ++k) {
      Run red = run({"reduce", "checkgame", dir / "g.json", dir / profile, "--k", std::to_string(k), "--map",
                     dir / "cm.json", "--allocation-out", dir / "ca.json", "-o", dir / "cmk.json"});
      REQUIRE(red.code == 0);
      int level = *io::load_reduction_map(io::read_file(dir / "cm.json")).stability_level;
      Run chk = run({"check", dir / "cmk.json", dir / "ca.json", "--k", std::to_string(level)});
      Run eq = run({"check-eq", dir / "g.json", dir / profile, "--k", std::to_string(k)});
      CHECK(chk.code == eq.code);
    }
  }

  // game -> market -> local search -> profile
  REQUIRE(run({"reduce", "game", dir / "g.json", "--map", dir / "map.json", "-o", dir / "m.json"}).code == 0);
  REQUIRE(run({"solve", "local2", dir / "m.json", "--init", "random", "--seed", "3", "-o", dir / "a.json"}).code == 0);
  Run prof = run({"recover-profile", dir / "map.json", dir / "a.json"});
  REQUIRE(prof.code == kExitOk);
  io::write_file(dir / "p.json", prof.out);
  CHECK(run({"check-eq", dir / "g.json", dir / "p.json", "--k", "1"}).code == kExitOk);
}

TEST_CASE("trace output") {
  TempDir dir;
  Run r = run({"solve", "local2", kFixtures + "/two_agent.json", "--init", "given", "--initial",
               kFixtures + "/two_agent_ab.json", "--trace", dir / "t.txt"});
  CHECK(r.code == kExitOk);
  CHECK(io::read_file(dir / "t.txt") == "# step i j phi_before phi_after\n1 0 1 30 34\n");

  Run capped = run({"solve", "local2", kFixtures + "/two_agent.json", "--init", "given", "--initial",
                    kFixtures + "/two_agent_ab.json", "--max-steps", "0"});
  CHECK(capped.code == kExitWitness);
  CHECK(capped.err.find("--max-steps") != std::string::npos);
}

TEST_CASE("generators are deterministic") {
  for (const auto& kind : {"coordgame", "maxcut", "market"}) {
    Run a = run({"gen", kind, "--seed", "9"});
    Run b = run({"gen", kind, "--seed", "9"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != run({"gen", kind, "--seed", "10"}).out);
  }
  Run g = run({"gen", "coordgame", "--players", "5", "--strategies", "4", "--max-degree", "2", "--seed", "1"});
  CoordinationGame game = io::load_game(g.out);
  CHECK(game.size() == 5);
  CHECK(game.strategy_universe() == 4);
  CHECK(game.max_degree() <= 2);
  Run c = run({"gen", "maxcut", "--vertices", "8", "--max-degree", "5", "--seed", "1"});
  CHECK(io::load_maxcut(c.out).max_degree() <= 5);
}

TEST_CASE("errors exit with code 2") {
  TempDir dir;
  CHECK(run({}).code == kExitInvalid);
  CHECK(run({"frobnicate"}).code == kExitInvalid);
  CHECK(run({"check", kFixtures + "/two_agent.json", kFixtures + "/two_agent_ab.json"}).code == kExitInvalid);
  CHECK(run({"check", kFixtures + "/two_agent.json", kFixtures + "/two_agent_ab.json", "--k", "2", "--bogus"}).code ==
        kExitInvalid);
  CHECK(run({"check", kFixtures + "/two_agent.json", kFixtures + "/two_agent_ab.json", "--k", "3"}).code == kExitInvalid);
  CHECK(run({"potential", dir / "missing.json", kFixtures + "/two_agent_ab.json"}).code == kExitInvalid);
  CHECK(run({"solve", "local2", kFixtures + "/two_agent.json", "--seed", "4"}).code == kExitInvalid);
  CHECK(run({"solve", "local2", kFixtures + "/two_agent.json", "--pivot", "worst"}).code == kExitInvalid);

  io::write_file(dir / "broken.json", "{\"kind\": \"market\",");
  Run parse = run({"potential", dir / "broken.json", kFixtures + "/two_agent_ab.json"});
  CHECK(parse.code == kExitInvalid);
  CHECK(parse.err.find("parse error at byte") != std::string::npos);

  io::write_file(dir / "empty.json", R"({"kind":"market","version":1,"agents":0,"items":0,"valuations":[]})");
  Run empty = run({"potential", dir / "empty.json", kFixtures + "/two_agent_ab.json"});
  CHECK(empty.code == kExitInvalid);
  CHECK(empty.err.find("agents: must be >= 1") != std::string::npos);

  io::write_file(dir / "path.json", io::save_market(MarketInstance(3, {{0, 1, 1}}, {{0, 1}}, std::vector<Int>(9, 0),
                                                                    std::vector<CostSpec>(3))));
  Run mismatch = run({"solve", "assignment", dir / "path.json"});
  CHECK(mismatch.code == kExitInvalid);
  CHECK(mismatch.err.find("class mismatch") != std::string::npos);

  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("large checks warn about the candidate count") {
  TempDir dir;
  const int n = 12;
  std::vector<Int> vals(n * n, 0);
  vals[0 * n + 1] = 1;
  vals[1 * n + 0] = 1;
  io::write_file(dir / "m.json", io::save_market(MarketInstance(n, {}, {}, vals, std::vector<CostSpec>(n))));
  io::write_file(dir / "a.json", io::save_allocation(Allocation::identity(n)));
  Run r = run({"check", dir / "m.json", dir / "a.json", "--k", "12"});
  CHECK(r.code == kExitWitness);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK(r.out.find("X=[0,1] mu=[0->1,1->0]") != std::string::npos);
}
