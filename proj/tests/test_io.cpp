#include <doctest.h>

#include <filesystem>

#include "support.hpp"
#include "xmarket/generators.hpp"
#include "xmarket/io.hpp"

using namespace xmarket;
using namespace xmarket::testing;

namespace {

std::string rule_of(const std::string& text) {
  try {
    io::load_market(text);
  } catch (const io::ValidationError& e) {
    return e.path() + " | " + e.rule();
  }
  return "accepted";
}

const char* kTiny = R"({"kind":"market","version":1,"agents":2,"items":2,"valuations":[[1,2],[3,4]]})";

}  // namespace

TEST_CASE("two-agent fixture round trip") {
  MarketInstance m = two_agent_market();
  std::string text = io::save_market(m);
  MarketInstance back = io::load_market(text);
  CHECK(back == m);
  CHECK(back.agent_names() == std::vector<std::string>{"i1", "i2"});
  CHECK(io::save_market(back) == text);

  MarketInstance from_file = io::load_market(io::read_file(XMARKET_FIXTURE_DIR "/two_agent.json"));
  CHECK(from_file == m);
}

TEST_CASE("market defaults and cost forms") {
  MarketInstance tiny = io::load_market(kTiny);
  CHECK(tiny.size() == 2);
  CHECK(tiny.costs()[0].kind() == CostSpec::Kind::kTrivial);
  CHECK(tiny.valuation(1, 0) == 3);

  MarketInstance shared = io::load_market(
      R"({"kind":"market","version":1,"agents":2,"items":2,"valuations":[[0,0],[0,0]],"costs":{"trivial":true}})");
  CHECK(shared.costs()[1].kind() == CostSpec::Kind::kTrivial);

  std::string part = R"({"kind":"market","version":1,"agents":2,"items":2,"valuations":[[0,0],[0,0]],
    "costs":[{"partitioned":{"labels":[0,1],"own":0,"table":[[-5,5],[-20,1]]}}, [[0,3],[4,0]]]})";
  MarketInstance p = io::load_market(part);
  CHECK(p.costs()[0].kind() == CostSpec::Kind::kPartitioned);
  CHECK(p.cost(0, 0, 1) == -20);
  CHECK(p.cost(0, 1, 0) == 5);
  CHECK(p.cost(1, 1, 0) == 4);
  CHECK(io::load_market(io::save_market(p)) == p);
}

TEST_CASE("names in edges and allocations") {
  std::string text = R"({"kind":"market","version":1,"agents":3,"items":3,
    "agent_names":["ann","bob","cy"],"item_names":["x","y","z"],
    "agent_edges":[["bob","ann",4]],"item_edges":[["z","x"]],
    "valuations":[[0,0,0],[0,0,0],[0,0,0]]})";
  MarketInstance m = io::load_market(text);
  CHECK(m.agent_edges() == std::vector<AgentEdge>{{0, 1, 4}});
  CHECK(m.item_edges() == std::vector<ItemEdge>{{0, 2}});

  Allocation a = io::load_allocation(R"({"kind":"allocation","version":1,"assignment":["z",0,"y"]})", &m);
  CHECK(a == Allocation({2, 0, 1}));

  CHECK_THROWS_AS(io::load_allocation(R"({"kind":"allocation","version":1,"assignment":["z","x"]})", &m),
                  io::ValidationError);
  CHECK_THROWS_AS(io::load_allocation(R"({"kind":"allocation","version":1,"assignment":["q",0,1]})", &m),
                  io::ValidationError);

  std::string bad_name = R"({"kind":"market","version":1,"agents":2,"items":2,"agent_names":["a","b"],
    "item_names":["x","y"],"agent_edges":[["a","c",1]],"valuations":[[0,0],[0,0]]})";
  CHECK(rule_of(bad_name).rfind("agent_edges[0][1] | unknown name", 0) == 0);
}

TEST_CASE("validation errors carry the field path and rule") {
  CHECK(rule_of(R"({"kind":"market","version":1,"agents":0,"items":0,"valuations":[]})") == "agents | must be >= 1");
  CHECK(rule_of(R"({"kind":"market","version":1,"agents":2,"items":3,"valuations":[[1,2],[3,4]]})")
            .find("numbers of agents and items must be equal") != std::string::npos);
  CHECK(rule_of(R"({"kind":"market","version":1,"agents":2,"items":2,"valuations":[[1,2,5],[3,4,5]]})")
            .find("numbers of agents and items must be equal") != std::string::npos);
  CHECK(rule_of(R"({"kind":"market","version":1,"agents":2,"items":2,"valuations":[[1,2],[3,4.5]]})") ==
        "valuations[1][1] | must be an integer (fractional values are not allowed)");
  CHECK(rule_of(R"({"kind":"market","version":1,"agents":2,"items":2,"valuations":[[1,2],[3,4.0]]})")
            .rfind("valuations[1][1]", 0) == 0);
  CHECK(rule_of(R"({"kind":"market","version":1,"agents":2,"items":2,"valuations":[[1,2],[3,"4"]]})") ==
        "valuations[1][1] | must be an integer");
  CHECK(rule_of(R"({"kind":"market","version":1,"agents":2,"items":2,"valuations":[[1,2],[3,-4]]})") ==
        "valuations[1][1] | valuations must be >= 0");
  CHECK(rule_of(R"({"kind":"market","version":1,"agents":2,"items":2,"valuations":[[1,2],[3,18446744073709551615]]})") ==
        "valuations[1][1] | integer out of range");
  CHECK(rule_of(R"({"kind":"market","version":1,"agents":2,"items":2})") == "valuations | required field missing");
  CHECK(rule_of(R"({"kind":"market","version":2,"agents":2,"items":2,"valuations":[[1,2],[3,4]]})")
            .rfind("version |", 0) == 0);
  CHECK(rule_of(R"({"kind":"game","version":1})").rfind("kind |", 0) == 0);
  CHECK(rule_of(R"([1,2])") == "$ | document must be a JSON object");
  CHECK(rule_of(R"({"kind":"market","version":1,"agents":2,"items":2,"valuations":[[1,2],[3,4]],
    "agent_edges":[[0,1,0]]})").rfind("market |", 0) == 0);
  CHECK(rule_of(R"({"kind":"market","version":1,"agents":2,"items":2,"valuations":[[1,2],[3,4]],
    "costs":[[[0,1],[1,0]]]})") == "costs | must have 2 entries");
  CHECK(rule_of(R"({"kind":"market","version":1,"agents":2,"items":2,"valuations":[[1,2],[3,4]],
    "costs":[{"trivial":false},{"trivial":true}]})") == "costs[0].trivial | must be true");
}

TEST_CASE("parse errors carry the byte position") {
  try {
    io::load_market(R"({"kind": "market", "version": 1,, })");
    FAIL("expected a parse error");
  } catch (const io::ParseError& e) {
    CHECK(e.position() == 33);
  }
  CHECK_THROWS_AS(io::load_market("{\"agents\": NaN}"), io::ParseError);
  CHECK_THROWS_AS(io::peek_kind(""), io::ParseError);
  CHECK(io::peek_kind(kTiny) == "market");
}

TEST_CASE("random markets round trip") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    MarketGenOptions opt;
    opt.agents = 1 + seed % 8;
    opt.graphical = seed % 3 != 0;
    opt.seed = seed;
    MarketInstance m = generate_market(opt);
    std::string text = io::save_market(m);
    MarketInstance back = io::load_market(text);
    CHECK(back == m);
    CHECK(io::save_market(back) == text);
  }
}

TEST_CASE("games, cuts and solutions round trip") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GameGenOptions g;
    g.players = 1 + seed % 6;
    g.seed = seed;
    CoordinationGame game = generate_coordination_game(g);
    std::string gtext = io::save_game(game);
    CHECK(io::load_game(gtext) == game);
    CHECK(io::save_game(io::load_game(gtext)) == gtext);

    MaxCutGenOptions c;
    c.vertices = 1 + seed % 8;
    c.seed = seed;
    MaxCutInstance cut = generate_maxcut(c);
    std::string ctext = io::save_maxcut(cut);
    CHECK(io::load_maxcut(ctext) == cut);
    CHECK(io::save_maxcut(io::load_maxcut(ctext)) == ctext);
  }
  Allocation a({2, 0, 1});
  CHECK(io::load_allocation(io::save_allocation(a)) == a);
  StrategyProfile s{3, 1, 2};
  CHECK(io::load_profile(io::save_profile(s)) == s);
  CutAssignment x{1, 0, 0, 1};
  CHECK(io::load_cut(io::save_cut(x)) == x);
  CHECK_THROWS_AS(io::load_cut(R"({"kind":"cut","version":1,"assignment":[0,2]})"), io::ValidationError);
  CHECK_THROWS_AS(io::load_allocation(R"({"kind":"allocation","version":1,"assignment":[0,0]})"),
                  io::ValidationError);
}

TEST_CASE("game validation goes through the loader") {
  CHECK_THROWS_AS(io::load_game(R"({"kind":"coordgame","version":1,"players":2,"m":2,"edges":[[0,1]],
    "strategy_sets":[[1],[3]]})"), io::ValidationError);
  CHECK_THROWS_AS(io::load_game(R"({"kind":"coordgame","version":1,"players":2,"m":2,"edges":[[0,0]],
    "strategy_sets":[[1],[2]]})"), io::ValidationError);
  CHECK_THROWS_AS(io::load_maxcut(R"({"kind":"maxcut","version":1,"vertices":2,"edges":[[0,1,1.5]]})"),
                  io::ValidationError);
}

TEST_CASE("reduction maps round trip") {
  CoordinationGame game(2, {{0, 1}}, 3, {{1, 3}, {2}});
  GameReduction r = reduce_game_to_market(game);
  io::ReductionMapFile gm{"coordgame", r.map, {}, {}};
  CHECK(io::load_reduction_map(io::save_reduction_map(gm)) == gm);

  CheckReduction c = reduce_check_instance(game, {3, 2}, 1);
  io::ReductionMapFile cm{"checkgame", c.map, {}, c.stability_level};
  CHECK(io::load_reduction_map(io::save_reduction_map(cm)) == cm);

  MaxCutReduction mr = reduce_maxcut_to_market(MaxCutInstance(3, {{0, 1, 2}}));
  io::ReductionMapFile xm{"maxcut", {}, mr.map, {}};
  CHECK(io::load_reduction_map(io::save_reduction_map(xm)) == xm);

  CHECK(io::load_market(io::save_market(r.market)) == r.market);
  CHECK(io::load_market(io::save_market(mr.market)) == mr.market);

  CHECK_THROWS_AS(io::load_reduction_map(R"({"kind":"reduction_map","version":1,"source":"maxcut",
    "vertices":2,"item_side":[0,0,0,1]})"), io::ValidationError);
  CHECK_THROWS_AS(io::load_reduction_map(R"({"kind":"reduction_map","version":1,"source":"other"})"),
                  io::ValidationError);
}

TEST_CASE("files") {
  auto path = std::filesystem::temp_directory_path() / "xmarket_io_test.json";
  io::write_file(path.string(), kTiny);
  CHECK(io::read_file(path.string()) == kTiny);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(io::read_file("/nonexistent/xmarket.json"), std::runtime_error);
}
