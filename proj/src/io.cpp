#include "xmarket/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace xmarket::io {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

Json parse_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t index) { return path + "[" + std::to_string(index) + "]"; }

const Json& field(const Json& obj, const std::string& path, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(join(path, key), "required field missing");
  return *it;
}

const Json* optional_field(const Json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

Int as_int(const Json& v, const std::string& path) {
  if (v.is_number_unsigned()) {
    if (v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) {
      throw ValidationError(path, "integer out of range");
    }
    return static_cast<Int>(v.get<std::uint64_t>());
  }
  if (v.is_number_integer()) return v.get<Int>();
  if (v.is_number_float()) throw ValidationError(path, "must be an integer (fractional values are not allowed)");
  throw ValidationError(path, "must be an integer");
}

int as_small_int(const Json& v, const std::string& path) {
  Int x = as_int(v, path);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    throw ValidationError(path, "integer out of range");
  }
  return static_cast<int>(x);
}

std::size_t as_count(const Json& v, const std::string& path, std::size_t min) {
  Int x = as_int(v, path);
  if (x < static_cast<Int>(min)) throw ValidationError(path, "must be >= " + std::to_string(min));
  if (x > std::numeric_limits<int>::max()) throw ValidationError(path, "integer out of range");
  return static_cast<std::size_t>(x);
}

const Json& as_array(const Json& v, const std::string& path) {
  if (!v.is_array()) throw ValidationError(path, "must be an array");
  return v;
}

const Json& as_array(const Json& v, const std::string& path, std::size_t size) {
  as_array(v, path);
  if (v.size() != size) throw ValidationError(path, "must have " + std::to_string(size) + " entries");
  return v;
}

std::vector<int> int_list(const Json& v, const std::string& path) {
  as_array(v, path);
  std::vector<int> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_small_int(v[i], at(path, i)));
  return out;
}

std::vector<std::string> name_list(const Json& v, const std::string& path, std::size_t size) {
  as_array(v, path, size);
  std::vector<std::string> out;
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) throw ValidationError(at(path, i), "must be a string");
    out.push_back(v[i].get<std::string>());
    if (!seen.emplace(out.back(), i).second) throw ValidationError(at(path, i), "duplicate name");
  }
  return out;
}

// Index given either as an integer or as one of `names`.
int index_ref(const Json& v, const std::string& path, const std::vector<std::string>& names, std::size_t limit) {
  if (v.is_string()) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == v.get<std::string>()) return static_cast<int>(i);
    }
    throw ValidationError(path, "unknown name '" + v.get<std::string>() + "'");
  }
  Int x = as_int(v, path);
  if (x < 0 || x >= static_cast<Int>(limit)) {
    throw ValidationError(path, "index out of range [0, " + std::to_string(limit) + ")");
  }
  return static_cast<int>(x);
}

// Checks the envelope and returns the parsed document.
Json open(std::string_view text, const std::string& kind) {
  Json doc = parse_text(text);
  if (!doc.is_object()) throw ValidationError("$", "document must be a JSON object");
  const Json& k = field(doc, "", "kind");
  if (!k.is_string() || k.get<std::string>() != kind) throw ValidationError("kind", "expected \"" + kind + "\"");
  if (as_int(field(doc, "", "version"), "version") != kFormatVersion) {
    throw ValidationError("version", "unsupported format version (expected " + std::to_string(kFormatVersion) + ")");
  }
  return doc;
}

OrderedJson envelope(const std::string& kind) {
  OrderedJson doc;
  doc["kind"] = kind;
  doc["version"] = kFormatVersion;
  return doc;
}

// One top-level field per line; arrays of arrays or objects get one element
// per line; everything else stays compact.
std::string render(const OrderedJson& doc) {
  std::ostringstream out;
  out << "{\n";
  std::size_t i = 0;
  for (auto it = doc.begin(); it != doc.end(); ++it, ++i) {
    out << "  " << OrderedJson(it.key()).dump() << ": ";
    const OrderedJson& v = it.value();
    bool nested = v.is_array() && !v.empty() && (v.front().is_array() || v.front().is_object());
    if (nested) {
      out << "[\n";
      for (std::size_t j = 0; j < v.size(); ++j) out << "    " << v[j].dump() << (j + 1 < v.size() ? ",\n" : "\n");
      out << "  ]";
    } else {
      out << v.dump();
    }
    out << (i + 1 < doc.size() ? ",\n" : "\n");
  }
  out << "}\n";
  return out.str();
}

CostSpec load_cost(const Json& v, const std::string& path, std::size_t n) {
  if (v.is_array()) {
    as_array(v, path, n);
    std::vector<Int> entries;
    entries.reserve(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      const Json& row = as_array(v[a], at(path, a), n);
      for (std::size_t b = 0; b < n; ++b) entries.push_back(as_int(row[b], at(at(path, a), b)));
    }
    return CostSpec::dense(n, std::move(entries));
  }
  if (!v.is_object()) throw ValidationError(path, "cost must be a matrix, {\"trivial\": true} or {\"partitioned\": ...}");
  if (const Json* t = optional_field(v, "trivial")) {
    if (!t->is_boolean() || !t->get<bool>()) throw ValidationError(join(path, "trivial"), "must be true");
    return CostSpec::trivial();
  }
  if (const Json* p = optional_field(v, "partitioned")) {
    std::string pp = join(path, "partitioned");
    if (!p->is_object()) throw ValidationError(pp, "must be an object");
    CostSpec::Partition part;
    part.labels = int_list(field(*p, pp, "labels"), join(pp, "labels"));
    if (part.labels.size() != n) throw ValidationError(join(pp, "labels"), "must have " + std::to_string(n) + " entries");
    part.own_label = as_small_int(field(*p, pp, "own"), join(pp, "own"));
    const Json& table = as_array(field(*p, pp, "table"), join(pp, "table"), 2);
    for (std::size_t r = 0; r < 2; ++r) {
      const Json& row = as_array(table[r], at(join(pp, "table"), r), 2);
      for (std::size_t c = 0; c < 2; ++c) part.table[r][c] = as_int(row[c], at(at(join(pp, "table"), r), c));
    }
    return CostSpec::partitioned(std::move(part));
  }
  throw ValidationError(path, "cost must be a matrix, {\"trivial\": true} or {\"partitioned\": ...}");
}

OrderedJson save_cost(const CostSpec& c) {
  switch (c.kind()) {
    case CostSpec::Kind::kTrivial:
      return OrderedJson{{"trivial", true}};
    case CostSpec::Kind::kDense: {
      OrderedJson rows = OrderedJson::array();
      std::size_t m = c.dense_size();
      for (std::size_t a = 0; a < m; ++a) {
        OrderedJson row = OrderedJson::array();
        for (std::size_t b = 0; b < m; ++b) row.push_back(c.dense_entries()[a * m + b]);
        rows.push_back(std::move(row));
      }
      return rows;
    }
    case CostSpec::Kind::kPartitioned: {
      const auto& p = c.partition();
      OrderedJson part;
      part["labels"] = p.labels;
      part["own"] = p.own_label;
      part["table"] = {{p.table[0][0], p.table[0][1]}, {p.table[1][0], p.table[1][1]}};
      return OrderedJson{{"partitioned", std::move(part)}};
    }
  }
  return nullptr;
}

template <class F>
auto rethrow_as_validation(const std::string& path, F&& build) {
  try {
    return build();
  } catch (const ValidationError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ValidationError(path, e.what());
  }
}

}  // namespace

std::string peek_kind(std::string_view text) {
  Json doc = parse_text(text);
  if (!doc.is_object()) throw ValidationError("$", "document must be a JSON object");
  const Json& k = field(doc, "", "kind");
  if (!k.is_string()) throw ValidationError("kind", "must be a string");
  return k.get<std::string>();
}

// ---------------------------------------------------------------------------
// market

MarketInstance load_market(std::string_view text) {
  Json doc = open(text, "market");
  std::size_t n = as_count(field(doc, "", "agents"), "agents", 1);
  if (const Json* items = optional_field(doc, "items")) {
    if (as_int(*items, "items") != static_cast<Int>(n)) {
      throw ValidationError("items", "the numbers of agents and items must be equal");
    }
  }

  std::vector<std::string> agent_names, item_names;
  if (const Json* v = optional_field(doc, "agent_names")) agent_names = name_list(*v, "agent_names", n);
  if (const Json* v = optional_field(doc, "item_names")) {
    if (v->is_array() && v->size() != n) {
      throw ValidationError("item_names", "the numbers of agents and items must be equal");
    }
    item_names = name_list(*v, "item_names", n);
  }

  std::vector<AgentEdge> agent_edges;
  if (const Json* v = optional_field(doc, "agent_edges")) {
    as_array(*v, "agent_edges");
    for (std::size_t e = 0; e < v->size(); ++e) {
      std::string p = at("agent_edges", e);
      const Json& t = as_array((*v)[e], p, 3);
      agent_edges.push_back({index_ref(t[0], at(p, 0), agent_names, n), index_ref(t[1], at(p, 1), agent_names, n),
                             as_int(t[2], at(p, 2))});
    }
  }
  std::vector<ItemEdge> item_edges;
  if (const Json* v = optional_field(doc, "item_edges")) {
    as_array(*v, "item_edges");
    for (std::size_t e = 0; e < v->size(); ++e) {
      std::string p = at("item_edges", e);
      const Json& t = as_array((*v)[e], p, 2);
      item_edges.push_back({index_ref(t[0], at(p, 0), item_names, n), index_ref(t[1], at(p, 1), item_names, n)});
    }
  }

  const Json& vals = as_array(field(doc, "", "valuations"), "valuations", n);
  std::vector<Int> valuations;
  valuations.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string p = at("valuations", i);
    const Json& row = as_array(vals[i], p);
    if (row.size() != n) throw ValidationError(p, "the numbers of agents and items must be equal");
    for (std::size_t a = 0; a < n; ++a) {
      Int x = as_int(row[a], at(p, a));
      if (x < 0) throw ValidationError(at(p, a), "valuations must be >= 0");
      valuations.push_back(x);
    }
  }

  std::vector<CostSpec> costs;
  if (const Json* v = optional_field(doc, "costs")) {
    if (v->is_object()) {
      CostSpec shared = load_cost(*v, "costs", n);
      costs.assign(n, shared);
    } else {
      as_array(*v, "costs", n);
      for (std::size_t i = 0; i < n; ++i) costs.push_back(load_cost((*v)[i], at("costs", i), n));
    }
  } else {
    costs.assign(n, CostSpec::trivial());
  }

  MarketInstance market = rethrow_as_validation("market", [&] {
    return MarketInstance(n, std::move(agent_edges), std::move(item_edges), std::move(valuations), std::move(costs));
  });
  if (!agent_names.empty() || !item_names.empty()) {
    if (agent_names.empty()) throw ValidationError("agent_names", "required when item_names is given");
    if (item_names.empty()) throw ValidationError("item_names", "required when agent_names is given");
    market.set_names(std::move(agent_names), std::move(item_names));
  }
  return market;
}

std::string save_market(const MarketInstance& market) {
  const std::size_t n = market.size();
  OrderedJson doc = envelope("market");
  doc["agents"] = n;
  doc["items"] = n;
  if (!market.agent_names().empty()) {
    doc["agent_names"] = market.agent_names();
    doc["item_names"] = market.item_names();
  }
  OrderedJson agent_edges = OrderedJson::array();
  for (const auto& e : market.agent_edges()) agent_edges.push_back({e.u, e.v, e.weight});
  doc["agent_edges"] = std::move(agent_edges);
  OrderedJson item_edges = OrderedJson::array();
  for (const auto& e : market.item_edges()) item_edges.push_back({e.a, e.b});
  doc["item_edges"] = std::move(item_edges);
  OrderedJson vals = OrderedJson::array();
  for (std::size_t i = 0; i < n; ++i) {
    vals.push_back(std::vector<Int>(market.valuations().begin() + static_cast<std::ptrdiff_t>(i * n),
                                    market.valuations().begin() + static_cast<std::ptrdiff_t>((i + 1) * n)));
  }
  doc["valuations"] = std::move(vals);
  OrderedJson costs = OrderedJson::array();
  for (const auto& c : market.costs()) costs.push_back(save_cost(c));
  doc["costs"] = std::move(costs);
  return render(doc);
}

// ---------------------------------------------------------------------------
// coordination game

CoordinationGame load_game(std::string_view text) {
  Json doc = open(text, "coordgame");
  std::size_t players = as_count(field(doc, "", "players"), "players", 1);
  int m = static_cast<int>(as_count(field(doc, "", "m"), "m", 1));
  std::vector<PlayerEdge> edges;
  if (const Json* v = optional_field(doc, "edges")) {
    as_array(*v, "edges");
    for (std::size_t e = 0; e < v->size(); ++e) {
      std::string p = at("edges", e);
      const Json& t = as_array((*v)[e], p, 2);
      edges.push_back({index_ref(t[0], at(p, 0), {}, players), index_ref(t[1], at(p, 1), {}, players)});
    }
  }
  const Json& sets_json = as_array(field(doc, "", "strategy_sets"), "strategy_sets", players);
  std::vector<std::vector<int>> sets;
  for (std::size_t i = 0; i < players; ++i) {
    std::string p = at("strategy_sets", i);
    sets.push_back(int_list(sets_json[i], p));
    for (std::size_t j = 0; j < sets.back().size(); ++j) {
      if (sets.back()[j] < 1 || sets.back()[j] > m) throw ValidationError(at(p, j), "strategy must lie in [1, m]");
    }
  }
  return rethrow_as_validation("coordgame", [&] {
    return CoordinationGame(players, std::move(edges), m, std::move(sets));
  });
}

std::string save_game(const CoordinationGame& game) {
  OrderedJson doc = envelope("coordgame");
  doc["players"] = game.size();
  doc["m"] = game.strategy_universe();
  OrderedJson edges = OrderedJson::array();
  for (const auto& e : game.edges()) edges.push_back({e.u, e.v});
  doc["edges"] = std::move(edges);
  doc["strategy_sets"] = game.strategy_sets();
  return render(doc);
}

// ---------------------------------------------------------------------------
// max-cut

MaxCutInstance load_maxcut(std::string_view text) {
  Json doc = open(text, "maxcut");
  std::size_t vertices = as_count(field(doc, "", "vertices"), "vertices", 1);
  std::vector<CutEdge> edges;
  if (const Json* v = optional_field(doc, "edges")) {
    as_array(*v, "edges");
    for (std::size_t e = 0; e < v->size(); ++e) {
      std::string p = at("edges", e);
      const Json& t = as_array((*v)[e], p, 3);
      edges.push_back({index_ref(t[0], at(p, 0), {}, vertices), index_ref(t[1], at(p, 1), {}, vertices),
                       as_int(t[2], at(p, 2))});
    }
  }
  return rethrow_as_validation("maxcut", [&] { return MaxCutInstance(vertices, std::move(edges)); });
}

std::string save_maxcut(const MaxCutInstance& cut) {
  OrderedJson doc = envelope("maxcut");
  doc["vertices"] = cut.size();
  OrderedJson edges = OrderedJson::array();
  for (const auto& e : cut.edges()) edges.push_back({e.u, e.v, e.weight});
  doc["edges"] = std::move(edges);
  return render(doc);
}

// ---------------------------------------------------------------------------
// solutions

Allocation load_allocation(std::string_view text, const MarketInstance* market) {
  Json doc = open(text, "allocation");
  const Json& v = as_array(field(doc, "", "assignment"), "assignment");
  std::vector<std::string> names;
  if (market != nullptr) {
    if (v.size() != market->size()) {
      throw ValidationError("assignment", "must have " + std::to_string(market->size()) + " entries");
    }
    names = market->item_names();
  }
  std::vector<int> items;
  for (std::size_t i = 0; i < v.size(); ++i) items.push_back(index_ref(v[i], at("assignment", i), names, v.size()));
  return rethrow_as_validation("assignment", [&] { return Allocation(std::move(items)); });
}

std::string save_allocation(const Allocation& alloc) {
  OrderedJson doc = envelope("allocation");
  doc["assignment"] = std::vector<int>(alloc.items().begin(), alloc.items().end());
  return render(doc);
}

StrategyProfile load_profile(std::string_view text) {
  Json doc = open(text, "profile");
  return int_list(field(doc, "", "strategies"), "strategies");
}

std::string save_profile(const StrategyProfile& profile) {
  OrderedJson doc = envelope("profile");
  doc["strategies"] = profile;
  return render(doc);
}

CutAssignment load_cut(std::string_view text) {
  Json doc = open(text, "cut");
  CutAssignment x = int_list(field(doc, "", "assignment"), "assignment");
  for (std::size_t v = 0; v < x.size(); ++v) {
    if (x[v] != 0 && x[v] != 1) throw ValidationError(at("assignment", v), "must be 0 or 1");
  }
  return x;
}

std::string save_cut(const CutAssignment& cut) {
  OrderedJson doc = envelope("cut");
  doc["assignment"] = cut;
  return render(doc);
}

// ---------------------------------------------------------------------------
// reduction maps

ReductionMapFile load_reduction_map(std::string_view text) {
  Json doc = open(text, "reduction_map");
  ReductionMapFile out;
  const Json& src = field(doc, "", "source");
  if (!src.is_string()) throw ValidationError("source", "must be a string");
  out.source = src.get<std::string>();
  if (out.source == "maxcut") {
    MaxCutMap map;
    map.vertices = as_count(field(doc, "", "vertices"), "vertices", 1);
    map.item_side = int_list(field(doc, "", "item_side"), "item_side");
    rethrow_as_validation("reduction_map", [&] {
      map.validate();
      return 0;
    });
    out.maxcut = std::move(map);
    return out;
  }
  if (out.source != "coordgame" && out.source != "checkgame") {
    throw ValidationError("source", "must be \"coordgame\", \"checkgame\" or \"maxcut\"");
  }
  GameReductionMap map;
  map.delta = as_int(field(doc, "", "delta"), "delta");
  map.item_label = int_list(field(doc, "", "item_label"), "item_label");
  map.item_player = int_list(field(doc, "", "item_player"), "item_player");
  map.agent_player = int_list(field(doc, "", "agent_player"), "agent_player");
  map.agent_role = int_list(field(doc, "", "agent_role"), "agent_role");
  map.block_start = int_list(field(doc, "", "block_start"), "block_start");
  rethrow_as_validation("reduction_map", [&] {
    map.validate();
    return 0;
  });
  out.game = std::move(map);
  if (out.source == "checkgame") {
    out.stability_level = as_small_int(field(doc, "", "stability_level"), "stability_level");
    if (*out.stability_level < 2) throw ValidationError("stability_level", "must be >= 2");
  }
  return out;
}

std::string save_reduction_map(const ReductionMapFile& map) {
  OrderedJson doc = envelope("reduction_map");
  doc["source"] = map.source;
  if (map.maxcut) {
    doc["vertices"] = map.maxcut->vertices;
    doc["item_side"] = map.maxcut->item_side;
  } else if (map.game) {
    doc["delta"] = map.game->delta;
    doc["item_label"] = map.game->item_label;
    doc["item_player"] = map.game->item_player;
    doc["agent_player"] = map.game->agent_player;
    doc["agent_role"] = map.game->agent_role;
    doc["block_start"] = map.game->block_start;
    if (map.stability_level) doc["stability_level"] = *map.stability_level;
  }
  return render(doc);
}

// ---------------------------------------------------------------------------
// files

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
}

}  // namespace xmarket::io
