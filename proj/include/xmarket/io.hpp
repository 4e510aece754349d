#pragma once

// JSON file formats. Every file is a single object carrying "kind" and
// "version"; numeric fields must be integers.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "xmarket/coordination.hpp"
#include "xmarket/market.hpp"
#include "xmarket/reductions.hpp"

namespace xmarket::io {

inline constexpr int kFormatVersion = 1;

/// Malformed JSON text; `position()` is the byte offset reported by the parser.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Well-formed JSON that violates a format rule at `path()`.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string path, std::string rule)
      : std::runtime_error(path + ": " + rule), path_(std::move(path)), rule_(std::move(rule)) {}
  const std::string& path() const { return path_; }
  const std::string& rule() const { return rule_; }

 private:
  std::string path_;
  std::string rule_;
};

/// Value of the "kind" field.
std::string peek_kind(std::string_view text);

MarketInstance load_market(std::string_view text);
std::string save_market(const MarketInstance& market);

CoordinationGame load_game(std::string_view text);
std::string save_game(const CoordinationGame& game);

MaxCutInstance load_maxcut(std::string_view text);
std::string save_maxcut(const MaxCutInstance& cut);

/// Items may be given by name when `market` carries item names.
Allocation load_allocation(std::string_view text, const MarketInstance* market = nullptr);
std::string save_allocation(const Allocation& alloc);

StrategyProfile load_profile(std::string_view text);
std::string save_profile(const StrategyProfile& profile);

CutAssignment load_cut(std::string_view text);
std::string save_cut(const CutAssignment& cut);

/// Sidecar emitted next to a reduced market.
struct ReductionMapFile {
  std::string source;  // "coordgame", "checkgame" or "maxcut"
  std::optional<GameReductionMap> game;
  std::optional<MaxCutMap> maxcut;
  std::optional<int> stability_level;  // checkgame only

  friend bool operator==(const ReductionMapFile&, const ReductionMapFile&) = default;
};

ReductionMapFile load_reduction_map(std::string_view text);
std::string save_reduction_map(const ReductionMapFile& map);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view text);

}  // namespace xmarket::io
