#pragma once

// Run configuration shared by every CLI subcommand; loadable from a JSON file via --config.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "polyram/field.hpp"

namespace polyram {

struct Config {
  int p = 2;
  int n = 1;
  int max_p = FieldLimits{}.max_p;
  int max_n = FieldLimits{}.max_n;
  int degree_bound = 4;
  std::optional<double> tolerance;
  std::string format = "json";  // json, csv or plain
  std::uint64_t budget = 0;     // 0: default_budget()

  FieldSpec field() const;
  std::uint64_t effective_budget() const;

  nlohmann::ordered_json to_json() const;
  /// Canonical single-line serialization; parsing it back yields the same string.
  std::string canonical() const { return to_json().dump(); }

  /// Missing keys keep their defaults. Throws ParseError for malformed input or unknown keys.
  static Config from_json(const nlohmann::json& j);
  static Config parse(const std::string& text);
  static Config load(const std::string& path);
};

}  // namespace polyram
