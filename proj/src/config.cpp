#include "polyram/config.hpp"

#include <fstream>
#include <sstream>

#include "polyram/errors.hpp"
#include "polyram/expansion.hpp"

namespace polyram {

namespace {

const nlohmann::json& member(const nlohmann::json& obj, const char* key) {
  static const nlohmann::json null_value;
  const auto it = obj.find(key);
  return it == obj.end() ? null_value : *it;
}

template <class T>
void read_into(const nlohmann::json& obj, const char* key, T& out) {
  const auto& v = member(obj, key);
  if (v.is_null()) return;
  try {
    out = v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

FieldSpec Config::field() const { return FieldSpec::create(p, n, FieldLimits{max_p, max_n}); }

std::uint64_t Config::effective_budget() const { return budget == 0 ? default_budget() : budget; }

nlohmann::ordered_json Config::to_json() const {
  nlohmann::ordered_json j;
  j["field"] = {{"p", p}, {"n", n}};
  j["limits"] = {{"max_p", max_p}, {"max_n", max_n}};
  j["degree_bound"] = degree_bound;
  j["tolerance"] = tolerance ? nlohmann::ordered_json(*tolerance) : nlohmann::ordered_json(nullptr);
  j["format"] = format;
  j["budget"] = budget;
  return j;
}

Config Config::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (key != "field" && key != "limits" && key != "degree_bound" && key != "tolerance" && key != "format" &&
        key != "budget")
      throw ParseError("unknown config key '" + key + "'");
  Config c;
  if (const auto& f = member(j, "field"); !f.is_null()) {
    if (!f.is_object()) throw ParseError("config key 'field' must be an object");
    read_into(f, "p", c.p);
    read_into(f, "n", c.n);
  }
  if (const auto& l = member(j, "limits"); !l.is_null()) {
    if (!l.is_object()) throw ParseError("config key 'limits' must be an object");
    read_into(l, "max_p", c.max_p);
    read_into(l, "max_n", c.max_n);
  }
  read_into(j, "degree_bound", c.degree_bound);
  if (const auto& t = member(j, "tolerance"); !t.is_null()) {
    if (!t.is_number()) throw ParseError("config key 'tolerance' must be a number");
    c.tolerance = t.get<double>();
  }
  read_into(j, "format", c.format);
  read_into(j, "budget", c.budget);
  if (c.format != "json" && c.format != "csv" && c.format != "plain")
    throw ParseError("unknown output format '" + c.format + "'");
  if (c.degree_bound < 0) throw ParseError("degree_bound must be >= 0");
  return c;
}

Config Config::parse(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON config: ") + e.what(), e.byte == 0 ? 0 : e.byte - 1);
  }
  return from_json(j);
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace polyram
