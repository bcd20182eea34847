#ifndef GRUNSKY_SCHEMA_CHECK_HPP
#define GRUNSKY_SCHEMA_CHECK_HPP

// Validator for the JSON-Schema subset used by the shipped schema documents:
// type, const, enum, properties, required, additionalProperties (boolean),
// items, minItems, maxItems, minimum, maximum and oneOf.

#include <string>
#include <vector>

#include <json.hpp>

namespace grunsky::schema {

using json = nlohmann::ordered_json;

namespace detail {

inline bool has_type(const json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  if (t == "integer") return v.is_number_integer() || (v.is_number_float() && v.get<double>() == static_cast<double>(static_cast<long long>(v.get<double>())));
  if (t == "number") return v.is_number();
  return false;
}

inline void check(const json& s, const json& v, const std::string& path, std::vector<std::string>& errors) {
  if (s.contains("type")) {
    bool ok = false;
    if (s["type"].is_array()) {
      for (const auto& t : s["type"]) ok = ok || has_type(v, t.get<std::string>());
    } else {
      ok = has_type(v, s["type"].get<std::string>());
    }
    if (!ok) {
      errors.push_back(path + ": expected type " + s["type"].dump() + ", got " + v.dump().substr(0, 60));
      return;
    }
  }
  if (s.contains("const") && v != s["const"]) errors.push_back(path + ": expected " + s["const"].dump());
  if (s.contains("enum")) {
    bool found = false;
    for (const auto& e : s["enum"]) found = found || e == v;
    if (!found) errors.push_back(path + ": value " + v.dump() + " not in " + s["enum"].dump());
  }
  if (v.is_number()) {
    if (s.contains("minimum") && v.get<double>() < s["minimum"].get<double>()) errors.push_back(path + ": below minimum");
    if (s.contains("maximum") && v.get<double>() > s["maximum"].get<double>()) errors.push_back(path + ": above maximum");
  }
  if (v.is_object()) {
    for (const auto& r : s.value("required", json::array()))
      if (!v.contains(r.get<std::string>())) errors.push_back(path + ": missing required \"" + r.get<std::string>() + "\"");
    const json props = s.value("properties", json::object());
    for (const auto& [key, value] : v.items()) {
      if (props.contains(key)) check(props[key], value, path + "." + key, errors);
      else if (s.contains("additionalProperties") && s["additionalProperties"] == false)
        errors.push_back(path + ": unexpected property \"" + key + "\"");
    }
  }
  if (v.is_array()) {
    if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) errors.push_back(path + ": too few items");
    if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) errors.push_back(path + ": too many items");
    if (s.contains("items"))
      for (std::size_t i = 0; i < v.size(); ++i) check(s["items"], v[i], path + "[" + std::to_string(i) + "]", errors);
  }
  if (s.contains("oneOf")) {
    std::size_t matches = 0;
    for (const auto& alt : s["oneOf"]) {
      std::vector<std::string> sub;
      check(alt, v, path, sub);
      if (sub.empty()) ++matches;
    }
    if (matches != 1) errors.push_back(path + ": matches " + std::to_string(matches) + " oneOf alternatives");
  }
}

} // namespace detail

/// Empty when `doc` conforms to `schema`; otherwise one message per violation.
inline std::vector<std::string> validate(const json& schema, const json& doc) {
  std::vector<std::string> errors;
  detail::check(schema, doc, "$", errors);
  return errors;
}

} // namespace grunsky::schema

#endif // GRUNSKY_SCHEMA_CHECK_HPP
