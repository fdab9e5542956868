#pragma once
// Just enough JSON Schema (draft-07 subset) for the report schema:
// type, required, properties, items, enum, pattern, minimum, anyOf, local $ref.

#include <fstream>
#include <regex>
#include <string>
#include <vector>

#include "json.hpp"

namespace schema_check {

using Json = nlohmann::ordered_json;

inline bool has_type(const Json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  return false;
}

class Validator {
 public:
  explicit Validator(Json root) : root_(std::move(root)) {}

  static Validator from_file(const std::string& path) {
    std::ifstream in(path);
    return Validator(Json::parse(in));
  }

  /// Empty when valid; otherwise one line per violation.
  std::vector<std::string> validate(const Json& v) const {
    std::vector<std::string> errs;
    check(root_, v, "$", errs);
    return errs;
  }

 private:
  const Json& resolve(const Json& s) const {
    if (!s.contains("$ref")) return s;
    const std::string ref = s["$ref"].get<std::string>();
    const std::string prefix = "#/definitions/";
    if (ref.rfind(prefix, 0) != 0) throw std::runtime_error("unsupported $ref " + ref);
    return resolve(root_.at("definitions").at(ref.substr(prefix.size())));
  }

  void check(const Json& schema, const Json& v, const std::string& path, std::vector<std::string>& errs) const {
    const Json& s = resolve(schema);
    if (s.contains("anyOf")) {
      bool any = false;
      for (const auto& alt : s["anyOf"]) {
        std::vector<std::string> sub;
        check(alt, v, path, sub);
        if (sub.empty()) any = true;
      }
      if (!any) errs.push_back(path + ": matches no anyOf branch");
    }
    if (s.contains("type")) {
      bool ok = false;
      if (s["type"].is_array()) {
        for (const auto& t : s["type"]) ok |= has_type(v, t.get<std::string>());
      } else {
        ok = has_type(v, s["type"].get<std::string>());
      }
      if (!ok) {
        errs.push_back(path + ": wrong type");
        return;
      }
    }
    if (s.contains("enum")) {
      bool ok = false;
      for (const auto& e : s["enum"]) ok |= e == v;
      if (!ok) errs.push_back(path + ": not in enum");
    }
    if (s.contains("pattern") && v.is_string()) {
      if (!std::regex_search(v.get<std::string>(), std::regex(s["pattern"].get<std::string>()))) {
        errs.push_back(path + ": pattern mismatch");
      }
    }
    if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>()) {
      errs.push_back(path + ": below minimum");
    }
    if (v.is_object()) {
      if (s.contains("required")) {
        for (const auto& k : s["required"]) {
          if (!v.contains(k.get<std::string>())) errs.push_back(path + ": missing " + k.get<std::string>());
        }
      }
      if (s.contains("properties")) {
        for (const auto& [k, sub] : s["properties"].items()) {
          if (v.contains(k)) check(sub, v[k], path + "." + k, errs);
        }
      }
    }
    if (v.is_array() && s.contains("items")) {
      for (std::size_t i = 0; i < v.size(); ++i) check(s["items"], v[i], path + "[" + std::to_string(i) + "]", errs);
    }
  }

  Json root_;
};

}  // namespace schema_check
