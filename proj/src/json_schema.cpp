#include "json_schema.hpp"

#include <cmath>

namespace horizonlaw {

namespace {

using nlohmann::json;

bool is_integerish(const json& v) {
  if (v.is_number_integer() || v.is_number_unsigned()) return true;
  if (!v.is_number_float()) return false;
  const double d = v.get<double>();
  return std::isfinite(d) && d == std::trunc(d);
}

bool matches_type(const std::string& type, const json& v) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "number") return v.is_number();
  if (type == "integer") return is_integerish(v);
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  return false;
}

std::string type_name(const json& v) {
  switch (v.type()) {
    case json::value_t::object: return "object";
    case json::value_t::array: return "array";
    case json::value_t::string: return "string";
    case json::value_t::boolean: return "boolean";
    case json::value_t::null: return "null";
    default: return v.is_number() ? "number" : "unknown";
  }
}

std::optional<std::string> check(const json& schema, const json& doc,
                                 const std::string& path) {
  if (!schema.is_object()) return std::nullopt;

  if (auto it = schema.find("type"); it != schema.end()) {
    bool ok = false;
    if (it->is_array()) {
      for (const auto& t : *it)
        if (matches_type(t.get<std::string>(), doc)) ok = true;
    } else {
      ok = matches_type(it->get<std::string>(), doc);
    }
    if (!ok)
      return path + ": expected " + it->dump() + ", got " + type_name(doc);
  }

  if (auto it = schema.find("enum"); it != schema.end()) {
    bool ok = false;
    for (const auto& candidate : *it)
      if (candidate == doc) ok = true;
    if (!ok) return path + ": value " + doc.dump() + " not in " + it->dump();
  }

  if (doc.is_number()) {
    const double v = doc.get<double>();
    if (auto it = schema.find("minimum"); it != schema.end() && v < it->get<double>())
      return path + ": " + doc.dump() + " is below minimum " + it->dump();
    if (auto it = schema.find("maximum"); it != schema.end() && v > it->get<double>())
      return path + ": " + doc.dump() + " is above maximum " + it->dump();
    if (auto it = schema.find("exclusiveMinimum");
        it != schema.end() && v <= it->get<double>())
      return path + ": " + doc.dump() + " must exceed " + it->dump();
  }

  if (doc.is_string()) {
    if (auto it = schema.find("minLength");
        it != schema.end() && doc.get<std::string>().size() < it->get<std::size_t>())
      return path + ": string shorter than minLength " + it->dump();
  }

  if (doc.is_array()) {
    if (auto it = schema.find("minItems");
        it != schema.end() && doc.size() < it->get<std::size_t>())
      return path + ": fewer than " + it->dump() + " items";
    if (auto it = schema.find("maxItems");
        it != schema.end() && doc.size() > it->get<std::size_t>())
      return path + ": more than " + it->dump() + " items";
    if (auto it = schema.find("items"); it != schema.end()) {
      for (std::size_t i = 0; i < doc.size(); ++i) {
        if (auto err = check(*it, doc[i], path + "[" + std::to_string(i) + "]"))
          return err;
      }
    }
  }

  if (doc.is_object()) {
    if (auto it = schema.find("required"); it != schema.end()) {
      for (const auto& name : *it) {
        const auto key = name.get<std::string>();
        if (!doc.contains(key))
          return path + ": missing required property '" + key + "'";
      }
    }
    const auto props = schema.find("properties");
    if (auto it = schema.find("additionalProperties");
        it != schema.end() && it->is_boolean() && !it->get<bool>()) {
      for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (props == schema.end() || !props->contains(key))
          return path + ": unknown property '" + key + "'";
      }
    }
    if (props != schema.end()) {
      for (const auto& [key, sub] : props->items()) {
        if (doc.contains(key)) {
          if (auto err = check(sub, doc.at(key), path + "." + key)) return err;
        }
      }
    }
  }

  return std::nullopt;
}

}  // namespace

std::optional<std::string> validate_schema(const nlohmann::json& schema,
                                           const nlohmann::json& doc) {
  return check(schema, doc, "$");
}

}  // namespace horizonlaw
