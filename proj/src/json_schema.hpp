#pragma once

#include <json.hpp>
#include <optional>
#include <string>

namespace horizonlaw {

// Checks `doc` against the schema subset used by the shipped schemas: type,
// enum, required, properties, additionalProperties (boolean), items,
// minimum/maximum/exclusiveMinimum, minItems/maxItems, minLength. Returns a
// "$.path: message" description of the first violation, or nullopt.
std::optional<std::string> validate_schema(const nlohmann::json& schema,
                                           const nlohmann::json& doc);

}  // namespace horizonlaw
