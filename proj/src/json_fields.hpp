#pragma once

#include <json.hpp>
#include <string>

#include "topicstab/error.hpp"

namespace topicstab::detail {

/// Reads a required header field, converting type errors into FormatError naming the field.
template <typename T>
T require_field(const nlohmann::json& object, const std::string& field, const std::string& context) {
  if (!object.is_object() || !object.contains(field)) {
    throw FormatError(context + ": missing field '" + field + "'");
  }
  try {
    return object.at(field).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError(context + ": field '" + field + "' has the wrong type");
  }
}

inline nlohmann::json parse_json_line(const std::string& line, const std::string& context) {
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(context + ": malformed JSON (" + e.what() + ")");
  }
}

}  // namespace topicstab::detail
