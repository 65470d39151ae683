#pragma once

#include <json.hpp>

#include "posyn/engine.hpp"
#include "posyn/project.hpp"

// Library-internal JSON conversions shared by serialization and the session protocol.
namespace posyn::codec {

using nlohmann::json;

json toJson(const Project& project);
/// Throws ParseError on shape problems, ValidationError(ValidationFailed) on semantic ones.
Project projectFromJson(const json& doc);

json toJson(const SessionEvent& event);
SessionEvent eventFromJson(const json& j);

json toJson(const EventOutcome& outcome);
json toJson(const Value& value);
json toJson(const SlotValue& value);

}  // namespace posyn::codec
