#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "posyn/engine.hpp"
#include "posyn/project.hpp"

namespace posyn {

inline constexpr int kFormatVersion = 1;

/// Canonical project document: sorted object keys, lists in declaration order,
/// shortest round-trip floats, two-space indentation, trailing newline.
std::string saveProject(const Project& project);

/// Parses and fully validates a project document.
/// Errors: ParseError, VersionMismatch, ValidationFailed (ValidationError with issues).
Project loadProject(std::string_view text);

/// EMF-style XMI. A single root object is the document element; several roots
/// are wrapped in xmi:XMI. Errors: NonConformant.
std::string exportXMI(const Model& model);

/// One JSON object, `{"seq","kind","elementId","payload"}`. Errors: ParseError.
SessionEvent parseEvent(std::string_view json);
std::string eventToJson(const SessionEvent& event);

/// JSONL; blank lines are skipped. Errors: ParseError (with line number),
/// ValidationFailed when seq is not contiguous from 1.
std::vector<SessionEvent> parseScript(std::string_view jsonl);
std::string scriptToJsonl(const std::vector<SessionEvent>& events);

/// One trace line per event outcome (single-line JSON).
std::string outcomeToJson(const EventOutcome& outcome);

}  // namespace posyn
