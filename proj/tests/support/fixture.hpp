#pragma once

#include <string>
#include <vector>

#include "posyn/engine.hpp"
#include "posyn/project.hpp"

namespace posyn::fixture {

// Aircraft hangar project: a Hangar (o1) holding two Motorized airplanes (o2,
// o3) and a Glider (o4). Airplanes sit on a BottomLeft-anchored canvas with
// x = 2 * seats and y = sqrt(maxAltitude); width tracks length, height tracks
// height.
//
// View "positional" (active, rank 1) keeps x bound to seats, y >= 0 and
// height <= width. View "bidirectional" (inactive, rank 0) lets a drag choose
// x >= 2 freely and writes seats = round(x / 2) on drag end.

inline constexpr const char* kHangar = "o1";
inline constexpr const char* kBoeing = "o2";  // Motorized, seats 150
inline constexpr const char* kAirbus = "o3";  // Motorized, seats 180
inline constexpr const char* kGlider = "o4";  // Glider, seats 2

Project aircraft();

// Event builders; seq is filled in by script().
SessionEvent drag(const ObjectId& element, double x, double y);
SessionEvent resize(const ObjectId& element, double width, double height, Handle handle = Handle::SE);
SessionEvent simple(EventKind kind, const ObjectId& element);
SessionEvent activate(const std::string& view);
SessionEvent deactivate(const std::string& view);
SessionEvent setSlot(const ObjectId& element, const std::string& feature, SlotValue value);

/// Numbers events contiguously from 1.
std::vector<SessionEvent> script(std::vector<SessionEvent> events);

/// dragStart, `steps` drags moving linearly from the current x to `toX`, dragEnd.
std::vector<SessionEvent> dragGesture(const Project& project, const ObjectId& element, double toX, int steps);

/// Drag of the 150-seat Motorized released at x = 310 under the positional view.
std::vector<SessionEvent> snapScript();

}  // namespace posyn::fixture
