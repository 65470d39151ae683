#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "posyn/project.hpp"
#include "posyn/rules.hpp"
#include "posyn/view.hpp"

namespace posyn {

enum class EventKind {
  CreateObject,
  SetAttribute,
  Link,
  ActivateView,
  DeactivateView,
  DragStart,
  Drag,
  DragEnd,
  ResizeStart,
  Resize,
  ResizeEnd,
  RotateStart,
  Rotate,
  RotateEnd,
};

std::string_view toString(EventKind kind);
std::optional<EventKind> eventKindFromString(std::string_view text);

/// Fields used per kind:
///   createObject    className, container, x/y/width/height, anchor
///   setAttribute    feature, value
///   link            feature, target
///   (de)activateView  view
///   drag            x, y
///   resize          width, height, optional x/y, handle
///   rotate          rotation
/// Start and end gesture events carry no geometry.
struct EventPayload {
  std::optional<double> x;
  std::optional<double> y;
  std::optional<double> width;
  std::optional<double> height;
  std::optional<double> rotation;
  std::optional<Handle> handle;
  std::optional<Anchor> anchor;
  std::string className;
  std::optional<ContainerRef> container;
  std::string feature;
  std::optional<SlotValue> value;
  ObjectId target;
  std::string view;

  bool operator==(const EventPayload&) const = default;
};

struct SessionEvent {
  std::int64_t seq = 0;
  EventKind kind = EventKind::SetAttribute;
  ObjectId elementId;
  EventPayload payload;

  bool operator==(const SessionEvent&) const = default;
};

/// Triggers an event kind fires on its element. View (de)activation fires
/// onRefresh on every element the view selects, chosen by the engine.
std::vector<Trigger> mapEventToTriggers(EventKind kind);

enum class Gesture { None, Drag, Resize, Rotate };

/// Per-element start -> while* -> end bookkeeping.
class GestureTracker {
 public:
  /// Throws OrderingViolation without changing state when `kind` is out of order.
  void accept(EventKind kind, const ObjectId& element);
  Gesture active(std::string_view element) const;

 private:
  std::map<ObjectId, Gesture, IdLess> active_;
};

struct LayoutChange {
  ObjectId element;
  LayoutProperty property = LayoutProperty::X;  // never a vertexSize alias
  double oldValue = 0.0;
  double newValue = 0.0;
  bool operator==(const LayoutChange&) const = default;
};

struct AttributeChange {
  ObjectId element;
  std::string attribute;
  std::string value;
  bool operator==(const AttributeChange&) const = default;
};

struct Violation {
  ErrorCode code = ErrorCode::InvalidRule;
  std::string rule;  // rule triple id, "-" when not rule-specific
  ObjectId element;
  std::string message;
  bool operator==(const Violation&) const = default;
};

struct ActionResult {
  std::string rule;  // rule triple id; "settle" for the multi-constraint fixpoint
  std::string kind;  // export, constraint, generic, settle
  std::optional<Value> output;
  std::vector<LayoutChange> layoutDeltas;
  std::vector<ModelDelta> modelDeltas;
  std::vector<AttributeChange> attributeDeltas;
  std::vector<Violation> violations;
  bool operator==(const ActionResult&) const = default;
};

/// One trigger dispatched to one element. Recorded even when no rule matches.
struct Firing {
  Trigger trigger = Trigger::OnRefresh;
  ObjectId element;
  int round = 0;  // 0 for direct event firings, 1.. for refresh cascade rounds
  std::vector<ActionResult> results;
  bool operator==(const Firing&) const = default;
};

struct EventOutcome {
  std::int64_t seq = 0;
  EventKind kind = EventKind::SetAttribute;
  ObjectId element;
  bool accepted = true;  // false when the event was rejected before touching state
  std::optional<ObjectId> created;
  std::vector<Firing> firings;
  std::vector<ModelDelta> modelDeltas;
  std::vector<LayoutChange> layoutDeltas;
  std::vector<AttributeChange> attributeDeltas;
  std::vector<Violation> violations;  // event-level and per-rule, in occurrence order
  int cascadeRounds = 0;
  bool operator==(const EventOutcome&) const = default;
};

inline constexpr int kCascadeLimit = 16;

/// Runtime presentation state attached to elements by export actions; not persisted.
using AttributeOverlay = std::map<ObjectId, std::map<std::string, std::string>, IdLess>;

/// Applies session events one at a time against an owned project. Not thread-safe;
/// callers serialize access.
class Engine {
 public:
  /// Throws ValidationError when the project does not validate.
  explicit Engine(Project project);

  const Project& project() const { return project_; }
  const StyleMap& styles() const { return styles_; }
  const AttributeOverlay& overlay() const { return overlay_; }
  std::int64_t lastSeq() const { return lastSeq_; }
  const GestureTracker& gestures() const { return gestures_; }

  /// Event application; never throws for bad events, reporting violations instead.
  EventOutcome apply(const SessionEvent& event);

  /// Dispatches `trigger` to `element`: runs the matching triples of its
  /// resolved style in declaration order, threading lastOutput, then settles
  /// the firing's constraints jointly when it executed more than one.
  Firing fire(Trigger trigger, const ObjectId& element, int round = 0, const Motion& motion = {});

  struct RefreshOutcome {
    std::vector<Firing> firings;
    int rounds = 0;
    bool limitExceeded = false;
  };
  /// onRefresh cascade: round 1 fires `seeds` plus the readers of the changed
  /// deltas; every later round fires the readers of the previous round's changes.
  RefreshOutcome refresh(std::span<const ModelDelta> deltas, const std::set<ObjectId, IdLess>& seeds = {});

  /// Visible elements whose template shows the slot or whose onRefresh triples
  /// read it when dry-run against the current state.
  std::set<ObjectId, IdLess> readersOf(const SlotKey& slot) const;

  /// Template output of the element's resolved style; nullopt when not visible.
  std::optional<std::string> render(std::string_view element, std::vector<std::string>* warnings = nullptr) const;

 private:
  void setLayout(const NodeLayout& layout);
  void restyle();
  void gestureEvent(const SessionEvent& event, EventOutcome& out);
  void modelEvent(const SessionEvent& event, EventOutcome& out);
  void viewEvent(const SessionEvent& event, EventOutcome& out);
  void cascade(std::span<const ModelDelta> deltas, const std::set<ObjectId, IdLess>& seeds, EventOutcome& out);
  static void absorb(EventOutcome& out, Firing firing);

  Project project_;
  StyleMap styles_;
  AttributeOverlay overlay_;
  GestureTracker gestures_;
  std::int64_t lastSeq_ = 0;
};

}  // namespace posyn
