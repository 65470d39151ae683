#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "posyn/error.hpp"
#include "posyn/metamodel.hpp"

namespace posyn {

using ObjectId = std::string;
using ObjectIds = std::vector<ObjectId>;

/// Orders engine ids ("o2" < "o10") naturally: shorter first, then lexicographic.
struct IdLess {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

struct EnumLiteral {
  std::string literal;
  bool operator==(const EnumLiteral&) const = default;
};

using SlotValue = std::variant<std::int64_t, double, std::string, bool, EnumLiteral, ObjectIds>;

/// Textual form used by templates and XMI: integers plain, floats shortest round-trip.
std::string toDisplayString(const SlotValue& value);
std::string formatNumber(double value);

struct ModelObject {
  ObjectId id;
  std::string className;
  std::map<std::string, SlotValue, std::less<>> slots;

  bool operator==(const ModelObject&) const = default;
};

struct ContainerRef {
  ObjectId object;
  std::string reference;
  bool operator==(const ContainerRef&) const = default;
};

struct SlotKey {
  ObjectId object;
  std::string feature;
  auto operator<=>(const SlotKey&) const = default;
};

struct ModelDelta {
  ObjectId object;
  std::string feature;
  SlotValue oldValue;
  SlotValue newValue;

  bool changed() const { return !(oldValue == newValue); }
  bool operator==(const ModelDelta&) const = default;
};

/// An M1 model. Slot mutation goes through writeSlot()/addLink(); the *Raw
/// members exist for loaders and tests that need to build unchecked states.
class Model {
 public:
  using ObjectMap = std::map<ObjectId, ModelObject, IdLess>;

  Model(std::string id, std::shared_ptr<const MetaModel> metamodel);

  const std::string& id() const { return id_; }
  const std::string& metamodelRef() const { return metamodelRef_; }
  const std::shared_ptr<const MetaModel>& metamodelPtr() const { return metamodel_; }
  /// Throws UnknownMetamodel when unbound.
  const MetaModel& metamodel() const;

  const ObjectMap& objects() const { return objects_; }
  const ModelObject* find(std::string_view id) const;
  const ModelObject& at(std::string_view id) const;
  std::optional<ContainerRef> containerOf(std::string_view id) const;
  std::uint64_t nextId() const { return nextId_; }

  void insertRaw(ModelObject object);
  ModelObject& rawObject(std::string_view id);
  void eraseRaw(std::string_view id);
  void setNextIdRaw(std::uint64_t next) { nextId_ = next; }
  void setMetamodelRefRaw(std::string ref) { metamodelRef_ = std::move(ref); }

  bool operator==(const Model& other) const {
    return id_ == other.id_ && metamodelRef_ == other.metamodelRef_ && nextId_ == other.nextId_ &&
           objects_ == other.objects_;
  }

 private:
  friend ObjectId instantiate(Model&, std::string_view, const std::optional<ContainerRef>&);
  friend ModelDelta writeSlot(Model&, std::string_view, std::string_view, SlotValue);

  std::string id_;
  std::string metamodelRef_;
  std::shared_ptr<const MetaModel> metamodel_;
  ObjectMap objects_;
  std::uint64_t nextId_ = 1;
};

SlotValue defaultValue(const Feature& feature);

/// Creates an object with default slots, optionally appended to a containment slot.
/// Errors: UnknownClass, AbstractClass, BadContainer, MultiplicityOverflow.
ObjectId instantiate(Model& model, std::string_view className,
                     const std::optional<ContainerRef>& container = std::nullopt);

/// The only slot mutation path. Validates type, bounds, multiplicity upper bound and
/// containment before touching state; on error the model is unchanged.
/// Errors: UnknownObject, UnknownFeature, TypeMismatch, OutOfBounds,
/// MultiplicityViolation, DanglingReference, ContainmentConflict.
ModelDelta writeSlot(Model& model, std::string_view objectId, std::string_view feature, SlotValue value);

/// Appends `target` to a reference slot (through writeSlot).
ModelDelta addLink(Model& model, std::string_view source, std::string_view reference, std::string_view target);

// Navigation ---------------------------------------------------------------

struct SlotHandle {
  ObjectId object;
  std::string feature;
  bool operator==(const SlotHandle&) const = default;
};

struct NavStep {
  enum class Kind { Children, Value };
  Kind kind = Kind::Value;
  std::string feature;

  static NavStep children(std::string name) { return {Kind::Children, std::move(name)}; }
  static NavStep value() { return {Kind::Value, {}}; }
};

/// Where a navigation currently stands: an object list, a primitive value, or
/// a handle on an attribute slot (what getChildren('attr') yields).
using NavCursor = std::variant<SlotValue, SlotHandle>;

/// getChildren(name) on a single object: attribute -> handle, reference -> object list.
/// getValue(): handle -> slot value; anything else -> itself.
/// Errors: UnknownObject, UnknownFeature, PathOnPrimitive, AmbiguousPath.
NavCursor navigateStep(const Model& model, const NavCursor& from, const NavStep& step);
NavCursor navigate(const Model& model, std::string_view start, std::span<const NavStep> path);

// Conformance --------------------------------------------------------------

struct ConformanceViolation {
  ObjectId object;
  std::string feature;  // "-" when not feature-specific
  ErrorCode code;
  std::string message;
  bool operator==(const ConformanceViolation&) const = default;
};

struct ConformanceReport {
  std::vector<ConformanceViolation> violations;
  bool conforms() const { return violations.empty(); }
  bool operator==(const ConformanceReport&) const = default;
};

/// Pure structural check: typing, bounds, multiplicity, dangling links, containment forest.
/// Throws UnknownMetamodel when the model's metamodel reference does not resolve.
ConformanceReport checkConformance(const Model& model);

}  // namespace posyn
