#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "posyn/constraint.hpp"
#include "posyn/expr.hpp"

namespace posyn {

enum class Trigger {
  OnRefresh,
  OnDragStart,
  WhileDragging,
  OnDragEnd,
  OnResizeStart,
  WhileResizing,
  OnResizeEnd,
  OnRotationStart,
  WhileRotating,
  OnRotationEnd,
};

inline constexpr std::array<Trigger, 10> kAllTriggers = {
    Trigger::OnRefresh,     Trigger::OnDragStart,     Trigger::WhileDragging, Trigger::OnDragEnd,
    Trigger::OnResizeStart, Trigger::WhileResizing,   Trigger::OnResizeEnd,   Trigger::OnRotationStart,
    Trigger::WhileRotating, Trigger::OnRotationEnd,
};

std::string_view toString(Trigger trigger);
std::optional<Trigger> triggerFromString(std::string_view text);

/// Names a node relative to the rule's element.
///   "container"   the object whose containment slot holds the element
///   "#<id>"       a fixed object
///   "ref:<name>"  the first object in the element's reference slot <name>
struct TargetSelector {
  enum class Kind { Container, Id, Reference };
  Kind kind = Kind::Container;
  std::string name;  // object id or reference name

  bool operator==(const TargetSelector&) const = default;
};

std::string toString(const TargetSelector& selector);
/// Throws InvalidRule on malformed text.
TargetSelector parseTargetSelector(std::string_view text);
/// Nullopt when nothing matches.
std::optional<ObjectId> resolveTarget(const TargetSelector& selector, const Model& model, std::string_view element);

/// Writes the value into the target's rendered-attribute overlay.
struct ExportAction {
  TargetSelector target;
  std::string attribute;
  Expression value;
  bool operator==(const ExportAction&) const = default;
};

struct ConstraintAction {
  Constraint constraint;
  bool operator==(const ConstraintAction&) const = default;
};

/// Free expression; a top-level setValue writes the model.
struct GenericAction {
  Expression body;
  bool operator==(const GenericAction&) const = default;
};

using Action = std::variant<ExportAction, ConstraintAction, GenericAction>;

std::string_view actionKind(const Action& action);

/// (triggers, condition, action). Triggers form a disjunction; a missing
/// condition always holds. `target` binds `this.target` during evaluation.
struct RuleTriple {
  std::string id;
  std::vector<Trigger> triggers;
  std::optional<TargetSelector> target;
  std::optional<Expression> condition;
  Action action;

  bool firesOn(Trigger trigger) const;
  bool operator==(const RuleTriple&) const = default;
};

/// Bind-time checks: triggers present and distinct, setValue only as a whole
/// generic action, constraint rhs not self-referential. Throws InvalidRule.
void checkRuleTriple(const RuleTriple& triple);

}  // namespace posyn
