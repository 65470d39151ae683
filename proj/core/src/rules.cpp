#include "posyn/rules.hpp"

#include <algorithm>
#include <set>

namespace posyn {

std::string_view toString(Trigger trigger) {
  switch (trigger) {
    case Trigger::OnRefresh: return "onRefresh";
    case Trigger::OnDragStart: return "onDragStart";
    case Trigger::WhileDragging: return "whileDragging";
    case Trigger::OnDragEnd: return "onDragEnd";
    case Trigger::OnResizeStart: return "onResizeStart";
    case Trigger::WhileResizing: return "whileResizing";
    case Trigger::OnResizeEnd: return "onResizeEnd";
    case Trigger::OnRotationStart: return "onRotationStart";
    case Trigger::WhileRotating: return "whileRotating";
    case Trigger::OnRotationEnd: return "onRotationEnd";
  }
  return "?";
}

std::optional<Trigger> triggerFromString(std::string_view text) {
  for (Trigger t : kAllTriggers) {
    if (toString(t) == text) return t;
  }
  return std::nullopt;
}

std::string toString(const TargetSelector& selector) {
  switch (selector.kind) {
    case TargetSelector::Kind::Container: return "container";
    case TargetSelector::Kind::Id: return "#" + selector.name;
    case TargetSelector::Kind::Reference: return "ref:" + selector.name;
  }
  return "?";
}

TargetSelector parseTargetSelector(std::string_view text) {
  if (text == "container") return {TargetSelector::Kind::Container, {}};
  if (text.size() > 1 && text.front() == '#') return {TargetSelector::Kind::Id, std::string(text.substr(1))};
  if (text.size() > 4 && text.starts_with("ref:")) {
    return {TargetSelector::Kind::Reference, std::string(text.substr(4))};
  }
  throw Error(ErrorCode::InvalidRule, "malformed target selector '" + std::string(text) + "'");
}

std::optional<ObjectId> resolveTarget(const TargetSelector& selector, const Model& model, std::string_view element) {
  switch (selector.kind) {
    case TargetSelector::Kind::Container: {
      auto c = model.containerOf(element);
      if (c) return c->object;
      return std::nullopt;
    }
    case TargetSelector::Kind::Id:
      if (model.find(selector.name)) return selector.name;
      return std::nullopt;
    case TargetSelector::Kind::Reference: {
      const ModelObject* obj = model.find(element);
      if (!obj) return std::nullopt;
      auto it = obj->slots.find(selector.name);
      if (it == obj->slots.end()) return std::nullopt;
      const auto* ids = std::get_if<ObjectIds>(&it->second);
      if (!ids || ids->empty()) return std::nullopt;
      return ids->front();
    }
  }
  return std::nullopt;
}

std::string_view actionKind(const Action& action) {
  switch (action.index()) {
    case 0: return "export";
    case 1: return "constraint";
    default: return "generic";
  }
}

bool RuleTriple::firesOn(Trigger trigger) const {
  return std::find(triggers.begin(), triggers.end(), trigger) != triggers.end();
}

namespace {

[[noreturn]] void invalid(const RuleTriple& t, const std::string& msg) {
  throw Error(ErrorCode::InvalidRule, "rule '" + t.id + "': " + msg);
}

}  // namespace

void checkRuleTriple(const RuleTriple& t) {
  if (t.id.empty()) throw Error(ErrorCode::InvalidRule, "rule triple without id");
  if (t.triggers.empty()) invalid(t, "no triggers");
  if (std::set<Trigger>(t.triggers.begin(), t.triggers.end()).size() != t.triggers.size()) {
    invalid(t, "duplicate trigger");
  }
  if (t.condition) {
    if (t.condition->empty()) invalid(t, "empty condition");
    if (expr::containsSetValue(t.condition->ast())) invalid(t, "setValue inside a condition");
  }
  std::visit(
      [&](const auto& a) {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, ExportAction>) {
          if (a.attribute.empty()) invalid(t, "export action without attribute name");
          if (a.value.empty()) invalid(t, "export action without value");
          if (expr::containsSetValue(a.value.ast())) invalid(t, "setValue inside an export value");
        } else if constexpr (std::is_same_v<A, ConstraintAction>) {
          try {
            checkConstraint(a.constraint);
          } catch (const Error& e) {
            invalid(t, e.what());
          }
        } else {
          if (a.body.empty()) invalid(t, "empty generic action");
          const auto& ast = a.body.ast();
          if (expr::isTopLevelSetValue(ast)) {
            const auto& call = std::get<expr::Call>(ast.node);
            bool nested = expr::containsSetValue(*call.receiver) ||
                          std::any_of(call.args.begin(), call.args.end(),
                                      [](const expr::ExprPtr& arg) { return expr::containsSetValue(*arg); });
            if (nested) invalid(t, "nested setValue");
            if (call.args.size() != 1) invalid(t, "setValue takes one argument");
          } else if (expr::containsSetValue(ast)) {
            invalid(t, "setValue must be the whole action");
          }
        }
      },
      t.action);
}

}  // namespace posyn
