#include "posyn/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace posyn {

std::string formatNumber(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string toDisplayString(const SlotValue& value) {
  struct Visitor {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return formatNumber(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const EnumLiteral& v) const { return v.literal; }
    std::string operator()(const ObjectIds& v) const {
      std::string out;
      for (const auto& id : v) {
        if (!out.empty()) out += ' ';
        out += id;
      }
      return out;
    }
  };
  return std::visit(Visitor{}, value);
}

Model::Model(std::string id, std::shared_ptr<const MetaModel> metamodel)
    : id_(std::move(id)), metamodel_(std::move(metamodel)) {
  if (metamodel_) metamodelRef_ = metamodel_->name();
}

const MetaModel& Model::metamodel() const {
  if (!metamodel_ || metamodel_->name() != metamodelRef_) {
    throw Error(ErrorCode::UnknownMetamodel, "metamodel '" + metamodelRef_ + "' is not bound");
  }
  return *metamodel_;
}

const ModelObject* Model::find(std::string_view id) const {
  auto it = objects_.find(id);
  return it == objects_.end() ? nullptr : &it->second;
}

const ModelObject& Model::at(std::string_view id) const {
  if (const auto* obj = find(id)) return *obj;
  throw Error(ErrorCode::UnknownObject, "no object with id '" + std::string(id) + "'");
}

std::optional<ContainerRef> Model::containerOf(std::string_view id) const {
  if (!metamodel_) return std::nullopt;
  for (const auto& [oid, obj] : objects_) {
    for (const auto& [name, value] : obj.slots) {
      const auto* ids = std::get_if<ObjectIds>(&value);
      if (!ids || std::find(ids->begin(), ids->end(), id) == ids->end()) continue;
      const Feature* f = nullptr;
      if (metamodel_->findClass(obj.className)) f = metamodel_->findFeature(obj.className, name);
      if (f && f->isReference() && f->reference().containment) return ContainerRef{oid, name};
    }
  }
  return std::nullopt;
}

void Model::insertRaw(ModelObject object) {
  auto id = object.id;
  objects_.insert_or_assign(std::move(id), std::move(object));
}

ModelObject& Model::rawObject(std::string_view id) {
  auto it = objects_.find(id);
  if (it == objects_.end()) {
    throw Error(ErrorCode::UnknownObject, "no object with id '" + std::string(id) + "'");
  }
  return it->second;
}

void Model::eraseRaw(std::string_view id) {
  auto it = objects_.find(id);
  if (it != objects_.end()) objects_.erase(it);
}

SlotValue defaultValue(const Feature& feature) {
  if (feature.isReference()) return ObjectIds{};
  switch (feature.attribute().type) {
    case PrimitiveType::Int: return std::int64_t{0};
    case PrimitiveType::Float: return 0.0;
    case PrimitiveType::String: return std::string{};
    case PrimitiveType::Boolean: return false;
    case PrimitiveType::Enum: return EnumLiteral{};  // patched by caller with the first literal
  }
  return std::int64_t{0};
}

namespace {

SlotValue defaultFor(const MetaModel& mm, const Feature& feature) {
  SlotValue v = defaultValue(feature);
  if (!feature.isReference() && feature.attribute().type == PrimitiveType::Enum) {
    const auto* e = mm.findEnum(feature.attribute().enumName);
    v = EnumLiteral{e && !e->literals.empty() ? e->literals.front() : std::string{}};
  }
  return v;
}

const Feature& requireFeature(const MetaModel& mm, const ModelObject& obj, std::string_view feature) {
  const MetaClassDef* cls = mm.findClass(obj.className);
  if (!cls) throw Error(ErrorCode::UnknownClass, "object '" + obj.id + "' has unknown class '" + obj.className + "'");
  const Feature* f = mm.findFeature(obj.className, feature);
  if (!f) {
    throw Error(ErrorCode::UnknownFeature,
                "class '" + obj.className + "' has no feature '" + std::string(feature) + "'");
  }
  return *f;
}

constexpr double kMaxExactInteger = 9007199254740992.0;  // 2^53

// Coerces `value` to the attribute's declared type, or explains why it cannot.
std::optional<std::string> coerceAttribute(const MetaModel& mm, const AttributeDef& attr, SlotValue& value) {
  switch (attr.type) {
    case PrimitiveType::Int:
      if (std::holds_alternative<std::int64_t>(value)) break;
      if (const auto* d = std::get_if<double>(&value)) {
        if (std::isfinite(*d) && std::trunc(*d) == *d && std::abs(*d) <= kMaxExactInteger) {
          value = static_cast<std::int64_t>(*d);
          break;
        }
        return "non-integral number for int attribute";
      }
      return "int attribute expects a number";
    case PrimitiveType::Float:
      if (const auto* i = std::get_if<std::int64_t>(&value)) {
        value = static_cast<double>(*i);
        break;
      }
      if (const auto* d = std::get_if<double>(&value)) {
        if (!std::isfinite(*d)) return "non-finite number";
        break;
      }
      return "float attribute expects a number";
    case PrimitiveType::String:
      if (!std::holds_alternative<std::string>(value)) return "string attribute expects a string";
      break;
    case PrimitiveType::Boolean:
      if (!std::holds_alternative<bool>(value)) return "boolean attribute expects a boolean";
      break;
    case PrimitiveType::Enum: {
      std::string literal;
      if (const auto* s = std::get_if<std::string>(&value)) {
        literal = *s;
      } else if (const auto* e = std::get_if<EnumLiteral>(&value)) {
        literal = e->literal;
      } else {
        return "enum attribute expects a literal";
      }
      const auto* def = mm.findEnum(attr.enumName);
      if (!def || std::find(def->literals.begin(), def->literals.end(), literal) == def->literals.end()) {
        return "'" + literal + "' is not a literal of " + attr.enumName;
      }
      value = EnumLiteral{literal};
      break;
    }
  }
  return std::nullopt;
}

std::optional<double> numericOf(const SlotValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  return std::nullopt;
}

bool withinBounds(const AttributeDef& attr, const SlotValue& v) {
  auto n = numericOf(v);
  if (!n) return true;
  if (attr.lower && *n < *attr.lower) return false;
  if (attr.upper && *n > *attr.upper) return false;
  return true;
}

bool isAncestorOrSelf(const Model& model, std::string_view candidate, std::string_view of) {
  std::set<ObjectId, std::less<>> seen;
  std::optional<ObjectId> cur{std::string(of)};
  while (cur) {
    if (*cur == candidate) return true;
    if (!seen.insert(*cur).second) return false;
    auto c = model.containerOf(*cur);
    cur = c ? std::optional<ObjectId>{c->object} : std::nullopt;
  }
  return false;
}

}  // namespace

ObjectId instantiate(Model& model, std::string_view className, const std::optional<ContainerRef>& container) {
  const MetaModel& mm = model.metamodel();
  const MetaClassDef* cls = mm.findClass(className);
  if (!cls) throw Error(ErrorCode::UnknownClass, "unknown class '" + std::string(className) + "'");
  if (cls->isAbstract) throw Error(ErrorCode::AbstractClass, "class '" + cls->name + "' is abstract");

  if (container) {
    const ModelObject* owner = model.find(container->object);
    if (!owner) throw Error(ErrorCode::BadContainer, "container '" + container->object + "' does not exist");
    const Feature* f = mm.findFeature(owner->className, container->reference);
    if (!f || !f->isReference() || !f->reference().containment) {
      throw Error(ErrorCode::BadContainer, "'" + container->reference + "' is not a containment reference of " +
                                               owner->className);
    }
    if (!mm.conformsTo(className, f->reference().target)) {
      throw Error(ErrorCode::BadContainer, "'" + container->reference + "' cannot hold a " + std::string(className));
    }
    const auto& ids = std::get<ObjectIds>(owner->slots.at(container->reference));
    int upper = f->reference().upper;
    if (upper != kUnbounded && static_cast<int>(ids.size()) + 1 > upper) {
      throw Error(ErrorCode::MultiplicityOverflow, "'" + container->reference + "' is full");
    }
  }

  ObjectId id;
  do {
    id = "o" + std::to_string(model.nextId_++);
  } while (model.objects_.count(id));

  ModelObject obj{id, cls->name, {}};
  for (const auto& f : mm.features(className)) obj.slots.emplace(f.name(), defaultFor(mm, f));
  model.objects_.emplace(id, std::move(obj));

  if (container) {
    auto& slot = std::get<ObjectIds>(model.objects_.find(container->object)->second.slots[container->reference]);
    slot.push_back(id);
  }
  return id;
}

ModelDelta writeSlot(Model& model, std::string_view objectId, std::string_view feature, SlotValue value) {
  const MetaModel& mm = model.metamodel();
  const ModelObject& obj = model.at(objectId);
  const Feature& f = requireFeature(mm, obj, feature);
  const std::string where = obj.id + "." + std::string(feature);

  if (!f.isReference()) {
    if (auto why = coerceAttribute(mm, f.attribute(), value)) {
      throw Error(ErrorCode::TypeMismatch, where + ": " + *why);
    }
    if (!withinBounds(f.attribute(), value)) {
      throw Error(ErrorCode::OutOfBounds, where + ": " + toDisplayString(value) + " outside declared bounds");
    }
  } else {
    const auto& ref = f.reference();
    const auto* ids = std::get_if<ObjectIds>(&value);
    if (!ids) throw Error(ErrorCode::TypeMismatch, where + ": reference expects a list of object ids");
    if (ref.upper != kUnbounded && static_cast<int>(ids->size()) > ref.upper) {
      throw Error(ErrorCode::MultiplicityViolation,
                  where + ": " + std::to_string(ids->size()) + " links exceed upper bound " + std::to_string(ref.upper));
    }
    std::set<std::string_view> unique;
    for (const auto& t : *ids) {
      const ModelObject* target = model.find(t);
      if (!target) throw Error(ErrorCode::DanglingReference, where + ": no object '" + t + "'");
      if (!mm.conformsTo(target->className, ref.target)) {
        throw Error(ErrorCode::TypeMismatch, where + ": '" + t + "' is not a " + ref.target);
      }
      if (!unique.insert(t).second) {
        throw Error(ErrorCode::MultiplicityViolation, where + ": '" + t + "' linked twice");
      }
      if (ref.containment) {
        auto c = model.containerOf(t);
        if (c && !(c->object == obj.id && c->reference == feature)) {
          throw Error(ErrorCode::ContainmentConflict, where + ": '" + t + "' already contained by " + c->object);
        }
        if (isAncestorOrSelf(model, t, obj.id)) {
          throw Error(ErrorCode::ContainmentConflict, where + ": containing '" + t + "' would form a cycle");
        }
      }
    }
  }

  auto& slot = model.objects_.find(objectId)->second.slots[std::string(feature)];
  ModelDelta delta{obj.id, std::string(feature), slot, value};
  slot = std::move(value);
  return delta;
}

ModelDelta addLink(Model& model, std::string_view source, std::string_view reference, std::string_view target) {
  const ModelObject& obj = model.at(source);
  auto it = obj.slots.find(reference);
  if (it == obj.slots.end()) {
    throw Error(ErrorCode::UnknownFeature, "class '" + obj.className + "' has no feature '" + std::string(reference) + "'");
  }
  const auto* ids = std::get_if<ObjectIds>(&it->second);
  if (!ids) throw Error(ErrorCode::TypeMismatch, "'" + std::string(reference) + "' is not a reference");
  ObjectIds next = *ids;
  next.emplace_back(target);
  return writeSlot(model, source, reference, std::move(next));
}

NavCursor navigateStep(const Model& model, const NavCursor& from, const NavStep& step) {
  if (step.kind == NavStep::Kind::Value) {
    if (const auto* h = std::get_if<SlotHandle>(&from)) {
      const ModelObject& obj = model.at(h->object);
      auto it = obj.slots.find(h->feature);
      if (it == obj.slots.end()) throw Error(ErrorCode::UnknownFeature, "slot '" + h->feature + "' missing");
      return it->second;
    }
    return from;
  }

  if (std::holds_alternative<SlotHandle>(from)) {
    throw Error(ErrorCode::PathOnPrimitive, "cannot navigate past primitive slot '" + std::get<SlotHandle>(from).feature +
                                                "' (getChildren('" + step.feature + "'))");
  }
  const auto* ids = std::get_if<ObjectIds>(&std::get<SlotValue>(from));
  if (!ids) {
    throw Error(ErrorCode::PathOnPrimitive, "getChildren('" + step.feature + "') applied to a primitive value");
  }
  if (ids->size() != 1) {
    throw Error(ErrorCode::AmbiguousPath, "getChildren('" + step.feature + "') needs exactly one object, got " +
                                              std::to_string(ids->size()));
  }
  const ModelObject& obj = model.at(ids->front());
  const Feature& f = requireFeature(model.metamodel(), obj, step.feature);
  if (f.isReference()) {
    auto it = obj.slots.find(step.feature);
    if (it == obj.slots.end()) return SlotValue{ObjectIds{}};
    return it->second;
  }
  return SlotHandle{obj.id, step.feature};
}

NavCursor navigate(const Model& model, std::string_view start, std::span<const NavStep> path) {
  model.at(start);
  NavCursor cur = SlotValue{ObjectIds{std::string(start)}};
  for (const auto& step : path) cur = navigateStep(model, cur, step);
  return cur;
}

ConformanceReport checkConformance(const Model& model) {
  const MetaModel& mm = model.metamodel();
  ConformanceReport report;
  auto add = [&](const ObjectId& id, std::string feature, ErrorCode code, std::string msg) {
    report.violations.push_back({id, std::move(feature), code, std::move(msg)});
  };

  std::map<ObjectId, std::vector<ObjectId>, IdLess> containers;

  for (const auto& [id, obj] : model.objects()) {
    if (obj.id != id) add(id, "-", ErrorCode::UnknownObject, "object key and id differ");
    const MetaClassDef* cls = mm.findClass(obj.className);
    if (!cls) {
      add(id, "-", ErrorCode::UnknownClass, "unknown class '" + obj.className + "'");
      continue;
    }
    if (cls->isAbstract) add(id, "-", ErrorCode::AbstractClass, "instance of abstract class '" + cls->name + "'");

    for (const auto& [name, value] : obj.slots) {
      if (!mm.findFeature(obj.className, name)) {
        add(id, name, ErrorCode::UnknownFeature, "slot not declared by " + obj.className);
      }
    }

    for (const auto& f : mm.features(obj.className)) {
      auto it = obj.slots.find(f.name());
      if (it == obj.slots.end()) {
        add(id, f.name(), ErrorCode::TypeMismatch, "slot missing");
        continue;
      }
      if (!f.isReference()) {
        SlotValue v = it->second;
        // Conformance is strict: the stored representation must already be the declared one.
        bool exact = false;
        switch (f.attribute().type) {
          case PrimitiveType::Int: exact = std::holds_alternative<std::int64_t>(v); break;
          case PrimitiveType::Float: exact = std::holds_alternative<double>(v); break;
          case PrimitiveType::String: exact = std::holds_alternative<std::string>(v); break;
          case PrimitiveType::Boolean: exact = std::holds_alternative<bool>(v); break;
          case PrimitiveType::Enum: exact = std::holds_alternative<EnumLiteral>(v); break;
        }
        if (!exact || coerceAttribute(mm, f.attribute(), v)) {
          add(id, f.name(), ErrorCode::TypeMismatch,
              "value does not match declared type " + std::string(toString(f.attribute().type)));
        } else if (!withinBounds(f.attribute(), v)) {
          add(id, f.name(), ErrorCode::OutOfBounds, toDisplayString(v) + " outside declared bounds");
        }
        continue;
      }
      const auto& ref = f.reference();
      const auto* ids = std::get_if<ObjectIds>(&it->second);
      if (!ids) {
        add(id, f.name(), ErrorCode::TypeMismatch, "reference slot holds a primitive");
        continue;
      }
      int n = static_cast<int>(ids->size());
      if (n < ref.lower || (ref.upper != kUnbounded && n > ref.upper)) {
        add(id, f.name(), ErrorCode::MultiplicityViolation,
            std::to_string(n) + " links outside " + std::to_string(ref.lower) + ".." +
                (ref.upper == kUnbounded ? std::string("*") : std::to_string(ref.upper)));
      }
      std::set<std::string_view> unique;
      for (const auto& t : *ids) {
        const ModelObject* target = model.find(t);
        if (!target) {
          add(id, f.name(), ErrorCode::DanglingReference, "no object '" + t + "'");
          continue;
        }
        if (mm.findClass(target->className) && !mm.conformsTo(target->className, ref.target)) {
          add(id, f.name(), ErrorCode::TypeMismatch, "'" + t + "' is not a " + ref.target);
        }
        if (!unique.insert(t).second) add(id, f.name(), ErrorCode::MultiplicityViolation, "'" + t + "' linked twice");
        if (ref.containment) containers[t].push_back(id);
      }
    }
  }

  for (const auto& [child, parents] : containers) {
    if (parents.size() > 1) {
      std::string list;
      for (const auto& p : parents) list += (list.empty() ? "" : ", ") + p;
      add(child, "-", ErrorCode::ContainmentConflict, "contained by several objects: " + list);
    }
  }
  // Cycle detection follows the first container of each object.
  std::set<ObjectId, IdLess> onCycle;
  for (const auto& [start, parents] : containers) {
    std::set<ObjectId, IdLess> seen;
    ObjectId cur = start;
    while (true) {
      if (!seen.insert(cur).second) {
        if (cur == start) onCycle.insert(start);
        break;
      }
      auto it = containers.find(cur);
      if (it == containers.end()) break;
      cur = it->second.front();
    }
  }
  for (const auto& id : onCycle) add(id, "-", ErrorCode::ContainmentConflict, "object is part of a containment cycle");
  return report;
}

}  // namespace posyn
