#include "posyn/serialization.hpp"

#include <cmath>

#include "json_codec.hpp"

namespace posyn {
namespace codec {

[[noreturn]] void shape(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::ParseError, path + ": " + message);
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) shape(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) shape(path, std::string("missing field '") + key + "'");
  return *it;
}

const json* optionalField(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) shape(path, "expected an object");
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

std::string str(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_string()) shape(path + "." + key, "expected a string");
  return v.get<std::string>();
}

double num(const json& v, const std::string& path) {
  if (!v.is_number()) shape(path, "expected a number");
  return v.get<double>();
}

double num(const json& obj, const char* key, const std::string& path) {
  return num(field(obj, key, path), path + "." + key);
}

std::int64_t integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) shape(path, "expected an integer");
  return v.get<std::int64_t>();
}

std::int64_t integer(const json& obj, const char* key, const std::string& path) {
  return integer(field(obj, key, path), path + "." + key);
}

bool boolean(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_boolean()) shape(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

const json& array(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_array()) shape(path + "." + key, "expected an array");
  return v;
}

std::vector<std::string> strings(const json& v, const std::string& path) {
  if (!v.is_array()) shape(path, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) shape(path, "expected an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

template <typename Enum, typename Parse>
Enum enumField(const json& obj, const char* key, const std::string& path, Parse parse) {
  std::string text = str(obj, key, path);
  auto v = parse(text);
  if (!v) shape(path + "." + key, "unknown value '" + text + "'");
  return *v;
}

// Metamodel -------------------------------------------------------------------

json toJson(const MetaModelSpec& spec) {
  json classes = json::array();
  for (const auto& c : spec.classes) {
    json attrs = json::array();
    for (const auto& a : c.attributes) {
      json j{{"name", a.name}, {"type", toString(a.type)}};
      if (a.type == PrimitiveType::Enum) j["enum"] = a.enumName;
      if (a.lower) j["lower"] = *a.lower;
      if (a.upper) j["upper"] = *a.upper;
      attrs.push_back(std::move(j));
    }
    json refs = json::array();
    for (const auto& r : c.references) {
      refs.push_back(
          {{"name", r.name}, {"target", r.target}, {"containment", r.containment}, {"lower", r.lower}, {"upper", r.upper}});
    }
    classes.push_back({{"name", c.name},
                       {"abstract", c.isAbstract},
                       {"superclasses", c.superclasses},
                       {"attributes", std::move(attrs)},
                       {"references", std::move(refs)}});
  }
  json enums = json::array();
  for (const auto& e : spec.enums) enums.push_back({{"name", e.name}, {"literals", e.literals}});
  return {{"name", spec.name}, {"classes", std::move(classes)}, {"enums", std::move(enums)}};
}

MetaModelSpec metamodelFromJson(const json& j, const std::string& path) {
  MetaModelSpec spec;
  spec.name = str(j, "name", path);
  const json& classes = array(j, "classes", path);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const json& c = classes[i];
    const std::string cp = path + ".classes[" + std::to_string(i) + "]";
    MetaClassDef def;
    def.name = str(c, "name", cp);
    def.isAbstract = boolean(c, "abstract", cp);
    def.superclasses = strings(field(c, "superclasses", cp), cp + ".superclasses");
    const json& attrs = array(c, "attributes", cp);
    for (std::size_t k = 0; k < attrs.size(); ++k) {
      const json& a = attrs[k];
      const std::string ap = cp + ".attributes[" + std::to_string(k) + "]";
      AttributeDef attr;
      attr.name = str(a, "name", ap);
      attr.type = enumField<PrimitiveType>(a, "type", ap, primitiveTypeFromString);
      if (attr.type == PrimitiveType::Enum) attr.enumName = str(a, "enum", ap);
      if (const json* lo = optionalField(a, "lower", ap)) attr.lower = num(*lo, ap + ".lower");
      if (const json* hi = optionalField(a, "upper", ap)) attr.upper = num(*hi, ap + ".upper");
      def.attributes.push_back(std::move(attr));
    }
    const json& refs = array(c, "references", cp);
    for (std::size_t k = 0; k < refs.size(); ++k) {
      const json& r = refs[k];
      const std::string rp = cp + ".references[" + std::to_string(k) + "]";
      ReferenceDef ref;
      ref.name = str(r, "name", rp);
      ref.target = str(r, "target", rp);
      ref.containment = boolean(r, "containment", rp);
      ref.lower = static_cast<int>(integer(r, "lower", rp));
      ref.upper = static_cast<int>(integer(r, "upper", rp));
      def.references.push_back(std::move(ref));
    }
    spec.classes.push_back(std::move(def));
  }
  const json& enums = array(j, "enums", path);
  for (std::size_t i = 0; i < enums.size(); ++i) {
    const std::string ep = path + ".enums[" + std::to_string(i) + "]";
    spec.enums.push_back({str(enums[i], "name", ep), strings(field(enums[i], "literals", ep), ep + ".literals")});
  }
  return spec;
}

// Model -----------------------------------------------------------------------

std::optional<SlotValue> slotFromJson(const json& v, const Feature& f) {
  if (f.isReference()) {
    if (!v.is_array()) return std::nullopt;
    ObjectIds ids;
    for (const auto& s : v) {
      if (!s.is_string()) return std::nullopt;
      ids.push_back(s.get<std::string>());
    }
    return ids;
  }
  switch (f.attribute().type) {
    case PrimitiveType::Int:
      if (v.is_number_integer()) return SlotValue{v.get<std::int64_t>()};
      return std::nullopt;
    case PrimitiveType::Float:
      if (v.is_number()) return SlotValue{v.get<double>()};
      return std::nullopt;
    case PrimitiveType::String:
      if (v.is_string()) return SlotValue{v.get<std::string>()};
      return std::nullopt;
    case PrimitiveType::Boolean:
      if (v.is_boolean()) return SlotValue{v.get<bool>()};
      return std::nullopt;
    case PrimitiveType::Enum:
      if (v.is_string()) return SlotValue{EnumLiteral{v.get<std::string>()}};
      return std::nullopt;
  }
  return std::nullopt;
}

json toJson(const Model& model) {
  json objects = json::array();
  for (const auto& [id, obj] : model.objects()) {
    json slots = json::object();
    for (const auto& [name, value] : obj.slots) slots[name] = toJson(value);
    objects.push_back({{"id", id}, {"class", obj.className}, {"slots", std::move(slots)}});
  }
  return {{"id", model.id()},
          {"metamodel", model.metamodelRef()},
          {"nextId", model.nextId()},
          {"objects", std::move(objects)}};
}

// Views -----------------------------------------------------------------------

json toJson(const RuleTriple& t) {
  json triggers = json::array();
  for (Trigger tr : t.triggers) triggers.push_back(toString(tr));
  json action = std::visit(
      [](const auto& a) -> json {
        using A = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<A, ExportAction>) {
          return {{"kind", "export"},
                  {"target", toString(a.target)},
                  {"attribute", a.attribute},
                  {"value", a.value.source()}};
        } else if constexpr (std::is_same_v<A, ConstraintAction>) {
          return {{"kind", "constraint"},
                  {"property", toString(a.constraint.property)},
                  {"operator", toString(a.constraint.op)},
                  {"value", a.constraint.rhs.source()}};
        } else {
          return {{"kind", "generic"}, {"expression", a.body.source()}};
        }
      },
      t.action);
  json j{{"id", t.id}, {"triggers", std::move(triggers)}, {"action", std::move(action)}};
  if (t.target) j["target"] = toString(*t.target);
  if (t.condition) j["condition"] = t.condition->source();
  return j;
}

json toJson(const ViewRule& r) {
  json handles = json::array();
  for (Handle h : r.measurable.resizeHandles) handles.push_back(toString(h));
  json selector{{"kind", toString(r.selector.kind)}};
  if (r.selector.kind != ElementSelector::Kind::ViewDefault) selector["name"] = r.selector.name;
  json triples = json::array();
  for (const auto& t : r.triples) triples.push_back(toJson(t));
  return {{"id", r.id},
          {"selector", std::move(selector)},
          {"template", r.templ},
          {"measurability",
           {{"measurable", r.measurable.measurable},
            {"draggable", r.measurable.draggable},
            {"resizeHandles", std::move(handles)},
            {"rotatable", r.measurable.rotatable}}},
          {"triples", std::move(triples)}};
}

json toJson(const View& v) {
  json rules = json::array();
  for (const auto& r : v.rules) rules.push_back(toJson(r));
  json j{{"name", v.name},
         {"active", v.active},
         {"stackRank", v.stackRank},
         {"unmappedPolicy", toString(v.unmappedPolicy)},
         {"rules", std::move(rules)}};
  if (v.defaultRule) j["defaultRule"] = toJson(*v.defaultRule);
  return j;
}

// Expression sources that fail to parse become issues; the rest of the document still loads.
struct ExpressionSink {
  std::vector<Issue>& issues;

  Expression operator()(const std::string& source, const std::string& ruleId, const char* role) {
    try {
      return Expression(source);
    } catch (const SyntaxError& e) {
      issues.push_back({ErrorCode::SyntaxError, ruleId,
                        "rule '" + ruleId + "' " + role + " at position " + std::to_string(e.position()) + ": " +
                            e.what()});
      return Expression();
    }
  }
};

RuleTriple tripleFromJson(const json& j, const std::string& path, ExpressionSink& expr) {
  RuleTriple t;
  t.id = str(j, "id", path);
  const json& triggers = array(j, "triggers", path);
  for (const auto& tr : triggers) {
    if (!tr.is_string()) shape(path + ".triggers", "expected trigger names");
    auto trigger = triggerFromString(tr.get<std::string>());
    if (!trigger) shape(path + ".triggers", "unknown trigger '" + tr.get<std::string>() + "'");
    t.triggers.push_back(*trigger);
  }
  auto selector = [&](const std::string& text, const std::string& at) {
    try {
      return parseTargetSelector(text);
    } catch (const Error& e) {
      shape(at, e.what());
    }
  };
  if (const json* target = optionalField(j, "target", path)) {
    if (!target->is_string()) shape(path + ".target", "expected a string");
    t.target = selector(target->get<std::string>(), path + ".target");
  }
  if (const json* cond = optionalField(j, "condition", path)) {
    if (!cond->is_string()) shape(path + ".condition", "expected a string");
    t.condition = expr(cond->get<std::string>(), t.id, "condition");
  }
  const json& a = field(j, "action", path);
  const std::string ap = path + ".action";
  const std::string kind = str(a, "kind", ap);
  if (kind == "export") {
    t.action = ExportAction{selector(str(a, "target", ap), ap + ".target"), str(a, "attribute", ap),
                            expr(str(a, "value", ap), t.id, "export value")};
  } else if (kind == "constraint") {
    Constraint c;
    c.property = enumField<LayoutProperty>(a, "property", ap, layoutPropertyFromString);
    c.op = enumField<ConstraintOp>(a, "operator", ap, constraintOpFromString);
    c.rhs = expr(str(a, "value", ap), t.id, "constraint value");
    t.action = ConstraintAction{std::move(c)};
  } else if (kind == "generic") {
    t.action = GenericAction{expr(str(a, "expression", ap), t.id, "generic expression")};
  } else {
    shape(ap + ".kind", "unknown action kind '" + kind + "'");
  }
  return t;
}

ViewRule ruleFromJson(const json& j, const std::string& path, ExpressionSink& expr) {
  ViewRule r;
  r.id = str(j, "id", path);
  const json& sel = field(j, "selector", path);
  r.selector.kind = enumField<ElementSelector::Kind>(sel, "kind", path + ".selector", selectorKindFromString);
  if (r.selector.kind != ElementSelector::Kind::ViewDefault) r.selector.name = str(sel, "name", path + ".selector");
  r.templ = str(j, "template", path);
  const json& m = field(j, "measurability", path);
  const std::string mp = path + ".measurability";
  r.measurable.measurable = boolean(m, "measurable", mp);
  r.measurable.draggable = boolean(m, "draggable", mp);
  r.measurable.rotatable = boolean(m, "rotatable", mp);
  for (const auto& h : strings(field(m, "resizeHandles", mp), mp + ".resizeHandles")) {
    auto handle = handleFromString(h);
    if (!handle) shape(mp + ".resizeHandles", "unknown handle '" + h + "'");
    r.measurable.resizeHandles.insert(*handle);
  }
  const json& triples = array(j, "triples", path);
  for (std::size_t i = 0; i < triples.size(); ++i) {
    r.triples.push_back(tripleFromJson(triples[i], path + ".triples[" + std::to_string(i) + "]", expr));
  }
  return r;
}

View viewFromJson(const json& j, const std::string& path, ExpressionSink& expr) {
  View v;
  v.name = str(j, "name", path);
  v.active = boolean(j, "active", path);
  v.stackRank = integer(j, "stackRank", path);
  v.unmappedPolicy = enumField<UnmappedPolicy>(j, "unmappedPolicy", path, unmappedPolicyFromString);
  const json& rules = array(j, "rules", path);
  for (std::size_t i = 0; i < rules.size(); ++i) {
    v.rules.push_back(ruleFromJson(rules[i], path + ".rules[" + std::to_string(i) + "]", expr));
  }
  if (const json* d = optionalField(j, "defaultRule", path)) v.defaultRule = ruleFromJson(*d, path + ".defaultRule", expr);
  return v;
}

json toJson(const AxisScale& s) {
  switch (s.kind) {
    case AxisScale::Kind::Linear: return {{"kind", "linear"}, {"slope", s.slope}, {"offset", s.offset}};
    case AxisScale::Kind::Power: return {{"kind", "power"}, {"exponent", s.exponent}};
    case AxisScale::Kind::LogBase: return {{"kind", "logBase"}, {"base", s.base}};
  }
  return {};
}

AxisScale scaleFromJson(const json& j, const std::string& path) {
  switch (enumField<AxisScale::Kind>(j, "kind", path, scaleKindFromString)) {
    case AxisScale::Kind::Linear: return AxisScale::linear(num(j, "slope", path), num(j, "offset", path));
    case AxisScale::Kind::Power: return AxisScale::power(num(j, "exponent", path));
    case AxisScale::Kind::LogBase: return AxisScale::logBase(num(j, "base", path));
  }
  return {};
}

json toJson(const NodeLayout& l) {
  return {{"x", l.x},
          {"y", l.y},
          {"width", l.width},
          {"height", l.height},
          {"rotation", l.rotation},
          {"anchor", toString(l.anchor)}};
}

NodeLayout layoutFromJson(const ObjectId& id, const json& j, const std::string& path) {
  NodeLayout l;
  l.elementId = id;
  l.x = num(j, "x", path);
  l.y = num(j, "y", path);
  l.width = num(j, "width", path);
  l.height = num(j, "height", path);
  l.rotation = num(j, "rotation", path);
  l.anchor = enumField<Anchor>(j, "anchor", path, anchorFromString);
  return l;
}

SlotValue eventValueFromJson(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_array()) return strings(v, path);
  shape(path, "unsupported value");
}

json toJson(const SlotValue& value) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, EnumLiteral>) {
          return v.literal;
        } else {
          return v;
        }
      },
      value);
}

json toJson(const Value& value) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ObjectList>) {
          return v.ids;
        } else if constexpr (std::is_same_v<T, SlotHandle>) {
          return {{"object", v.object}, {"feature", v.feature}};
        } else {
          return v;
        }
      },
      value);
}

json toJson(const Project& p) {
  json views = json::array();
  for (const auto& v : p.views) views.push_back(toJson(v));
  json layouts = json::object();
  for (const auto& [id, l] : p.layouts) layouts[id] = toJson(l);
  json scales = json::object();
  for (const auto& [name, s] : p.scales) scales[name] = toJson(s);
  return {{"formatVersion", kFormatVersion},
          {"canvas", {{"width", p.canvas.width}, {"height", p.canvas.height}}},
          {"metamodel", p.metamodel ? toJson(p.metamodel->spec()) : json(nullptr)},
          {"model", toJson(p.model)},
          {"views", std::move(views)},
          {"layouts", std::move(layouts)},
          {"scales", std::move(scales)}};
}

Project projectFromJson(const json& doc) {
  const std::string root = "$";
  const json& version = field(doc, "formatVersion", root);
  if (!version.is_number_integer() || version.get<std::int64_t>() != kFormatVersion) {
    throw Error(ErrorCode::VersionMismatch,
                "unsupported formatVersion " + version.dump() + ", expected " + std::to_string(kFormatVersion));
  }
  std::vector<Issue> issues;
  ExpressionSink expr{issues};
  Project p;

  const json& canvas = field(doc, "canvas", root);
  p.canvas.width = num(canvas, "width", "$.canvas");
  p.canvas.height = num(canvas, "height", "$.canvas");

  MetaModelSpec spec = metamodelFromJson(field(doc, "metamodel", root), "$.metamodel");
  try {
    p.metamodel = std::make_shared<const MetaModel>(defineMetamodel(std::move(spec)));
  } catch (const ValidationError& e) {
    throw ValidationError(ErrorCode::ValidationFailed, e.issues());
  }

  const json& m = field(doc, "model", root);
  p.model = Model(str(m, "id", "$.model"), p.metamodel);
  p.model.setMetamodelRefRaw(str(m, "metamodel", "$.model"));
  const json& next = field(m, "nextId", "$.model");
  if (!next.is_number_unsigned() && !(next.is_number_integer() && next.get<std::int64_t>() >= 0)) {
    shape("$.model.nextId", "expected a non-negative integer");
  }
  p.model.setNextIdRaw(next.get<std::uint64_t>());
  const json& objects = array(m, "objects", "$.model");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string op = "$.model.objects[" + std::to_string(i) + "]";
    ModelObject obj;
    obj.id = str(objects[i], "id", op);
    obj.className = str(objects[i], "class", op);
    const json& slots = field(objects[i], "slots", op);
    if (!slots.is_object()) shape(op + ".slots", "expected an object");
    if (!p.metamodel->findClass(obj.className)) {
      issues.push_back({ErrorCode::UnknownClass, obj.id, "unknown class '" + obj.className + "'"});
      continue;
    }
    for (const auto& [name, value] : slots.items()) {
      const Feature* f = p.metamodel->findFeature(obj.className, name);
      if (!f) {
        issues.push_back({ErrorCode::UnknownFeature, obj.id, "class " + obj.className + " has no feature '" + name + "'"});
        continue;
      }
      auto slot = slotFromJson(value, *f);
      if (!slot) {
        issues.push_back({ErrorCode::TypeMismatch, obj.id + "." + name, "value " + value.dump() + " has the wrong type"});
        continue;
      }
      obj.slots.emplace(name, std::move(*slot));
    }
    if (p.model.find(obj.id)) {
      issues.push_back({ErrorCode::DuplicateName, obj.id, "object id used twice"});
      continue;
    }
    p.model.insertRaw(std::move(obj));
  }

  const json& views = array(doc, "views", root);
  for (std::size_t i = 0; i < views.size(); ++i) {
    p.views.push_back(viewFromJson(views[i], "$.views[" + std::to_string(i) + "]", expr));
  }
  const json& layouts = field(doc, "layouts", root);
  if (!layouts.is_object()) shape("$.layouts", "expected an object");
  for (const auto& [id, l] : layouts.items()) p.layouts.emplace(id, layoutFromJson(id, l, "$.layouts." + id));
  const json& scales = field(doc, "scales", root);
  if (!scales.is_object()) shape("$.scales", "expected an object");
  for (const auto& [name, s] : scales.items()) p.scales.emplace(name, scaleFromJson(s, "$.scales." + name));

  if (!issues.empty()) throw ValidationError(ErrorCode::ValidationFailed, std::move(issues));
  validateProject(p);
  return p;
}

json toJson(const SessionEvent& e) {
  const EventPayload& p = e.payload;
  json payload = json::object();
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) payload[key] = *v;
  };
  put("x", p.x);
  put("y", p.y);
  put("width", p.width);
  put("height", p.height);
  put("rotation", p.rotation);
  if (p.handle) payload["handle"] = toString(*p.handle);
  if (p.anchor) payload["anchor"] = toString(*p.anchor);
  if (!p.className.empty()) payload["className"] = p.className;
  if (p.container) payload["container"] = {{"object", p.container->object}, {"reference", p.container->reference}};
  if (!p.feature.empty()) payload["feature"] = p.feature;
  if (p.value) payload["value"] = toJson(*p.value);
  if (!p.target.empty()) payload["target"] = p.target;
  if (!p.view.empty()) payload["view"] = p.view;
  return {{"seq", e.seq}, {"kind", toString(e.kind)}, {"elementId", e.elementId}, {"payload", std::move(payload)}};
}

SessionEvent eventFromJson(const json& j) {
  const std::string path = "event";
  SessionEvent e;
  e.seq = integer(j, "seq", path);
  e.kind = enumField<EventKind>(j, "kind", path, eventKindFromString);
  if (const json* id = optionalField(j, "elementId", path)) {
    if (!id->is_string()) shape(path + ".elementId", "expected a string");
    e.elementId = id->get<std::string>();
  }
  const json* payload = optionalField(j, "payload", path);
  if (!payload) return e;
  const std::string pp = path + ".payload";
  if (!payload->is_object()) shape(pp, "expected an object");
  EventPayload& p = e.payload;
  auto getNum = [&](const char* key, std::optional<double>& into) {
    if (const json* v = optionalField(*payload, key, pp)) into = num(*v, pp + "." + key);
  };
  getNum("x", p.x);
  getNum("y", p.y);
  getNum("width", p.width);
  getNum("height", p.height);
  getNum("rotation", p.rotation);
  if (optionalField(*payload, "handle", pp)) p.handle = enumField<Handle>(*payload, "handle", pp, handleFromString);
  if (optionalField(*payload, "anchor", pp)) p.anchor = enumField<Anchor>(*payload, "anchor", pp, anchorFromString);
  if (optionalField(*payload, "className", pp)) p.className = str(*payload, "className", pp);
  if (const json* c = optionalField(*payload, "container", pp)) {
    p.container = ContainerRef{str(*c, "object", pp + ".container"), str(*c, "reference", pp + ".container")};
  }
  if (optionalField(*payload, "feature", pp)) p.feature = str(*payload, "feature", pp);
  if (const json* v = optionalField(*payload, "value", pp)) p.value = eventValueFromJson(*v, pp + ".value");
  if (optionalField(*payload, "target", pp)) p.target = str(*payload, "target", pp);
  if (optionalField(*payload, "view", pp)) p.view = str(*payload, "view", pp);
  return e;
}

json toJson(const ModelDelta& d) {
  return {{"object", d.object}, {"feature", d.feature}, {"old", toJson(d.oldValue)}, {"new", toJson(d.newValue)}};
}

json toJson(const LayoutChange& c) {
  return {{"element", c.element}, {"property", toString(c.property)}, {"old", c.oldValue}, {"new", c.newValue}};
}

json toJson(const AttributeChange& c) {
  return {{"element", c.element}, {"attribute", c.attribute}, {"value", c.value}};
}

json toJson(const Violation& v) {
  return {{"code", toString(v.code)}, {"rule", v.rule}, {"element", v.element}, {"message", v.message}};
}

template <typename T>
json list(const std::vector<T>& items) {
  json out = json::array();
  for (const auto& item : items) out.push_back(toJson(item));
  return out;
}

json toJson(const EventOutcome& o) {
  json firings = json::array();
  for (const auto& f : o.firings) {
    json results = json::array();
    for (const auto& r : f.results) {
      json jr{{"rule", r.rule},
              {"kind", r.kind},
              {"layoutDeltas", list(r.layoutDeltas)},
              {"modelDeltas", list(r.modelDeltas)},
              {"attributeDeltas", list(r.attributeDeltas)},
              {"violations", list(r.violations)}};
      if (r.output) jr["output"] = toJson(*r.output);
      results.push_back(std::move(jr));
    }
    firings.push_back(
        {{"trigger", toString(f.trigger)}, {"element", f.element}, {"round", f.round}, {"results", std::move(results)}});
  }
  json j{{"seq", o.seq},
         {"kind", toString(o.kind)},
         {"element", o.element},
         {"accepted", o.accepted},
         {"firings", std::move(firings)},
         {"modelDeltas", list(o.modelDeltas)},
         {"layoutDeltas", list(o.layoutDeltas)},
         {"attributeDeltas", list(o.attributeDeltas)},
         {"violations", list(o.violations)},
         {"cascadeRounds", o.cascadeRounds}};
  if (o.created) j["created"] = *o.created;
  return j;
}

}  // namespace codec

std::string saveProject(const Project& project) { return codec::toJson(project).dump(2) + "\n"; }

Project loadProject(std::string_view text) {
  codec::json doc;
  try {
    doc = codec::json::parse(text);
  } catch (const codec::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  try {
    return codec::projectFromJson(doc);
  } catch (const codec::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed project document: ") + e.what());
  }
}

SessionEvent parseEvent(std::string_view text) {
  try {
    return codec::eventFromJson(codec::json::parse(text));
  } catch (const codec::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid event JSON: ") + e.what());
  }
}

std::string eventToJson(const SessionEvent& event) { return codec::toJson(event).dump(); }

std::vector<SessionEvent> parseScript(std::string_view jsonl) {
  std::vector<SessionEvent> events;
  std::size_t lineNo = 0;
  std::size_t start = 0;
  while (start <= jsonl.size()) {
    std::size_t end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(start, end - start);
    ++lineNo;
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (end == jsonl.size()) break;
      continue;
    }
    try {
      events.push_back(parseEvent(line));
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineNo) + ": " + e.what());
    }
    if (events.back().seq != static_cast<std::int64_t>(events.size())) {
      throw ValidationError(ErrorCode::ValidationFailed,
                            {{ErrorCode::OrderingViolation, "line " + std::to_string(lineNo),
                              "seq " + std::to_string(events.back().seq) + " where " +
                                  std::to_string(events.size()) + " was expected"}});
    }
    if (end == jsonl.size()) break;
  }
  return events;
}

std::string scriptToJsonl(const std::vector<SessionEvent>& events) {
  std::string out;
  for (const auto& e : events) out += eventToJson(e) + "\n";
  return out;
}

std::string outcomeToJson(const EventOutcome& outcome) { return codec::toJson(outcome).dump(); }

}  // namespace posyn
