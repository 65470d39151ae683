#include "fixture.hpp"

#include <cmath>

namespace posyn::fixture {

namespace {

MetaModelSpec aircraftMetamodel() {
  MetaModelSpec spec;
  spec.name = "Aircraft";
  MetaClassDef hangar{"Hangar", false, {}, {{"name", PrimitiveType::String, {}, {}, {}}}, {}};
  hangar.references.push_back({"airplanes", "Airplane", true, 0, kUnbounded});
  MetaClassDef airplane{"Airplane", true, {}, {}, {}};
  airplane.attributes = {
      {"maxAltitude", PrimitiveType::Int, {}, 0.0, {}},
      {"height", PrimitiveType::Float, {}, {}, {}},
      {"length", PrimitiveType::Float, {}, {}, {}},
      {"seats", PrimitiveType::Int, {}, 0.0, 1000.0},
  };
  MetaClassDef motorized{"Motorized", false, {"Airplane"}, {{"tankCapacity", PrimitiveType::Float, {}, {}, {}}}, {}};
  MetaClassDef glider{"Glider", false, {"Airplane"}, {}, {}};
  spec.classes = {hangar, airplane, motorized, glider};
  return spec;
}

RuleTriple constraintTriple(std::string id, std::vector<Trigger> triggers, LayoutProperty property, ConstraintOp op,
                            std::string rhs) {
  return {std::move(id), std::move(triggers), std::nullopt, std::nullopt,
          ConstraintAction{makeConstraint(property, op, std::move(rhs))}};
}

Measurability dragAndSouthEast() {
  Measurability m;
  m.measurable = true;
  m.draggable = true;
  m.resizeHandles = {Handle::SE};
  return m;
}

const char* kSeatsX = "2 * this.model.getChildren('seats').getValue()";

ViewRule hangarRule(std::string id) {
  ViewRule rule;
  rule.id = std::move(id);
  rule.selector = ElementSelector::metaclass("Hangar");
  rule.templ = "<div class=\"hangar\">$##name$</div>";
  return rule;
}

View positionalView() {
  View view;
  view.name = "positional";
  view.active = true;
  view.stackRank = 1;
  ViewRule airplane;
  airplane.id = "airplane";
  airplane.selector = ElementSelector::metaclass("Airplane");
  airplane.templ = "<div class=\"airplane\">$##seats$ seats</div>";
  airplane.measurable = dragAndSouthEast();
  airplane.triples = {
      constraintTriple("seats-x", {Trigger::OnRefresh, Trigger::WhileDragging}, LayoutProperty::VertexX,
                       ConstraintOp::Eq, kSeatsX),
      constraintTriple("y-nonneg", {Trigger::OnRefresh, Trigger::WhileDragging}, LayoutProperty::Y, ConstraintOp::Ge,
                       "0"),
      constraintTriple("height-length", {Trigger::OnRefresh, Trigger::WhileResizing}, LayoutProperty::Height,
                       ConstraintOp::Le, "this.width"),
  };
  view.rules = {airplane, hangarRule("hangar")};
  return view;
}

View bidirectionalView() {
  View view;
  view.name = "bidirectional";
  view.active = false;
  view.stackRank = 0;
  ViewRule airplane;
  airplane.id = "airplane-bidi";
  airplane.selector = ElementSelector::metaclass("Airplane");
  airplane.templ = "<div class=\"airplane\">$##seats$ seats</div>";
  airplane.measurable = dragAndSouthEast();
  airplane.triples = {
      constraintTriple("x-min", {Trigger::WhileDragging}, LayoutProperty::VertexX, ConstraintOp::Ge, "2"),
      {"seats-from-x",
       {Trigger::OnDragEnd},
       std::nullopt,
       std::nullopt,
       GenericAction{Expression("this.model.getChildren('seats').setValue(round(this.vertexSize.x / 2))")}},
      constraintTriple("bidi-seats-x", {Trigger::OnRefresh}, LayoutProperty::VertexX, ConstraintOp::Eq, kSeatsX),
      constraintTriple("bidi-y-nonneg", {Trigger::OnRefresh, Trigger::WhileDragging}, LayoutProperty::Y,
                       ConstraintOp::Ge, "0"),
      constraintTriple("bidi-height-length", {Trigger::OnRefresh, Trigger::WhileResizing}, LayoutProperty::Height,
                       ConstraintOp::Le, "this.width"),
  };
  view.rules = {airplane, hangarRule("hangar-bidi")};
  return view;
}

struct PlaneSpec {
  const char* className;
  std::int64_t seats;
  std::int64_t maxAltitude;
  double length;
  double height;
  std::optional<double> tankCapacity;
};

}  // namespace

Project aircraft() {
  Project p;
  p.metamodel = std::make_shared<const MetaModel>(defineMetamodel(aircraftMetamodel()));
  p.model = Model("hangar-model", p.metamodel);
  Model& m = p.model;

  ObjectId hangar = instantiate(m, "Hangar");
  writeSlot(m, hangar, "name", std::string("ROMAFIU1234"));
  NodeLayout hl;
  hl.elementId = hangar;
  hl.x = 20;
  hl.y = 20;
  hl.width = 960;
  hl.height = 40;
  p.layouts[hangar] = hl;

  const PlaneSpec planes[] = {
      {"Motorized", 150, 40000, 63.0, 16.0, 4200.0},
      {"Motorized", 180, 36100, 70.0, 18.0, 5000.0},
      {"Glider", 2, 10000, 20.0, 5.0, std::nullopt},
  };
  for (const auto& s : planes) {
    ObjectId id = instantiate(m, s.className, ContainerRef{hangar, "airplanes"});
    writeSlot(m, id, "seats", s.seats);
    writeSlot(m, id, "maxAltitude", s.maxAltitude);
    writeSlot(m, id, "length", s.length);
    writeSlot(m, id, "height", s.height);
    if (s.tankCapacity) writeSlot(m, id, "tankCapacity", *s.tankCapacity);
    NodeLayout l;
    l.elementId = id;
    l.anchor = Anchor::BottomLeft;
    l.x = 2.0 * static_cast<double>(s.seats);
    l.y = std::sqrt(static_cast<double>(s.maxAltitude));
    l.width = s.length;
    l.height = s.height;
    p.layouts[id] = l;
  }

  p.views = {positionalView(), bidirectionalView()};
  p.scales.emplace("seats", AxisScale::linear(2.0, 0.0));
  p.scales.emplace("altitude", AxisScale::power(0.5));
  p.scales.emplace("size", AxisScale::logBase(2.0));
  validateProject(p);
  return p;
}

SessionEvent drag(const ObjectId& element, double x, double y) {
  SessionEvent e;
  e.kind = EventKind::Drag;
  e.elementId = element;
  e.payload.x = x;
  e.payload.y = y;
  return e;
}

SessionEvent resize(const ObjectId& element, double width, double height, Handle handle) {
  SessionEvent e;
  e.kind = EventKind::Resize;
  e.elementId = element;
  e.payload.width = width;
  e.payload.height = height;
  e.payload.handle = handle;
  return e;
}

SessionEvent simple(EventKind kind, const ObjectId& element) {
  SessionEvent e;
  e.kind = kind;
  e.elementId = element;
  return e;
}

SessionEvent activate(const std::string& view) {
  SessionEvent e;
  e.kind = EventKind::ActivateView;
  e.payload.view = view;
  return e;
}

SessionEvent deactivate(const std::string& view) {
  SessionEvent e;
  e.kind = EventKind::DeactivateView;
  e.payload.view = view;
  return e;
}

SessionEvent setSlot(const ObjectId& element, const std::string& feature, SlotValue value) {
  SessionEvent e;
  e.kind = EventKind::SetAttribute;
  e.elementId = element;
  e.payload.feature = feature;
  e.payload.value = std::move(value);
  return e;
}

std::vector<SessionEvent> script(std::vector<SessionEvent> events) {
  std::int64_t seq = 1;
  for (auto& e : events) e.seq = seq++;
  return events;
}

std::vector<SessionEvent> dragGesture(const Project& project, const ObjectId& element, double toX, int steps) {
  const NodeLayout start = layoutOf(project, element);
  std::vector<SessionEvent> events{simple(EventKind::DragStart, element)};
  for (int i = 1; i <= steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    events.push_back(drag(element, start.x + t * (toX - start.x), start.y));
  }
  events.push_back(simple(EventKind::DragEnd, element));
  return events;
}

std::vector<SessionEvent> snapScript() { return script(dragGesture(aircraft(), kBoeing, 310.0, 7)); }

}  // namespace posyn::fixture
