#include <cmath>
#include <limits>
#include <random>

#include "fixture.hpp"
#include "posyn/engine.hpp"
#include "posyn/serialization.hpp"
#include "posyn/session.hpp"
#include "test_util.hpp"

using namespace posyn;
using namespace posyn::fixture;

namespace {

RuleTriple generic(std::string id, std::vector<Trigger> triggers, std::string body,
                   std::optional<std::string> condition = std::nullopt) {
  RuleTriple t{std::move(id), std::move(triggers), std::nullopt, std::nullopt, GenericAction{Expression(std::move(body))}};
  if (condition) t.condition = Expression(*condition);
  return t;
}

/// Fixture plus an active top-ranked view holding a personal rule for the glider.
Project withGliderRule(std::vector<RuleTriple> triples) {
  Project p = aircraft();
  View v;
  v.name = "extra";
  v.active = true;
  v.stackRank = 5;
  ViewRule r;
  r.id = "glider-only";
  r.selector = ElementSelector::personal(kGlider);
  r.templ = "<i>glider</i>";
  r.measurable.measurable = true;
  r.measurable.draggable = true;
  r.measurable.resizeHandles = {Handle::SE};
  r.triples = std::move(triples);
  v.rules.push_back(r);
  p.views.push_back(v);
  return p;
}

std::vector<EventOutcome> run(Engine& engine, const std::vector<SessionEvent>& events) {
  std::vector<EventOutcome> out;
  for (const auto& e : events) out.push_back(engine.apply(e));
  return out;
}

int count(const std::vector<EventOutcome>& outcomes, Trigger trigger) {
  int n = 0;
  for (const auto& o : outcomes) {
    for (const auto& f : o.firings) n += f.trigger == trigger;
  }
  return n;
}

}  // namespace

TEST(Triggers, EventMapping) {
  EXPECT_EQ(mapEventToTriggers(EventKind::Drag), std::vector<Trigger>{Trigger::WhileDragging});
  EXPECT_EQ(mapEventToTriggers(EventKind::SetAttribute), std::vector<Trigger>{Trigger::OnRefresh});
  EXPECT_EQ(mapEventToTriggers(EventKind::CreateObject), std::vector<Trigger>{Trigger::OnRefresh});
  EXPECT_EQ(mapEventToTriggers(EventKind::Link), std::vector<Trigger>{Trigger::OnRefresh});
  EXPECT_EQ(mapEventToTriggers(EventKind::ActivateView), std::vector<Trigger>{Trigger::OnRefresh});
  EXPECT_EQ(mapEventToTriggers(EventKind::DragStart), std::vector<Trigger>{Trigger::OnDragStart});
  EXPECT_EQ(mapEventToTriggers(EventKind::DragEnd), std::vector<Trigger>{Trigger::OnDragEnd});
  EXPECT_EQ(mapEventToTriggers(EventKind::ResizeStart), std::vector<Trigger>{Trigger::OnResizeStart});
  EXPECT_EQ(mapEventToTriggers(EventKind::Resize), std::vector<Trigger>{Trigger::WhileResizing});
  EXPECT_EQ(mapEventToTriggers(EventKind::ResizeEnd), std::vector<Trigger>{Trigger::OnResizeEnd});
  EXPECT_EQ(mapEventToTriggers(EventKind::RotateStart), std::vector<Trigger>{Trigger::OnRotationStart});
  EXPECT_EQ(mapEventToTriggers(EventKind::Rotate), std::vector<Trigger>{Trigger::WhileRotating});
  EXPECT_EQ(mapEventToTriggers(EventKind::RotateEnd), std::vector<Trigger>{Trigger::OnRotationEnd});
}

TEST(Triggers, GestureOrdering) {
  GestureTracker g;
  EXPECT_POSYN_ERROR(g.accept(EventKind::DragEnd, "o2"), ErrorCode::OrderingViolation);
  EXPECT_POSYN_ERROR(g.accept(EventKind::Drag, "o2"), ErrorCode::OrderingViolation);
  g.accept(EventKind::DragStart, "o2");
  EXPECT_EQ(g.active("o2"), Gesture::Drag);
  EXPECT_POSYN_ERROR(g.accept(EventKind::ResizeStart, "o2"), ErrorCode::OrderingViolation);
  EXPECT_POSYN_ERROR(g.accept(EventKind::DragStart, "o2"), ErrorCode::OrderingViolation);
  g.accept(EventKind::ResizeStart, "o3");
  g.accept(EventKind::Drag, "o2");
  g.accept(EventKind::DragEnd, "o2");
  EXPECT_EQ(g.active("o2"), Gesture::None);
  EXPECT_EQ(g.active("o3"), Gesture::Resize);
}

TEST(Fire, WhileDraggingRunsTheSeatsConstraint) {
  Engine e(aircraft());
  auto outs = run(e, script({simple(EventKind::DragStart, kBoeing), drag(kBoeing, 310, 200)}));
  const Firing& f = outs[1].firings.at(0);
  EXPECT_EQ(f.trigger, Trigger::WhileDragging);
  ASSERT_GE(f.results.size(), 2u);
  EXPECT_EQ(f.results[0].rule, "seats-x");
  EXPECT_EQ(f.results[0].kind, "constraint");
  ASSERT_EQ(f.results[0].layoutDeltas.size(), 1u);
  EXPECT_EQ(f.results[0].layoutDeltas[0].oldValue, 310.0);
  EXPECT_EQ(f.results[0].layoutDeltas[0].newValue, 300.0);
  EXPECT_EQ(layoutOf(e.project(), kBoeing).x, 300.0);
}

TEST(Fire, NoMatchingRuleStillRecordsTheFiring) {
  Engine e(aircraft());
  Firing f = e.fire(Trigger::WhileRotating, kBoeing);
  EXPECT_TRUE(f.results.empty());
  EXPECT_EQ(f.element, kBoeing);
}

TEST(Fire, LastOutputThreadsIntoTheNextCondition) {
  RuleTriple exportLabel{"label",
                         {Trigger::OnRefresh},
                         TargetSelector{TargetSelector::Kind::Container, ""},
                         Expression("this.lastOutput > 5"),
                         ExportAction{TargetSelector{TargetSelector::Kind::Container, ""}, "label",
                                      Expression("this.target.model.getChildren('name').getValue()")}};
  Engine e(withGliderRule({generic("seven", {Trigger::OnRefresh}, "3 + 4"), exportLabel}));
  Firing f = e.fire(Trigger::OnRefresh, kGlider);
  ASSERT_EQ(f.results.size(), 2u);
  EXPECT_EQ(f.results[0].output, Value(7.0));
  EXPECT_EQ(f.results[1].kind, "export");
  ASSERT_EQ(f.results[1].attributeDeltas.size(), 1u);
  EXPECT_EQ(f.results[1].attributeDeltas[0], (AttributeChange{kHangar, "label", "ROMAFIU1234"}));
  EXPECT_EQ(e.overlay().at(kHangar).at("label"), "ROMAFIU1234");
  EXPECT_EQ(e.project().model, aircraft().model);

  Engine quiet(withGliderRule({generic("two", {Trigger::OnRefresh}, "2"), exportLabel}));
  EXPECT_EQ(quiet.fire(Trigger::OnRefresh, kGlider).results.size(), 1u);
}

TEST(Fire, ExpressionErrorsBecomeViolations) {
  Engine e(withGliderRule({generic("bad", {Trigger::OnRefresh}, "1 / 0"), generic("ok", {Trigger::OnRefresh}, "1")}));
  Firing f = e.fire(Trigger::OnRefresh, kGlider);
  ASSERT_EQ(f.results.size(), 2u);
  ASSERT_EQ(f.results[0].violations.size(), 1u);
  EXPECT_EQ(f.results[0].violations[0].code, ErrorCode::DivideByZero);
  EXPECT_EQ(f.results[0].violations[0].rule, "bad");
  EXPECT_TRUE(f.results[1].violations.empty());
}

TEST(Fire, UnresolvedExportTarget) {
  RuleTriple t{"x", {Trigger::OnRefresh}, std::nullopt, std::nullopt,
               ExportAction{TargetSelector{TargetSelector::Kind::Id, "o42"}, "a", Expression("1")}};
  Engine e(withGliderRule({t}));
  Firing f = e.fire(Trigger::OnRefresh, kGlider);
  ASSERT_EQ(f.results.at(0).violations.size(), 1u);
  EXPECT_EQ(f.results[0].violations[0].code, ErrorCode::UnresolvedTarget);
}

TEST(Fire, MultipleConstraintsSettleJointly) {
  RuleTriple tall{"h<=w", {Trigger::WhileResizing}, std::nullopt, std::nullopt,
                  ConstraintAction{makeConstraint(LayoutProperty::Height, ConstraintOp::Le, "this.width")}};
  RuleTriple narrow{"w<=100", {Trigger::WhileResizing}, std::nullopt, std::nullopt,
                    ConstraintAction{makeConstraint(LayoutProperty::Width, ConstraintOp::Le, "100")}};
  Engine e(withGliderRule({tall, narrow}));
  auto outs = run(e, script({simple(EventKind::ResizeStart, kGlider), resize(kGlider, 150, 120)}));
  const Firing& f = outs[1].firings.at(0);
  ASSERT_EQ(f.results.size(), 3u);
  EXPECT_EQ(f.results[2].rule, "settle");
  NodeLayout l = layoutOf(e.project(), kGlider);
  EXPECT_EQ(l.width, 100.0);
  EXPECT_EQ(l.height, 100.0);
  EXPECT_TRUE(outs[1].violations.empty());
}

TEST(Refresh, SeatsChangeMovesTheNode) {
  Engine e(aircraft());
  EventOutcome o = e.apply(script({setSlot(kBoeing, "seats", std::int64_t{160})})[0]);
  EXPECT_TRUE(o.accepted);
  EXPECT_EQ(layoutOf(e.project(), kBoeing).x, 320.0);
  EXPECT_EQ(o.cascadeRounds, 1);
  EXPECT_EQ(*e.render(kBoeing), "<div class=\"airplane\">160 seats</div>");
}

TEST(Refresh, UnreadSlotFiresNothing) {
  Engine e(aircraft());
  EventOutcome o = e.apply(script({setSlot(kBoeing, "tankCapacity", 100.0)})[0]);
  EXPECT_TRUE(o.accepted);
  EXPECT_TRUE(o.firings.empty());
  EXPECT_EQ(o.modelDeltas.size(), 1u);
}

TEST(Refresh, IdenticalWriteBackStopsAfterOneRound) {
  Engine e(withGliderRule(
      {generic("echo", {Trigger::OnRefresh}, "this.model.getChildren('seats').setValue(this.model.getChildren('seats').getValue())")}));
  EventOutcome o = e.apply(script({setSlot(kGlider, "seats", std::int64_t{3})})[0]);
  EXPECT_EQ(o.cascadeRounds, 1);
  EXPECT_TRUE(o.violations.empty());
}

TEST(Refresh, RunawayCascadeHitsTheLimit) {
  Engine e(withGliderRule(
      {generic("inc", {Trigger::OnRefresh}, "this.model.getChildren('seats').setValue(this.model.getChildren('seats').getValue() + 1)")}));
  EventOutcome o = e.apply(script({setSlot(kGlider, "seats", std::int64_t{3})})[0]);
  EXPECT_EQ(o.cascadeRounds, kCascadeLimit);
  ASSERT_FALSE(o.violations.empty());
  EXPECT_EQ(o.violations.back().code, ErrorCode::CascadeLimitExceeded);
  EXPECT_EQ(std::get<std::int64_t>(e.project().model.at(kGlider).slots.at("seats")), 3 + kCascadeLimit);
}

TEST(Refresh, ReadersOf) {
  Engine e(aircraft());
  EXPECT_EQ(e.readersOf({kBoeing, "seats"}), (std::set<ObjectId, IdLess>{kBoeing}));
  EXPECT_EQ(e.readersOf({kHangar, "name"}), (std::set<ObjectId, IdLess>{kHangar}));
  EXPECT_TRUE(e.readersOf({kBoeing, "tankCapacity"}).empty());
}

TEST(Events, CreateObjectSeedsTheNewElement) {
  Engine e(aircraft());
  SessionEvent c;
  c.seq = 1;
  c.kind = EventKind::CreateObject;
  c.payload.className = "Glider";
  c.payload.container = ContainerRef{kHangar, "airplanes"};
  c.payload.x = 50;
  c.payload.y = -3;
  c.payload.anchor = Anchor::BottomLeft;
  EventOutcome o = e.apply(c);
  ASSERT_TRUE(o.accepted);
  ASSERT_EQ(o.created, ObjectId("o5"));
  ASSERT_EQ(o.modelDeltas.size(), 1u);
  EXPECT_EQ(o.modelDeltas[0].feature, "airplanes");
  NodeLayout l = layoutOf(e.project(), "o5");
  EXPECT_EQ(l.x, 0.0);
  EXPECT_EQ(l.y, 0.0);
  EXPECT_EQ(l.anchor, Anchor::BottomLeft);
  EXPECT_TRUE(checkConformance(e.project().model).conforms());
}

TEST(Events, Rejections) {
  Engine e(aircraft());
  auto outs = run(e, script({drag("o99", 1, 1), simple(EventKind::DragEnd, kBoeing),
                             simple(EventKind::DragStart, kHangar), resize(kBoeing, 10, 10, Handle::NW),
                             simple(EventKind::RotateStart, kBoeing), simple(EventKind::DragStart, kBoeing),
                             drag(kBoeing, std::numeric_limits<double>::quiet_NaN(), 1)}));
  const ErrorCode expected[] = {ErrorCode::UnknownObject,       ErrorCode::OrderingViolation,
                                ErrorCode::CapabilityViolation, ErrorCode::CapabilityViolation,
                                ErrorCode::CapabilityViolation};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_FALSE(outs[i].accepted) << i;
    ASSERT_EQ(outs[i].violations.size(), 1u) << i;
    EXPECT_EQ(outs[i].violations[0].code, expected[i]) << i;
  }
  EXPECT_TRUE(outs[5].accepted);
  EXPECT_FALSE(outs[6].accepted);
  EXPECT_EQ(outs[6].violations[0].code, ErrorCode::DomainError);

  SessionEvent stale = drag(kBoeing, 1, 1);
  stale.seq = 3;
  EventOutcome o = e.apply(stale);
  EXPECT_FALSE(o.accepted);
  EXPECT_EQ(o.violations[0].code, ErrorCode::OrderingViolation);
  EXPECT_EQ(e.project().layouts, aircraft().layouts);
}

TEST(Events, ExcludedElementsAreNotVisible) {
  Project p = aircraft();
  p.views[0].rules.pop_back();
  p.views[0].unmappedPolicy = UnmappedPolicy::Exclude;
  Engine e(p);
  EXPECT_FALSE(e.render(kHangar));
  EventOutcome o = e.apply(script({simple(EventKind::DragStart, kHangar)})[0]);
  EXPECT_EQ(o.violations.at(0).code, ErrorCode::NotVisible);
}

TEST(Events, ViewActivation) {
  Project p = aircraft();
  p.views[1].stackRank = 1;
  Engine e(p);
  EventOutcome clash = e.apply(script({activate("bidirectional")})[0]);
  EXPECT_FALSE(clash.accepted);
  EXPECT_EQ(clash.violations[0].code, ErrorCode::InvalidView);
  SessionEvent off = deactivate("positional");
  off.seq = 2;
  EventOutcome o = e.apply(off);
  EXPECT_TRUE(o.accepted);
  EXPECT_EQ(o.firings.size(), 4u);
  EXPECT_EQ(e.styles().at(kBoeing).tier, Tier::GlobalDefault);
}

TEST(Events, LinkAndSetAttributeErrorsAreRejected) {
  Engine e(aircraft());
  SessionEvent link;
  link.seq = 1;
  link.kind = EventKind::Link;
  link.elementId = kHangar;
  link.payload.feature = "airplanes";
  link.payload.target = kBoeing;
  EventOutcome o = e.apply(link);
  EXPECT_FALSE(o.accepted);
  EXPECT_EQ(o.violations[0].code, ErrorCode::MultiplicityViolation);
  SessionEvent bad = setSlot(kBoeing, "seats", std::string("many"));
  bad.seq = 2;
  EXPECT_EQ(e.apply(bad).violations.at(0).code, ErrorCode::TypeMismatch);
}

TEST(Scenarios, SnapToThreeHundred) {
  auto r = replay(aircraft(), snapScript());
  EXPECT_EQ(r.violations, 0u);
  EXPECT_EQ(layoutOf(r.finalState, kBoeing).x, 300.0);
  EXPECT_EQ(count(r.trace, Trigger::OnDragStart), 1);
  EXPECT_EQ(count(r.trace, Trigger::WhileDragging), 7);
  EXPECT_EQ(count(r.trace, Trigger::OnDragEnd), 1);
}

TEST(Scenarios, BidirectionalRoundTrip) {
  auto events = dragGesture(aircraft(), kBoeing, 301, 1);
  events.insert(events.begin(), {deactivate("positional"), activate("bidirectional")});
  auto r = replay(aircraft(), script(events));
  EXPECT_EQ(r.violations, 0u);
  EXPECT_EQ(std::get<std::int64_t>(r.finalState.model.at(kBoeing).slots.at("seats")), 151);
  EXPECT_EQ(layoutOf(r.finalState, kBoeing).x, 302.0);
  EXPECT_EQ(r.trace.back().cascadeRounds, 1);
}

TEST(EngineProperty, TriggerAccounting) {
  std::mt19937_64 rng(8);
  for (int d = 0; d <= 25; ++d) {
    const ObjectId el = (rng() % 2) ? kBoeing : kGlider;
    auto r = replay(aircraft(), script(dragGesture(aircraft(), el, static_cast<double>(rng() % 500), d)));
    ASSERT_EQ(count(r.trace, Trigger::WhileDragging), d);
    ASSERT_EQ(count(r.trace, Trigger::OnDragStart), 1);
    ASSERT_EQ(count(r.trace, Trigger::OnDragEnd), 1);
  }
}

TEST(EngineProperty, ReplayIsDeterministic) {
  auto events = snapScript();
  auto a = replay(aircraft(), events);
  auto b = replay(aircraft(), events);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(saveProject(a.finalState), saveProject(b.finalState));
  for (std::size_t i = 0; i < a.trace.size(); ++i) EXPECT_EQ(outcomeToJson(a.trace[i]), outcomeToJson(b.trace[i]));
}

TEST(EngineProperty, FuzzedEventsNeverAbort) {
  std::mt19937_64 rng(4242);
  const std::vector<ObjectId> ids = {"", "o1", "o2", "o3", "o4", "o5", "o6", "zz"};
  const std::vector<std::string> features = {"seats", "name", "airplanes", "height", "nope"};
  const std::vector<SlotValue> values = {std::int64_t{5}, std::int64_t{-1}, 2.5, std::string("s"), ObjectIds{"o4"}};
  const double specials[] = {0, -1, 1e308, std::numeric_limits<double>::infinity(),
                             std::numeric_limits<double>::quiet_NaN(), 123.5};
  Engine e(aircraft());
  std::int64_t seq = 0;
  for (int i = 0; i < 5000; ++i) {
    SessionEvent ev;
    ev.seq = (rng() % 20 == 0) ? seq : ++seq;
    ev.kind = static_cast<EventKind>(rng() % 14);
    ev.elementId = ids[rng() % ids.size()];
    auto num = [&] { return (rng() % 4 == 0) ? specials[rng() % 6] : static_cast<double>(rng() % 800); };
    if (rng() % 2) ev.payload.x = num();
    if (rng() % 2) ev.payload.y = num();
    if (rng() % 3 == 0) ev.payload.width = num();
    if (rng() % 3 == 0) ev.payload.height = num();
    if (rng() % 3 == 0) ev.payload.rotation = num();
    if (rng() % 2) ev.payload.handle = kAllHandles[rng() % 8];
    ev.payload.className = (rng() % 2) ? "Glider" : "Airplane";
    if (rng() % 2) ev.payload.container = ContainerRef{"o1", "airplanes"};
    ev.payload.feature = features[rng() % features.size()];
    if (rng() % 2) ev.payload.value = values[rng() % values.size()];
    ev.payload.target = ids[rng() % ids.size()];
    ev.payload.view = (rng() % 2) ? "positional" : "bidirectional";
    ASSERT_NO_THROW(e.apply(ev)) << i;
    ASSERT_TRUE(checkConformance(e.project().model).conforms()) << i;
  }
  for (const auto& issue : checkProject(e.project())) ADD_FAILURE() << toString(issue.code) << " " << issue.where << " " << issue.message;
}
