#include "posyn/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace posyn {

std::string_view toString(EventKind kind) {
  switch (kind) {
    case EventKind::CreateObject: return "createObject";
    case EventKind::SetAttribute: return "setAttribute";
    case EventKind::Link: return "link";
    case EventKind::ActivateView: return "activateView";
    case EventKind::DeactivateView: return "deactivateView";
    case EventKind::DragStart: return "dragStart";
    case EventKind::Drag: return "drag";
    case EventKind::DragEnd: return "dragEnd";
    case EventKind::ResizeStart: return "resizeStart";
    case EventKind::Resize: return "resize";
    case EventKind::ResizeEnd: return "resizeEnd";
    case EventKind::RotateStart: return "rotateStart";
    case EventKind::Rotate: return "rotate";
    case EventKind::RotateEnd: return "rotateEnd";
  }
  return "?";
}

std::optional<EventKind> eventKindFromString(std::string_view text) {
  for (int k = 0; k <= static_cast<int>(EventKind::RotateEnd); ++k) {
    auto kind = static_cast<EventKind>(k);
    if (toString(kind) == text) return kind;
  }
  return std::nullopt;
}

std::vector<Trigger> mapEventToTriggers(EventKind kind) {
  switch (kind) {
    case EventKind::CreateObject:
    case EventKind::SetAttribute:
    case EventKind::Link:
    case EventKind::ActivateView:
    case EventKind::DeactivateView: return {Trigger::OnRefresh};
    case EventKind::DragStart: return {Trigger::OnDragStart};
    case EventKind::Drag: return {Trigger::WhileDragging};
    case EventKind::DragEnd: return {Trigger::OnDragEnd};
    case EventKind::ResizeStart: return {Trigger::OnResizeStart};
    case EventKind::Resize: return {Trigger::WhileResizing};
    case EventKind::ResizeEnd: return {Trigger::OnResizeEnd};
    case EventKind::RotateStart: return {Trigger::OnRotationStart};
    case EventKind::Rotate: return {Trigger::WhileRotating};
    case EventKind::RotateEnd: return {Trigger::OnRotationEnd};
  }
  return {};
}

namespace {

enum class Phase { Start, While, End };

struct GestureStep {
  Gesture gesture;
  Phase phase;
};

std::optional<GestureStep> gestureStep(EventKind kind) {
  switch (kind) {
    case EventKind::DragStart: return GestureStep{Gesture::Drag, Phase::Start};
    case EventKind::Drag: return GestureStep{Gesture::Drag, Phase::While};
    case EventKind::DragEnd: return GestureStep{Gesture::Drag, Phase::End};
    case EventKind::ResizeStart: return GestureStep{Gesture::Resize, Phase::Start};
    case EventKind::Resize: return GestureStep{Gesture::Resize, Phase::While};
    case EventKind::ResizeEnd: return GestureStep{Gesture::Resize, Phase::End};
    case EventKind::RotateStart: return GestureStep{Gesture::Rotate, Phase::Start};
    case EventKind::Rotate: return GestureStep{Gesture::Rotate, Phase::While};
    case EventKind::RotateEnd: return GestureStep{Gesture::Rotate, Phase::End};
    default: return std::nullopt;
  }
}

std::string_view gestureName(Gesture g) {
  switch (g) {
    case Gesture::None: return "no gesture";
    case Gesture::Drag: return "drag";
    case Gesture::Resize: return "resize";
    case Gesture::Rotate: return "rotate";
  }
  return "?";
}

constexpr LayoutProperty kStoredProperties[] = {LayoutProperty::X, LayoutProperty::Y, LayoutProperty::Width,
                                                LayoutProperty::Height, LayoutProperty::Rotation};

std::vector<LayoutChange> diff(const NodeLayout& a, const NodeLayout& b) {
  std::vector<LayoutChange> out;
  for (LayoutProperty p : kStoredProperties) {
    double before = get(a, p);
    double after = get(b, p);
    if (before != after) out.push_back({a.elementId, p, before, after});
  }
  return out;
}

template <typename T>
void append(std::vector<T>& to, const std::vector<T>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

bool positiveFinite(const std::optional<double>& v) { return !v || (std::isfinite(*v) && *v > 0); }
bool finite(const std::optional<double>& v) { return !v || std::isfinite(*v); }

}  // namespace

void GestureTracker::accept(EventKind kind, const ObjectId& element) {
  auto step = gestureStep(kind);
  if (!step) return;
  const Gesture current = active(element);
  const std::string what = std::string(toString(kind)) + " on '" + element + "'";
  switch (step->phase) {
    case Phase::Start:
      if (current != Gesture::None) {
        throw Error(ErrorCode::OrderingViolation,
                    what + " while a " + std::string(gestureName(current)) + " is in progress");
      }
      active_[element] = step->gesture;
      break;
    case Phase::While:
    case Phase::End:
      if (current != step->gesture) {
        throw Error(ErrorCode::OrderingViolation, what + " without a matching start");
      }
      if (step->phase == Phase::End) active_.erase(element);
      break;
  }
}

Gesture GestureTracker::active(std::string_view element) const {
  auto it = active_.find(element);
  return it == active_.end() ? Gesture::None : it->second;
}

Engine::Engine(Project project) : project_(std::move(project)) {
  validateProject(project_);
  restyle();
}

void Engine::restyle() { styles_ = combineViews(project_.views, project_.model); }

void Engine::setLayout(const NodeLayout& layout) { project_.layouts[layout.elementId] = layout; }

void Engine::absorb(EventOutcome& out, Firing firing) {
  for (const auto& r : firing.results) {
    append(out.layoutDeltas, r.layoutDeltas);
    append(out.modelDeltas, r.modelDeltas);
    append(out.attributeDeltas, r.attributeDeltas);
    append(out.violations, r.violations);
  }
  out.firings.push_back(std::move(firing));
}

Firing Engine::fire(Trigger trigger, const ObjectId& element, int round, const Motion& motion) {
  Firing f{trigger, element, round, {}};
  auto style = styles_.find(element);
  if (style == styles_.end()) return f;
  const std::vector<RuleTriple> triples = style->second.triples;

  std::optional<Value> last;
  std::deque<NodeLayout> targets;  // stable addresses for EvalContext::target
  std::vector<Constraint> constraints;
  std::vector<EvalContext> constraintContexts;
  std::vector<std::string> constraintRules;

  for (const RuleTriple& triple : triples) {
    if (!triple.firesOn(trigger)) continue;
    const NodeLayout self = layoutOf(project_, element);
    EvalContext ctx;
    ctx.model = &project_.model;
    ctx.element = element;
    ctx.self = &self;
    ctx.lastOutput = last;
    if (triple.target) {
      if (auto t = resolveTarget(*triple.target, project_.model, element)) {
        targets.push_back(layoutOf(project_, *t));
        ctx.targetElement = *t;
        ctx.target = &targets.back();
      }
    }
    ActionResult r;
    r.rule = triple.id;
    r.kind = std::string(actionKind(triple.action));
    try {
      if (triple.condition) {
        Value c = evaluate(triple.condition->ast(), ctx);
        const bool* holdsNow = std::get_if<bool>(&c);
        if (!holdsNow) throw Error(ErrorCode::TypeError, "condition evaluated to " + std::string(typeName(c)));
        if (!*holdsNow) continue;
      }
      if (const auto* a = std::get_if<ExportAction>(&triple.action)) {
        auto dest = resolveTarget(a->target, project_.model, element);
        if (!dest) {
          throw Error(ErrorCode::UnresolvedTarget, "export target '" + toString(a->target) + "' matches nothing");
        }
        Value v = evaluate(a->value.ast(), ctx);
        std::string text = describe(v);
        auto& attrs = overlay_[*dest];
        auto it = attrs.find(a->attribute);
        if (it == attrs.end() || it->second != text) {
          attrs[a->attribute] = text;
          r.attributeDeltas.push_back({*dest, a->attribute, text});
        }
        r.output = std::move(v);
      } else if (const auto* a = std::get_if<ConstraintAction>(&triple.action)) {
        const Constraint& c = a->constraint;
        Projection pr = enforce(c, self, ctx, motion.along(c.property));
        r.layoutDeltas = diff(self, pr.layout);
        if (!r.layoutDeltas.empty()) setLayout(pr.layout);
        if (!pr.satisfied) {
          r.violations.push_back({ErrorCode::ConstraintUnsatisfied, triple.id, element,
                                  std::string(toString(c.property)) + " " + std::string(toString(c.op)) + " " +
                                      formatNumber(pr.rhs) + " has no feasible projection"});
        }
        r.output = Value{get(pr.layout, c.property)};
        constraints.push_back(c);
        constraintContexts.push_back(ctx);
        constraintContexts.back().self = nullptr;
        constraintRules.push_back(triple.id);
      } else {
        const auto& a2 = std::get<GenericAction>(triple.action);
        Execution ex = execute(a2.body.ast(), ctx, &project_.model);
        if (ex.delta) r.modelDeltas.push_back(*ex.delta);
        r.output = std::move(ex.output);
      }
    } catch (const Error& e) {
      r.violations.push_back({e.code(), triple.id, element, e.what()});
    }
    if (r.output) last = r.output;
    f.results.push_back(std::move(r));
  }

  if (constraints.size() >= 2) {
    const NodeLayout before = layoutOf(project_, element);
    ActionResult r;
    r.rule = "settle";
    r.kind = "settle";
    try {
      auto settled = enforceAll(constraints, before, constraintContexts, motion);
      r.layoutDeltas = diff(before, settled.layout);
      if (!r.layoutDeltas.empty()) setLayout(settled.layout);
      for (std::size_t i : settled.report.unsatisfied) {
        r.violations.push_back({ErrorCode::ConstraintUnsatisfied, constraintRules[i], element,
                                "constraint unsatisfied after " + std::to_string(settled.report.iterations) +
                                    (settled.report.converged ? " passes" : " passes without converging")});
      }
    } catch (const Error& e) {
      r.violations.push_back({e.code(), "settle", element, e.what()});
    }
    if (!r.layoutDeltas.empty() || !r.violations.empty()) f.results.push_back(std::move(r));
  }
  return f;
}

std::set<ObjectId, IdLess> Engine::readersOf(const SlotKey& slot) const {
  std::set<ObjectId, IdLess> out;
  for (const auto& [id, style] : styles_) {
    if (id == slot.object) {
      auto names = placeholders(style.chosen.templ);
      if (std::find(names.begin(), names.end(), slot.feature) != names.end()) {
        out.insert(id);
        continue;
      }
    }
    std::set<SlotKey> reads;
    const NodeLayout self = layoutOf(project_, id);
    for (const RuleTriple& triple : style.triples) {
      if (!triple.firesOn(Trigger::OnRefresh)) continue;
      std::optional<NodeLayout> target;
      EvalContext ctx;
      ctx.model = &project_.model;
      ctx.element = id;
      ctx.self = &self;
      ctx.reads = &reads;
      if (triple.target) {
        if (auto t = resolveTarget(*triple.target, project_.model, id)) {
          target = layoutOf(project_, *t);
          ctx.targetElement = *t;
          ctx.target = &*target;
        }
      }
      auto tryEval = [&](const Expression& e) {
        try {
          execute(e.ast(), ctx, nullptr);
        } catch (const Error&) {
          // reads up to the failure point still count
        }
      };
      if (triple.condition) tryEval(*triple.condition);
      std::visit(
          [&](const auto& a) {
            using A = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<A, ExportAction>) {
              tryEval(a.value);
            } else if constexpr (std::is_same_v<A, ConstraintAction>) {
              tryEval(a.constraint.rhs);
            } else {
              tryEval(a.body);
            }
          },
          triple.action);
    }
    if (reads.contains(slot)) out.insert(id);
  }
  return out;
}

Engine::RefreshOutcome Engine::refresh(std::span<const ModelDelta> deltas, const std::set<ObjectId, IdLess>& seeds) {
  RefreshOutcome out;
  std::set<ObjectId, IdLess> pending = seeds;
  for (const auto& d : deltas) {
    if (!d.changed()) continue;
    pending.merge(readersOf({d.object, d.feature}));
  }
  for (int round = 1; !pending.empty(); ++round) {
    if (round > kCascadeLimit) {
      out.limitExceeded = true;
      break;
    }
    std::vector<ModelDelta> changed;
    for (const ObjectId& el : pending) {
      if (!styles_.contains(el)) continue;
      Firing f = fire(Trigger::OnRefresh, el, round);
      for (const auto& r : f.results) {
        for (const auto& d : r.modelDeltas) {
          if (d.changed()) changed.push_back(d);
        }
      }
      out.firings.push_back(std::move(f));
    }
    out.rounds = round;
    pending.clear();
    for (const auto& d : changed) pending.merge(readersOf({d.object, d.feature}));
  }
  return out;
}

void Engine::cascade(std::span<const ModelDelta> deltas, const std::set<ObjectId, IdLess>& seeds, EventOutcome& out) {
  RefreshOutcome r = refresh(deltas, seeds);
  for (auto& f : r.firings) absorb(out, std::move(f));
  out.cascadeRounds = r.rounds;
  if (r.limitExceeded) {
    out.violations.push_back({ErrorCode::CascadeLimitExceeded, "-", out.element,
                              "onRefresh cascade still changing the model after " + std::to_string(kCascadeLimit) +
                                  " rounds"});
  }
}

namespace {

void reject(EventOutcome& out, ErrorCode code, std::string message) {
  out.accepted = false;
  out.violations.push_back({code, "-", out.element, std::move(message)});
}

}  // namespace

EventOutcome Engine::apply(const SessionEvent& event) {
  EventOutcome out;
  out.seq = event.seq;
  out.kind = event.kind;
  out.element = event.elementId;
  if (event.seq <= lastSeq_) {
    reject(out, ErrorCode::OrderingViolation,
           "seq " + std::to_string(event.seq) + " does not follow " + std::to_string(lastSeq_));
    return out;
  }
  lastSeq_ = event.seq;
  switch (event.kind) {
    case EventKind::CreateObject:
    case EventKind::SetAttribute:
    case EventKind::Link: modelEvent(event, out); break;
    case EventKind::ActivateView:
    case EventKind::DeactivateView: viewEvent(event, out); break;
    default: gestureEvent(event, out); break;
  }
  return out;
}

void Engine::modelEvent(const SessionEvent& event, EventOutcome& out) {
  const EventPayload& p = event.payload;
  Model& model = project_.model;
  try {
    if (event.kind == EventKind::CreateObject) {
      if (!finite(p.x) || !finite(p.y) || !positiveFinite(p.width) || !positiveFinite(p.height) || !finite(p.rotation)) {
        reject(out, ErrorCode::DomainError, "createObject needs finite geometry with positive size");
        return;
      }
      std::optional<SlotValue> containerBefore;
      if (p.container) {
        if (const ModelObject* c = model.find(p.container->object)) {
          auto it = c->slots.find(p.container->reference);
          if (it != c->slots.end()) containerBefore = it->second;
        }
      }
      ObjectId id = instantiate(model, p.className, p.container);
      out.created = id;
      out.element = id;
      std::vector<ModelDelta> deltas;
      if (p.container && containerBefore) {
        deltas.push_back({p.container->object, p.container->reference, *containerBefore,
                          model.at(p.container->object).slots.at(p.container->reference)});
        out.modelDeltas.push_back(deltas.back());
      }
      NodeLayout layout;
      layout.elementId = id;
      layout.x = p.x.value_or(layout.x);
      layout.y = p.y.value_or(layout.y);
      layout.width = p.width.value_or(layout.width);
      layout.height = p.height.value_or(layout.height);
      layout.rotation = normalizeRotation(p.rotation.value_or(0.0));
      layout.anchor = p.anchor.value_or(Anchor::TopLeft);
      setLayout(layout);
      NodeLayout defaults;
      defaults.elementId = id;
      append(out.layoutDeltas, diff(defaults, layout));
      restyle();
      cascade(deltas, {id}, out);
      return;
    }
    ModelDelta d = event.kind == EventKind::SetAttribute
                       ? (p.value ? writeSlot(model, event.elementId, p.feature, *p.value)
                                  : throw Error(ErrorCode::TypeMismatch, "setAttribute without a value"))
                       : addLink(model, event.elementId, p.feature, p.target);
    out.modelDeltas.push_back(d);
    std::vector<ModelDelta> deltas{d};
    cascade(deltas, {}, out);
  } catch (const Error& e) {
    reject(out, e.code(), e.what());
  }
}

void Engine::viewEvent(const SessionEvent& event, EventOutcome& out) {
  const std::string& name = event.payload.view.empty() ? event.elementId : event.payload.view;
  auto it = std::find_if(project_.views.begin(), project_.views.end(), [&](const View& v) { return v.name == name; });
  if (it == project_.views.end()) {
    reject(out, ErrorCode::InvalidView, "unknown view '" + name + "'");
    return;
  }
  const bool activate = event.kind == EventKind::ActivateView;
  if (it->active == activate) return;
  if (activate) {
    for (const View& v : project_.views) {
      if (v.active && v.stackRank == it->stackRank) {
        reject(out, ErrorCode::InvalidView,
               "stackRank " + std::to_string(v.stackRank) + " is already used by active view '" + v.name + "'");
        return;
      }
    }
  }
  std::set<ObjectId, IdLess> selected;
  for (const auto& [id, obj] : project_.model.objects()) {
    if (viewSelects(*it, id, project_.model)) selected.insert(id);
  }
  it->active = activate;
  restyle();
  cascade({}, selected, out);
}

void Engine::gestureEvent(const SessionEvent& event, EventOutcome& out) {
  const ObjectId& id = event.elementId;
  const EventPayload& p = event.payload;
  if (!project_.model.find(id)) {
    reject(out, ErrorCode::UnknownObject, "no object with id '" + id + "'");
    return;
  }
  auto style = styles_.find(id);
  if (style == styles_.end()) {
    reject(out, ErrorCode::NotVisible, "'" + id + "' is not shown by the active views");
    return;
  }
  const Measurability caps = interactionCapabilities(style->second);
  const GestureStep step = *gestureStep(event.kind);
  switch (step.gesture) {
    case Gesture::Drag:
      if (!caps.draggable) {
        reject(out, ErrorCode::CapabilityViolation, "'" + id + "' is not draggable");
        return;
      }
      break;
    case Gesture::Resize:
      if (p.handle ? !caps.resizeHandles.contains(*p.handle) : caps.resizeHandles.empty()) {
        reject(out, ErrorCode::CapabilityViolation,
               "'" + id + "' cannot be resized" +
                   (p.handle ? " through handle " + std::string(toString(*p.handle)) : std::string()));
        return;
      }
      break;
    case Gesture::Rotate:
      if (!caps.rotatable) {
        reject(out, ErrorCode::CapabilityViolation, "'" + id + "' is not rotatable");
        return;
      }
      break;
    case Gesture::None: break;
  }
  if (step.phase == Phase::While &&
      (!finite(p.x) || !finite(p.y) || !positiveFinite(p.width) || !positiveFinite(p.height) || !finite(p.rotation))) {
    reject(out, ErrorCode::DomainError, "gesture geometry must be finite with positive size");
    return;
  }
  try {
    gestures_.accept(event.kind, id);
  } catch (const Error& e) {
    reject(out, e.code(), e.what());
    return;
  }

  const NodeLayout before = layoutOf(project_, id);
  NodeLayout after = before;
  if (step.phase == Phase::While) {
    switch (step.gesture) {
      case Gesture::Drag:
        after.x = p.x.value_or(after.x);
        after.y = p.y.value_or(after.y);
        break;
      case Gesture::Resize:
        after.width = p.width.value_or(after.width);
        after.height = p.height.value_or(after.height);
        after.x = p.x.value_or(after.x);
        after.y = p.y.value_or(after.y);
        break;
      case Gesture::Rotate: after.rotation = normalizeRotation(p.rotation.value_or(after.rotation)); break;
      case Gesture::None: break;
    }
  }
  auto moved = diff(before, after);
  if (!moved.empty()) {
    setLayout(after);
    append(out.layoutDeltas, moved);
  }
  const Trigger trigger = mapEventToTriggers(event.kind).front();
  Firing f = fire(trigger, id, 0, Motion::between(before, after));
  std::vector<ModelDelta> changed;
  for (const auto& r : f.results) {
    for (const auto& d : r.modelDeltas) {
      if (d.changed()) changed.push_back(d);
    }
  }
  absorb(out, std::move(f));
  if (!changed.empty()) cascade(changed, {}, out);
}

std::optional<std::string> Engine::render(std::string_view element, std::vector<std::string>* warnings) const {
  auto it = styles_.find(element);
  if (it == styles_.end()) return std::nullopt;
  return renderTemplate(it->second.chosen, element, project_.model, warnings);
}

}  // namespace posyn
