#include "posyn/view.hpp"

#include <algorithm>
#include <set>

namespace posyn {

std::string_view toString(Handle handle) {
  switch (handle) {
    case Handle::N: return "N";
    case Handle::S: return "S";
    case Handle::E: return "E";
    case Handle::W: return "W";
    case Handle::NE: return "NE";
    case Handle::NW: return "NW";
    case Handle::SE: return "SE";
    case Handle::SW: return "SW";
  }
  return "?";
}

std::optional<Handle> handleFromString(std::string_view text) {
  for (Handle h : kAllHandles) {
    if (toString(h) == text) return h;
  }
  return std::nullopt;
}

Measurability Measurability::normalized() const {
  if (measurable) return *this;
  return {};
}

std::string_view toString(ElementSelector::Kind kind) {
  switch (kind) {
    case ElementSelector::Kind::Personal: return "personal";
    case ElementSelector::Kind::Metaclass: return "metaclass";
    case ElementSelector::Kind::ViewDefault: return "viewDefault";
  }
  return "?";
}

std::optional<ElementSelector::Kind> selectorKindFromString(std::string_view text) {
  for (auto k : {ElementSelector::Kind::Personal, ElementSelector::Kind::Metaclass,
                 ElementSelector::Kind::ViewDefault}) {
    if (toString(k) == text) return k;
  }
  return std::nullopt;
}

std::string_view toString(UnmappedPolicy policy) {
  switch (policy) {
    case UnmappedPolicy::Exclude: return "exclude";
    case UnmappedPolicy::FreeForm: return "freeForm";
    case UnmappedPolicy::Custom: return "custom";
  }
  return "?";
}

std::optional<UnmappedPolicy> unmappedPolicyFromString(std::string_view text) {
  for (auto p : {UnmappedPolicy::Exclude, UnmappedPolicy::FreeForm, UnmappedPolicy::Custom}) {
    if (toString(p) == text) return p;
  }
  return std::nullopt;
}

std::string_view toString(Tier tier) {
  switch (tier) {
    case Tier::Personal: return "personal";
    case Tier::Inherited: return "inherited";
    case Tier::ViewDefault: return "viewDefault";
    case Tier::GlobalDefault: return "globalDefault";
  }
  return "?";
}

const ViewRule& globalDefaultRule() {
  static const ViewRule rule = [] {
    ViewRule r;
    r.id = std::string(kGlobalDefaultId);
    r.selector = ElementSelector::viewDefault();
    r.templ = "<div class=\"object\"></div>";
    r.measurable.measurable = true;
    r.measurable.draggable = true;
    r.measurable.resizeHandles = {kAllHandles.begin(), kAllHandles.end()};
    r.measurable.rotatable = false;
    return r;
  }();
  return rule;
}

bool candidateBefore(const StyleCandidate& a, const StyleCandidate& b) {
  if (a.tier != b.tier) return a.tier < b.tier;
  if (a.tier == Tier::Inherited && a.classDistance != b.classDistance) return a.classDistance < b.classDistance;
  if (a.stackRank != b.stackRank) return a.stackRank > b.stackRank;
  if (a.viewIndex != b.viewIndex) return a.viewIndex < b.viewIndex;
  return a.ruleIndex < b.ruleIndex;
}

namespace {

std::optional<StyleCandidate> match(const ViewRule& rule, const ModelObject& obj, const MetaModel* mm) {
  StyleCandidate c;
  c.ruleId = rule.id;
  switch (rule.selector.kind) {
    case ElementSelector::Kind::Personal:
      if (rule.selector.name != obj.id) return std::nullopt;
      c.tier = Tier::Personal;
      return c;
    case ElementSelector::Kind::Metaclass: {
      if (!mm) return std::nullopt;
      auto d = mm->classDistance(obj.className, rule.selector.name);
      if (!d) return std::nullopt;
      c.tier = Tier::Inherited;
      c.classDistance = *d;
      return c;
    }
    case ElementSelector::Kind::ViewDefault: c.tier = Tier::ViewDefault; return c;
  }
  return std::nullopt;
}

const MetaModel* metamodelOf(const Model& model) {
  const auto& mm = model.metamodelPtr();
  return mm && mm->name() == model.metamodelRef() ? mm.get() : nullptr;
}

const ViewRule& ruleAt(std::span<const View> views, const StyleCandidate& c) {
  if (c.tier == Tier::GlobalDefault) return globalDefaultRule();
  const View& v = views[c.viewIndex];
  return c.ruleIndex < v.rules.size() ? v.rules[c.ruleIndex] : *v.defaultRule;
}

}  // namespace

StyleResolution resolveStyle(std::string_view element, std::span<const View> views, const Model& model) {
  const ModelObject& obj = model.at(element);
  const MetaModel* mm = metamodelOf(model);
  StyleResolution out;
  out.element = obj.id;
  for (std::size_t vi = 0; vi < views.size(); ++vi) {
    const View& v = views[vi];
    if (!v.active) continue;
    auto add = [&](const ViewRule& rule, std::size_t ri) {
      if (auto c = match(rule, obj, mm)) {
        c->stackRank = v.stackRank;
        c->viewIndex = vi;
        c->ruleIndex = ri;
        c->view = v.name;
        out.queue.push_back(std::move(*c));
      }
    };
    for (std::size_t ri = 0; ri < v.rules.size(); ++ri) add(v.rules[ri], ri);
    if (v.defaultRule) add(*v.defaultRule, v.rules.size());
  }
  StyleCandidate global;
  global.tier = Tier::GlobalDefault;
  global.viewIndex = views.size();
  global.ruleId = std::string(kGlobalDefaultId);
  out.queue.push_back(global);
  std::sort(out.queue.begin(), out.queue.end(), candidateBefore);

  const StyleCandidate& head = out.queue.front();
  out.tier = head.tier;
  out.chosen = ruleAt(views, head);
  out.triples = out.chosen.triples;
  out.originView = head.view;
  return out;
}

StyleMap combineViews(std::span<const View> views, const Model& model) {
  std::optional<std::size_t> topView;
  for (std::size_t vi = 0; vi < views.size(); ++vi) {
    if (views[vi].active && (!topView || views[vi].stackRank > views[*topView].stackRank)) topView = vi;
  }
  StyleMap out;
  for (const auto& [id, obj] : model.objects()) {
    StyleResolution r = resolveStyle(id, views, model);
    if (r.tier == Tier::ViewDefault || r.tier == Tier::GlobalDefault) {
      std::optional<std::size_t> origin = r.tier == Tier::ViewDefault ? std::optional(r.queue.front().viewIndex) : topView;
      if (origin) {
        const View& v = views[*origin];
        r.originView = v.name;
        if (v.unmappedPolicy == UnmappedPolicy::Exclude) continue;
        if (v.unmappedPolicy == UnmappedPolicy::Custom) {
          r.chosen = globalDefaultRule();
          r.tier = Tier::GlobalDefault;
          r.triples = v.defaultRule ? v.defaultRule->triples : std::vector<RuleTriple>{};
        }
      }
    }
    out.emplace(id, std::move(r));
  }
  return out;
}

bool viewSelects(const View& view, std::string_view element, const Model& model) {
  const ModelObject* obj = model.find(element);
  if (!obj) return false;
  if (view.defaultRule) return true;
  const MetaModel* mm = metamodelOf(model);
  return std::any_of(view.rules.begin(), view.rules.end(),
                     [&](const ViewRule& r) { return match(r, *obj, mm).has_value(); });
}

std::vector<std::string> placeholders(std::string_view t) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (true) {
    std::size_t p = t.find("$##", i);
    if (p == std::string_view::npos) break;
    std::size_t q = t.find('$', p + 3);
    if (q == std::string_view::npos) break;
    out.emplace_back(t.substr(p + 3, q - p - 3));
    i = q + 1;
  }
  return out;
}

std::string renderTemplate(const ViewRule& rule, std::string_view element, const Model& model,
                           std::vector<std::string>* warnings) {
  const std::string_view t = rule.templ;
  const ModelObject* obj = model.find(element);
  const MetaModel* mm = metamodelOf(model);
  std::string out;
  std::size_t i = 0;
  while (true) {
    std::size_t p = t.find("$##", i);
    std::size_t q = p == std::string_view::npos ? p : t.find('$', p + 3);
    if (q == std::string_view::npos) {
      out.append(t.substr(i));
      break;
    }
    out.append(t.substr(i, p - i));
    std::string_view name = t.substr(p + 3, q - p - 3);
    const SlotValue* value = nullptr;
    if (obj && mm && mm->findFeature(obj->className, name)) {
      auto it = obj->slots.find(name);
      if (it != obj->slots.end()) value = &it->second;
    }
    if (value) {
      for (char c : toDisplayString(*value)) {
        if (c == '$') {
          out += "&#36;";
        } else if (c == '#') {
          out += "&#35;";
        } else {
          out += c;
        }
      }
    } else if (warnings) {
      warnings->push_back("unknown placeholder '$##" + std::string(name) + "$' for element '" + std::string(element) +
                          "'");
    }
    i = q + 1;
  }
  return out;
}

Measurability interactionCapabilities(const StyleResolution& resolution) {
  return resolution.chosen.measurable.normalized();
}

std::vector<Issue> checkViews(std::span<const View> views, const Model& model) {
  std::vector<Issue> issues;
  const MetaModel* mm = metamodelOf(model);
  std::set<std::string> viewNames;
  std::set<std::string> ruleIds{std::string(kGlobalDefaultId)};
  std::set<std::string> tripleIds;
  std::map<std::int64_t, std::string> activeRanks;

  auto checkRule = [&](const View& v, const ViewRule& r, bool isDefault) {
    if (r.id.empty() || !ruleIds.insert(r.id).second) {
      issues.push_back({ErrorCode::InvalidView, r.id.empty() ? v.name : r.id, "view rule id missing or reused"});
    }
    const bool defaultSelector = r.selector.kind == ElementSelector::Kind::ViewDefault;
    if (defaultSelector != isDefault) {
      issues.push_back({ErrorCode::InvalidView, r.id,
                        isDefault ? "default rule must use the view default selector"
                                  : "view default selector outside the default rule slot"});
    }
    std::string boundClass;
    if (r.selector.kind == ElementSelector::Kind::Personal) {
      if (const ModelObject* obj = model.find(r.selector.name)) {
        boundClass = obj->className;
      } else {
        issues.push_back({ErrorCode::UnknownObject, r.id, "personal selector names unknown object '" + r.selector.name + "'"});
      }
    } else if (r.selector.kind == ElementSelector::Kind::Metaclass) {
      if (mm && mm->findClass(r.selector.name)) {
        boundClass = r.selector.name;
      } else {
        issues.push_back({ErrorCode::UnknownClass, r.id, "metaclass selector names unknown class '" + r.selector.name + "'"});
      }
    }
    if (!boundClass.empty() && mm) {
      for (const auto& name : placeholders(r.templ)) {
        if (!mm->findFeature(boundClass, name)) {
          issues.push_back({ErrorCode::UnknownFeature, r.id,
                            "placeholder '$##" + name + "$' does not resolve on class " + boundClass});
        }
      }
    }
    const Measurability& m = r.measurable;
    if (!m.measurable && (m.draggable || m.rotatable || !m.resizeHandles.empty())) {
      issues.push_back({ErrorCode::InvalidView, r.id, "non-measurable rule enables interaction"});
    }
    for (const auto& t : r.triples) {
      if (!t.id.empty() && !tripleIds.insert(t.id).second) {
        issues.push_back({ErrorCode::InvalidRule, t.id, "rule triple id reused"});
      }
      try {
        checkRuleTriple(t);
      } catch (const Error& e) {
        issues.push_back({e.code(), t.id.empty() ? r.id : t.id, e.what()});
      }
    }
  };

  for (const View& v : views) {
    if (v.name.empty() || !viewNames.insert(v.name).second) {
      issues.push_back({ErrorCode::InvalidView, v.name.empty() ? "-" : v.name, "view name missing or reused"});
    }
    if (v.active) {
      auto [it, fresh] = activeRanks.emplace(v.stackRank, v.name);
      if (!fresh) {
        issues.push_back({ErrorCode::InvalidView, v.name,
                          "stackRank " + std::to_string(v.stackRank) + " already used by active view " + it->second});
      }
    }
    std::set<ElementSelector> selectors;
    for (const auto& r : v.rules) {
      if (!selectors.insert(r.selector).second) {
        issues.push_back({ErrorCode::InvalidView, r.id, "selector bound twice in view " + v.name});
      }
      checkRule(v, r, false);
    }
    if (v.defaultRule) checkRule(v, *v.defaultRule, true);
  }
  return issues;
}

void validateViews(std::span<const View> views, const Model& model) {
  auto issues = checkViews(views, model);
  if (!issues.empty()) throw ValidationError(ErrorCode::InvalidView, std::move(issues));
}

}  // namespace posyn
