#include "posyn/metamodel.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "posyn/error.hpp"

namespace posyn {

std::string_view toString(PrimitiveType type) {
  switch (type) {
    case PrimitiveType::Int: return "int";
    case PrimitiveType::Float: return "float";
    case PrimitiveType::String: return "string";
    case PrimitiveType::Boolean: return "boolean";
    case PrimitiveType::Enum: return "enum";
  }
  return "?";
}

std::optional<PrimitiveType> primitiveTypeFromString(std::string_view text) {
  if (text == "int") return PrimitiveType::Int;
  if (text == "float") return PrimitiveType::Float;
  if (text == "string") return PrimitiveType::String;
  if (text == "boolean") return PrimitiveType::Boolean;
  if (text == "enum") return PrimitiveType::Enum;
  return std::nullopt;
}

const std::string& Feature::name() const {
  return std::visit([](const auto& d) -> const std::string& { return d.name; }, def);
}

const MetaClassDef* MetaModel::findClass(std::string_view name) const {
  for (const auto& c : spec_.classes) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const EnumDef* MetaModel::findEnum(std::string_view name) const {
  for (const auto& e : spec_.enums) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

const std::vector<Feature>& MetaModel::features(std::string_view className) const {
  auto it = features_.find(className);
  if (it == features_.end()) {
    throw Error(ErrorCode::UnknownClass, "unknown class '" + std::string(className) + "'");
  }
  return it->second;
}

const Feature* MetaModel::findFeature(std::string_view className, std::string_view feature) const {
  for (const auto& f : features(className)) {
    if (f.name() == feature) return &f;
  }
  return nullptr;
}

std::optional<int> MetaModel::classDistance(std::string_view className,
                                            std::string_view ancestor) const {
  auto it = distances_.find(className);
  if (it == distances_.end()) return std::nullopt;
  auto d = it->second.find(ancestor);
  if (d == it->second.end()) return std::nullopt;
  return d->second;
}

std::vector<std::string> MetaModel::concreteClasses() const {
  std::vector<std::string> out;
  for (const auto& c : spec_.classes) {
    if (!c.isAbstract) out.push_back(c.name);
  }
  return out;
}

namespace {

void checkNames(const MetaModelSpec& spec, std::vector<Issue>& issues) {
  std::set<std::string> seen;
  for (const auto& c : spec.classes) {
    if (!seen.insert(c.name).second) {
      issues.push_back({ErrorCode::DuplicateName, c.name, "class name declared twice"});
    }
  }
  for (const auto& e : spec.enums) {
    if (!seen.insert(e.name).second) {
      issues.push_back({ErrorCode::DuplicateName, e.name, "enum name clashes with another type"});
    }
    std::set<std::string> literals;
    if (e.literals.empty()) {
      issues.push_back({ErrorCode::UnknownType, e.name, "enum has no literals"});
    }
    for (const auto& l : e.literals) {
      if (!literals.insert(l).second) {
        issues.push_back({ErrorCode::DuplicateName, e.name, "duplicate literal '" + l + "'"});
      }
    }
  }
}

void checkTypes(const MetaModelSpec& spec, std::vector<Issue>& issues) {
  auto hasClass = [&](const std::string& n) {
    for (const auto& c : spec.classes)
      if (c.name == n) return true;
    return false;
  };
  auto hasEnum = [&](const std::string& n) {
    for (const auto& e : spec.enums)
      if (e.name == n) return true;
    return false;
  };
  for (const auto& c : spec.classes) {
    for (const auto& s : c.superclasses) {
      if (!hasClass(s)) {
        issues.push_back({ErrorCode::UnknownSuperclass, c.name, "superclass '" + s + "' is not defined"});
      }
    }
    for (const auto& a : c.attributes) {
      if (a.type == PrimitiveType::Enum && !hasEnum(a.enumName)) {
        issues.push_back({ErrorCode::UnknownType, c.name + "." + a.name,
                          "enum '" + a.enumName + "' is not defined"});
      }
      if (a.lower && a.upper && *a.lower > *a.upper) {
        issues.push_back({ErrorCode::BadMultiplicity, c.name + "." + a.name, "attribute bounds are inverted"});
      }
    }
    for (const auto& r : c.references) {
      if (!hasClass(r.target)) {
        issues.push_back({ErrorCode::UnknownType, c.name + "." + r.name,
                          "reference target '" + r.target + "' is not defined"});
      }
      if (r.lower < 0 || (r.upper != kUnbounded && (r.upper < r.lower || r.upper == 0))) {
        issues.push_back({ErrorCode::BadMultiplicity, c.name + "." + r.name,
                          "multiplicity " + std::to_string(r.lower) + ".." + std::to_string(r.upper)});
      }
    }
  }
}

// Three-colour DFS over the superclass graph; reports each class on a cycle once.
void checkCycles(const MetaModelSpec& spec, std::vector<Issue>& issues) {
  std::map<std::string, const MetaClassDef*> byName;
  for (const auto& c : spec.classes) byName.emplace(c.name, &c);

  enum class Mark { White, Grey, Black };
  std::map<std::string, Mark> marks;
  std::set<std::string> reported;
  std::vector<std::string> stack;

  std::function<void(const MetaClassDef&)> visit = [&](const MetaClassDef& c) {
    marks[c.name] = Mark::Grey;
    stack.push_back(c.name);
    for (const auto& s : c.superclasses) {
      auto it = byName.find(s);
      if (it == byName.end()) continue;
      Mark m = marks[s];
      if (m == Mark::Grey) {
        auto from = std::find(stack.begin(), stack.end(), s);
        for (auto i = from; i != stack.end(); ++i) {
          if (reported.insert(*i).second) {
            issues.push_back({ErrorCode::InheritanceCycle, *i, "class participates in an inheritance cycle"});
          }
        }
      } else if (m == Mark::White) {
        visit(*it->second);
      }
    }
    stack.pop_back();
    marks[c.name] = Mark::Black;
  };
  for (const auto& c : spec.classes) {
    if (marks[c.name] == Mark::White) visit(c);
  }
}

}  // namespace

MetaModel defineMetamodel(MetaModelSpec spec) {
  std::vector<Issue> issues;
  checkNames(spec, issues);
  checkTypes(spec, issues);
  checkCycles(spec, issues);
  if (!issues.empty()) throw ValidationError(ErrorCode::ValidationFailed, std::move(issues));

  MetaModel mm(std::move(spec));
  const auto& classes = mm.spec_.classes;

  // Ancestor distances by BFS; the graph is now known to be acyclic.
  for (const auto& c : classes) {
    auto& dist = mm.distances_[c.name];
    std::deque<std::pair<std::string, int>> queue{{c.name, 0}};
    while (!queue.empty()) {
      auto [name, d] = queue.front();
      queue.pop_front();
      if (dist.count(name)) continue;
      dist.emplace(name, d);
      for (const auto& s : mm.findClass(name)->superclasses) queue.emplace_back(s, d + 1);
    }
  }

  std::function<const std::vector<Feature>&(const MetaClassDef&)> flatten =
      [&](const MetaClassDef& c) -> const std::vector<Feature>& {
    if (auto it = mm.features_.find(c.name); it != mm.features_.end()) return it->second;
    std::vector<Feature> out;
    for (const auto& s : c.superclasses) {
      for (const auto& f : flatten(*mm.findClass(s))) {
        bool dup = false;  // diamond inheritance contributes a feature once
        for (const auto& g : out) {
          if (g.name() == f.name() && g.owner == f.owner) dup = true;
        }
        if (!dup) out.push_back(f);
      }
    }
    for (const auto& a : c.attributes) out.push_back({c.name, a});
    for (const auto& r : c.references) out.push_back({c.name, r});
    return mm.features_.emplace(c.name, std::move(out)).first->second;
  };
  for (const auto& c : classes) flatten(c);

  for (const auto& [cls, feats] : mm.features_) {
    std::set<std::string> names;
    for (const auto& f : feats) {
      if (!names.insert(f.name()).second) {
        issues.push_back({ErrorCode::DuplicateName, cls + "." + f.name(),
                          "feature name collides within the flattened feature set"});
      }
    }
  }
  if (!issues.empty()) throw ValidationError(ErrorCode::ValidationFailed, std::move(issues));
  return mm;
}

}  // namespace posyn
