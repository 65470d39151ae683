#include "posyn/project.hpp"

#include <cmath>

namespace posyn {

bool Project::operator==(const Project& other) const {
  const bool sameMeta = metamodel == other.metamodel ||
                        (metamodel && other.metamodel && *metamodel == *other.metamodel);
  return sameMeta && model == other.model && canvas == other.canvas && views == other.views &&
         layouts == other.layouts && scales == other.scales;
}

NodeLayout layoutOf(const Project& project, std::string_view element) {
  auto it = project.layouts.find(element);
  if (it != project.layouts.end()) return it->second;
  NodeLayout layout;
  layout.elementId = std::string(element);
  return layout;
}

std::vector<Issue> checkProject(const Project& p) {
  std::vector<Issue> issues;
  if (!p.metamodel || p.model.metamodelRef() != p.metamodel->name() || p.model.metamodelPtr() != p.metamodel) {
    issues.push_back({ErrorCode::UnknownMetamodel, p.model.id(), "model is not bound to the project metamodel"});
    return issues;
  }
  for (const auto& v : checkConformance(p.model).violations) {
    issues.push_back({v.code, v.object + "." + v.feature, v.message});
  }
  for (auto& issue : checkViews(p.views, p.model)) issues.push_back(std::move(issue));
  if (!(std::isfinite(p.canvas.width) && p.canvas.width > 0 && std::isfinite(p.canvas.height) && p.canvas.height > 0)) {
    issues.push_back({ErrorCode::ValidationFailed, "canvas", "canvas size must be positive"});
  }
  for (const auto& [id, layout] : p.layouts) {
    if (layout.elementId != id) {
      issues.push_back({ErrorCode::ValidationFailed, id, "layout key does not match its elementId"});
    }
    if (!p.model.find(id)) issues.push_back({ErrorCode::DanglingReference, id, "layout for unknown element"});
    const bool finite = std::isfinite(layout.x) && std::isfinite(layout.y) && std::isfinite(layout.width) &&
                        std::isfinite(layout.height) && std::isfinite(layout.rotation);
    if (!finite || !(layout.width > 0) || !(layout.height > 0)) {
      issues.push_back({ErrorCode::ValidationFailed, id, "layout needs finite geometry with positive size"});
    }
    if (!(layout.rotation >= 0 && layout.rotation < 360)) {
      issues.push_back({ErrorCode::ValidationFailed, id, "rotation outside [0, 360)"});
    }
  }
  for (const auto& [name, scale] : p.scales) {
    try {
      checkScale(scale);
    } catch (const Error& e) {
      issues.push_back({e.code(), name, e.what()});
    }
  }
  return issues;
}

void validateProject(const Project& project) {
  auto issues = checkProject(project);
  if (!issues.empty()) throw ValidationError(ErrorCode::ValidationFailed, std::move(issues));
}

}  // namespace posyn
