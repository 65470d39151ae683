#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "posyn/constraint.hpp"
#include "posyn/layout.hpp"
#include "posyn/metamodel.hpp"
#include "posyn/model.hpp"
#include "posyn/view.hpp"

namespace posyn {

struct Canvas {
  double width = 1000.0;
  double height = 800.0;
  bool operator==(const Canvas&) const = default;
};

using LayoutMap = std::map<ObjectId, NodeLayout, IdLess>;
using ScaleMap = std::map<std::string, AxisScale, std::less<>>;

/// Everything a project file persists. Layouts are optional per element;
/// layoutOf() supplies the default geometry for elements without one.
struct Project {
  std::shared_ptr<const MetaModel> metamodel;
  Model model{"model", nullptr};
  Canvas canvas;
  std::vector<View> views;
  LayoutMap layouts;
  ScaleMap scales;

  /// Compares the metamodel by value.
  bool operator==(const Project& other) const;
};

NodeLayout layoutOf(const Project& project, std::string_view element);

/// Conformance, view binding, layout and scale checks.
std::vector<Issue> checkProject(const Project& project);
/// Throws ValidationError(ValidationFailed) carrying checkProject() issues.
void validateProject(const Project& project);

}  // namespace posyn
