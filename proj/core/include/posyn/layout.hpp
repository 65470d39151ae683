#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "posyn/model.hpp"

namespace posyn {

enum class Anchor { TopLeft, BottomLeft, Center };

std::string_view toString(Anchor anchor);
std::optional<Anchor> anchorFromString(std::string_view text);

/// Per-element geometry in anchor-normalized canvas units. For BottomLeft the
/// y axis grows upwards from the canvas bottom to the node's lower edge.
struct NodeLayout {
  ObjectId elementId;
  double x = 0.0;
  double y = 0.0;
  double width = 100.0;
  double height = 60.0;
  double rotation = 0.0;  // degrees, [0, 360)
  Anchor anchor = Anchor::TopLeft;

  bool operator==(const NodeLayout&) const = default;
};

/// Layout properties addressable by constraints. VertexX/VertexY alias X/Y:
/// the anchored vertex position.
enum class LayoutProperty { X, Y, Width, Height, Rotation, VertexX, VertexY };

std::string_view toString(LayoutProperty property);
std::optional<LayoutProperty> layoutPropertyFromString(std::string_view text);
/// Collapses the vertexSize aliases onto the stored coordinate.
LayoutProperty canonical(LayoutProperty property);

double get(const NodeLayout& layout, LayoutProperty property);
void set(NodeLayout& layout, LayoutProperty property, double value);

double normalizeRotation(double degrees);

struct ScreenRect {
  double left = 0.0;
  double top = 0.0;
  double width = 0.0;
  double height = 0.0;
  bool operator==(const ScreenRect&) const = default;
};

/// Converts anchor-normalized geometry to a top-left screen rectangle.
ScreenRect toScreen(const NodeLayout& layout, double canvasHeight);

}  // namespace posyn
