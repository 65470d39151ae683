#include "posyn/layout.hpp"

#include <cmath>

namespace posyn {

std::string_view toString(Anchor anchor) {
  switch (anchor) {
    case Anchor::TopLeft: return "topLeft";
    case Anchor::BottomLeft: return "bottomLeft";
    case Anchor::Center: return "center";
  }
  return "?";
}

std::optional<Anchor> anchorFromString(std::string_view text) {
  if (text == "topLeft") return Anchor::TopLeft;
  if (text == "bottomLeft") return Anchor::BottomLeft;
  if (text == "center") return Anchor::Center;
  return std::nullopt;
}

std::string_view toString(LayoutProperty property) {
  switch (property) {
    case LayoutProperty::X: return "x";
    case LayoutProperty::Y: return "y";
    case LayoutProperty::Width: return "width";
    case LayoutProperty::Height: return "height";
    case LayoutProperty::Rotation: return "rotation";
    case LayoutProperty::VertexX: return "vertexSize.x";
    case LayoutProperty::VertexY: return "vertexSize.y";
  }
  return "?";
}

std::optional<LayoutProperty> layoutPropertyFromString(std::string_view text) {
  if (text == "x") return LayoutProperty::X;
  if (text == "y") return LayoutProperty::Y;
  if (text == "width") return LayoutProperty::Width;
  if (text == "height") return LayoutProperty::Height;
  if (text == "rotation") return LayoutProperty::Rotation;
  if (text == "vertexSize.x") return LayoutProperty::VertexX;
  if (text == "vertexSize.y") return LayoutProperty::VertexY;
  return std::nullopt;
}

LayoutProperty canonical(LayoutProperty property) {
  if (property == LayoutProperty::VertexX) return LayoutProperty::X;
  if (property == LayoutProperty::VertexY) return LayoutProperty::Y;
  return property;
}

double get(const NodeLayout& layout, LayoutProperty property) {
  switch (canonical(property)) {
    case LayoutProperty::X: return layout.x;
    case LayoutProperty::Y: return layout.y;
    case LayoutProperty::Width: return layout.width;
    case LayoutProperty::Height: return layout.height;
    case LayoutProperty::Rotation: return layout.rotation;
    default: break;
  }
  return 0.0;
}

void set(NodeLayout& layout, LayoutProperty property, double value) {
  switch (canonical(property)) {
    case LayoutProperty::X: layout.x = value; break;
    case LayoutProperty::Y: layout.y = value; break;
    case LayoutProperty::Width: layout.width = value; break;
    case LayoutProperty::Height: layout.height = value; break;
    case LayoutProperty::Rotation: layout.rotation = normalizeRotation(value); break;
    default: break;
  }
}

double normalizeRotation(double degrees) {
  double r = std::fmod(degrees, 360.0);
  if (r < 0) r += 360.0;
  if (r >= 360.0) r = 0.0;  // fmod of tiny negatives can round up to 360
  return r;
}

ScreenRect toScreen(const NodeLayout& layout, double canvasHeight) {
  switch (layout.anchor) {
    case Anchor::TopLeft: return {layout.x, layout.y, layout.width, layout.height};
    case Anchor::BottomLeft:
      return {layout.x, canvasHeight - layout.y - layout.height, layout.width, layout.height};
    case Anchor::Center:
      return {layout.x - layout.width / 2, layout.y - layout.height / 2, layout.width, layout.height};
  }
  return {};
}

}  // namespace posyn
