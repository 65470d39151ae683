#include "posyn/constraint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace posyn {

std::string_view toString(ConstraintOp op) {
  switch (op) {
    case ConstraintOp::Eq: return "=";
    case ConstraintOp::Ne: return "!=";
    case ConstraintOp::Lt: return "<";
    case ConstraintOp::Le: return "<=";
    case ConstraintOp::Gt: return ">";
    case ConstraintOp::Ge: return ">=";
  }
  return "?";
}

std::optional<ConstraintOp> constraintOpFromString(std::string_view text) {
  for (auto op : {ConstraintOp::Eq, ConstraintOp::Ne, ConstraintOp::Lt, ConstraintOp::Le, ConstraintOp::Gt,
                  ConstraintOp::Ge}) {
    if (toString(op) == text) return op;
  }
  return std::nullopt;
}

void checkConstraint(const Constraint& constraint) {
  if (constraint.rhs.empty()) throw Error(ErrorCode::InvalidRule, "constraint has no right-hand side");
  if (expr::containsSetValue(constraint.rhs.ast())) {
    throw Error(ErrorCode::InvalidRule, "constraint right-hand side may not call setValue");
  }
  if (expr::readsOwnProperty(constraint.rhs.ast(), constraint.property)) {
    throw Error(ErrorCode::InvalidRule, "constraint on '" + std::string(toString(constraint.property)) +
                                            "' reads its own property");
  }
}

Constraint makeConstraint(LayoutProperty property, ConstraintOp op, std::string rhsSource) {
  Constraint c{property, op, Expression(std::move(rhsSource))};
  checkConstraint(c);
  return c;
}

bool holds(ConstraintOp op, double lhs, double rhs) {
  switch (op) {
    case ConstraintOp::Eq: return lhs == rhs;
    case ConstraintOp::Ne: return lhs != rhs;
    case ConstraintOp::Lt: return lhs < rhs;
    case ConstraintOp::Le: return lhs <= rhs;
    case ConstraintOp::Gt: return lhs > rhs;
    case ConstraintOp::Ge: return lhs >= rhs;
  }
  return false;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// rhs - epsilon, but at least one ulp away when epsilon is below rhs's resolution.
double below(double rhs) { return std::min(rhs - kStrictEpsilon, std::nextafter(rhs, -kInf)); }
double above(double rhs) { return std::max(rhs + kStrictEpsilon, std::nextafter(rhs, kInf)); }

}  // namespace

double project(ConstraintOp op, double current, double rhs, double motion) {
  if (holds(op, current, rhs)) return current;
  switch (op) {
    case ConstraintOp::Eq:
    case ConstraintOp::Le:
    case ConstraintOp::Ge: return rhs;
    case ConstraintOp::Lt: return below(rhs);
    case ConstraintOp::Gt: return above(rhs);
    case ConstraintOp::Ne: return motion < 0 ? below(rhs) : above(rhs);
  }
  return current;
}

Projection enforce(const Constraint& constraint, const NodeLayout& layout, const EvalContext& ctx,
                   double motion) {
  EvalContext local = ctx;
  local.self = &layout;
  Value v = evaluate(constraint.rhs.ast(), local);
  const double* rhs = std::get_if<double>(&v);
  if (!rhs) {
    throw Error(ErrorCode::NonNumericRHS, "constraint on '" + std::string(toString(constraint.property)) +
                                              "' evaluated to " + std::string(typeName(v)));
  }
  Projection out{layout, true, *rhs};
  const double current = get(layout, constraint.property);
  if (holds(constraint.op, current, *rhs)) return out;

  double next = project(constraint.op, current, *rhs, motion);
  const LayoutProperty p = canonical(constraint.property);
  if ((p == LayoutProperty::Width || p == LayoutProperty::Height) && !(next > 0.0)) {
    out.satisfied = false;
    return out;
  }
  set(out.layout, constraint.property, next);
  out.satisfied = holds(constraint.op, get(out.layout, constraint.property), *rhs);
  return out;
}

double Motion::along(LayoutProperty property) const {
  switch (canonical(property)) {
    case LayoutProperty::X: return x;
    case LayoutProperty::Y: return y;
    case LayoutProperty::Width: return width;
    case LayoutProperty::Height: return height;
    case LayoutProperty::Rotation: return rotation;
    default: return 0.0;
  }
}

Motion Motion::between(const NodeLayout& from, const NodeLayout& to) {
  return {to.x - from.x, to.y - from.y, to.width - from.width, to.height - from.height, to.rotation - from.rotation};
}

EnforceAllResult enforceAll(std::span<const Constraint> constraints, const NodeLayout& layout,
                            const EvalContext& ctx, const Motion& motion, int maxIterations) {
  std::vector<EvalContext> contexts(constraints.size(), ctx);
  return enforceAll(constraints, layout, contexts, motion, maxIterations);
}

EnforceAllResult enforceAll(std::span<const Constraint> constraints, const NodeLayout& layout,
                            std::span<const EvalContext> contexts, const Motion& motion, int maxIterations) {
  if (contexts.size() != constraints.size()) {
    throw std::invalid_argument("enforceAll: one evaluation context per constraint required");
  }
  EnforceAllResult out{layout, {}};
  std::vector<bool> movedLastPass(constraints.size(), false);
  for (int pass = 0; pass < maxIterations; ++pass) {
    out.report.iterations = pass + 1;
    double maxStep = 0.0;
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      const double before = get(out.layout, constraints[i].property);
      out.layout = enforce(constraints[i], out.layout, contexts[i], motion.along(constraints[i].property)).layout;
      const double step = std::abs(get(out.layout, constraints[i].property) - before);
      movedLastPass[i] = step >= kFixpointTolerance;
      maxStep = std::max(maxStep, step);
    }
    if (maxStep < kFixpointTolerance) {
      out.report.converged = true;
      break;
    }
  }
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    EvalContext local = contexts[i];
    local.self = &out.layout;
    Value v = evaluate(constraints[i].rhs.ast(), local);
    const double* rhs = std::get_if<double>(&v);
    bool ok = rhs && holds(constraints[i].op, get(out.layout, constraints[i].property), *rhs);
    if (!ok || (!out.report.converged && movedLastPass[i])) out.report.unsatisfied.push_back(i);
  }
  return out;
}

// Axis scales ---------------------------------------------------------------

AxisScale AxisScale::linear(double slope, double offset) {
  AxisScale s;
  s.kind = Kind::Linear;
  s.slope = slope;
  s.offset = offset;
  return s;
}

AxisScale AxisScale::power(double exponent) {
  AxisScale s;
  s.kind = Kind::Power;
  s.exponent = exponent;
  return s;
}

AxisScale AxisScale::logBase(double base) {
  AxisScale s;
  s.kind = Kind::LogBase;
  s.base = base;
  return s;
}

bool AxisScale::inDomain(double value) const {
  if (!std::isfinite(value)) return false;
  switch (kind) {
    case Kind::Linear: return true;
    case Kind::Power: return value >= 0.0;
    case Kind::LogBase: return value > 0.0;
  }
  return false;
}

std::string_view toString(AxisScale::Kind kind) {
  switch (kind) {
    case AxisScale::Kind::Linear: return "linear";
    case AxisScale::Kind::Power: return "power";
    case AxisScale::Kind::LogBase: return "logBase";
  }
  return "?";
}

std::optional<AxisScale::Kind> scaleKindFromString(std::string_view text) {
  for (auto k : {AxisScale::Kind::Linear, AxisScale::Kind::Power, AxisScale::Kind::LogBase}) {
    if (toString(k) == text) return k;
  }
  return std::nullopt;
}

void checkScale(const AxisScale& s) {
  bool ok = true;
  switch (s.kind) {
    case AxisScale::Kind::Linear: ok = std::isfinite(s.slope) && s.slope != 0.0 && std::isfinite(s.offset); break;
    case AxisScale::Kind::Power: ok = std::isfinite(s.exponent) && s.exponent > 0.0; break;
    case AxisScale::Kind::LogBase: ok = std::isfinite(s.base) && s.base > 1.0; break;
  }
  if (!ok) throw Error(ErrorCode::DomainError, "invalid " + std::string(toString(s.kind)) + " scale parameters");
}

double scaleToCoord(const AxisScale& s, double value) {
  if (!s.inDomain(value)) {
    throw Error(ErrorCode::DomainError,
                formatNumber(value) + " is outside the " + std::string(toString(s.kind)) + " scale domain");
  }
  switch (s.kind) {
    case AxisScale::Kind::Linear: return s.slope * value + s.offset;
    case AxisScale::Kind::Power: return std::pow(value, s.exponent);
    case AxisScale::Kind::LogBase: return s.base == 2.0 ? std::log2(value) : std::log(value) / std::log(s.base);
  }
  return value;
}

double scaleToValue(const AxisScale& s, double coord) {
  if (!std::isfinite(coord) || (s.kind == AxisScale::Kind::Power && coord < 0.0)) {
    throw Error(ErrorCode::DomainError,
                formatNumber(coord) + " is outside the " + std::string(toString(s.kind)) + " scale image");
  }
  switch (s.kind) {
    case AxisScale::Kind::Linear: return (coord - s.offset) / s.slope;
    case AxisScale::Kind::Power: return std::pow(coord, 1.0 / s.exponent);
    case AxisScale::Kind::LogBase: return s.base == 2.0 ? std::exp2(coord) : std::pow(s.base, coord);
  }
  return coord;
}

}  // namespace posyn
