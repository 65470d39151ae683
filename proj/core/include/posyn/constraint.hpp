#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "posyn/expr.hpp"
#include "posyn/layout.hpp"

namespace posyn {

enum class ConstraintOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view toString(ConstraintOp op);
std::optional<ConstraintOp> constraintOpFromString(std::string_view text);

/// Offset used by the strict operators and by '!=' displacement, in canvas units.
inline constexpr double kStrictEpsilon = 1e-6;

/// `property op rhs`. The rhs must be setValue-free and must not read the
/// constrained property of the node under evaluation.
struct Constraint {
  LayoutProperty property = LayoutProperty::X;
  ConstraintOp op = ConstraintOp::Eq;
  Expression rhs;

  bool operator==(const Constraint&) const = default;
};

/// Parses and bind-checks a constraint. Errors: SyntaxError, InvalidRule.
Constraint makeConstraint(LayoutProperty property, ConstraintOp op, std::string rhsSource);
/// Throws InvalidRule when the rhs contains setValue or reads its own property.
void checkConstraint(const Constraint& constraint);

bool holds(ConstraintOp op, double lhs, double rhs);

/// Closest value to `current` satisfying `current op rhs`. `motion` is the
/// signed movement that produced `current`; only '!=' looks at it.
double project(ConstraintOp op, double current, double rhs, double motion = 0.0);

struct Projection {
  NodeLayout layout;
  bool satisfied = false;
  double rhs = 0.0;
};

/// Projects one property of `layout` onto the constraint's feasible set. The rhs
/// is evaluated with `ctx.self` bound to `layout`. A layout that already satisfies
/// the constraint is returned unchanged. A projection that would make width or
/// height non-positive leaves the layout unchanged and reports it unsatisfied.
/// Errors: NonNumericRHS, plus expression evaluation errors.
Projection enforce(const Constraint& constraint, const NodeLayout& layout, const EvalContext& ctx,
                   double motion = 0.0);

inline constexpr int kDefaultMaxIterations = 32;
/// A pass whose largest single projection step is below this counts as a fixpoint.
inline constexpr double kFixpointTolerance = 1e-9;

struct EnforceReport {
  /// Indices into the constraint list, ascending: constraints failing at exit,
  /// plus, without convergence, those still moving the layout in the last pass.
  std::vector<std::size_t> unsatisfied;
  int iterations = 0;
  bool converged = false;
};

/// Signed per-property movement that produced a layout; steers '!=' displacement.
struct Motion {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;
  double rotation = 0.0;

  double along(LayoutProperty property) const;
  static Motion between(const NodeLayout& from, const NodeLayout& to);
};

struct EnforceAllResult {
  NodeLayout layout;
  EnforceReport report;
};

/// Sequential projection in list order, repeated until a pass moves nothing or
/// `maxIterations` passes ran. Each rhs is re-evaluated on every pass.
EnforceAllResult enforceAll(std::span<const Constraint> constraints, const NodeLayout& layout,
                            const EvalContext& ctx, const Motion& motion = {},
                            int maxIterations = kDefaultMaxIterations);
/// As above with one evaluation context per constraint (same length as `constraints`).
EnforceAllResult enforceAll(std::span<const Constraint> constraints, const NodeLayout& layout,
                            std::span<const EvalContext> contexts, const Motion& motion = {},
                            int maxIterations = kDefaultMaxIterations);

// Axis scales ---------------------------------------------------------------

/// Monotone value <-> canvas coordinate mapping.
struct AxisScale {
  enum class Kind { Linear, Power, LogBase };
  Kind kind = Kind::Linear;
  double slope = 1.0;     // Linear
  double offset = 0.0;    // Linear
  double exponent = 1.0;  // Power, > 0
  double base = 10.0;     // LogBase, > 1

  static AxisScale linear(double slope, double offset);
  static AxisScale power(double exponent);
  static AxisScale logBase(double base);

  bool inDomain(double value) const;
  bool operator==(const AxisScale&) const = default;
};

std::string_view toString(AxisScale::Kind kind);
std::optional<AxisScale::Kind> scaleKindFromString(std::string_view text);

/// Throws DomainError when the parameters break strict monotonicity.
void checkScale(const AxisScale& scale);

/// Errors: DomainError outside the domain (Power: v >= 0, LogBase: v > 0).
double scaleToCoord(const AxisScale& scale, double value);
/// Errors: DomainError outside the image (Power: c >= 0).
double scaleToValue(const AxisScale& scale, double coord);

}  // namespace posyn
