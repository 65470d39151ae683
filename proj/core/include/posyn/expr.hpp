#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "posyn/layout.hpp"
#include "posyn/model.hpp"

namespace posyn {

// The rule expression language: literals, `this`-rooted member chains, model
// navigation calls, arithmetic, comparisons and boolean connectives. There is
// no assignment; the single effectful form is a top-level `<slot>.setValue(e)`.

namespace expr {

enum class BinaryOp { Add, Sub, Mul, Div, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnaryOp { Neg, Not };

std::string_view toString(BinaryOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct NumberLit {
  double value;
};
struct StringLit {
  std::string value;
};
struct BoolLit {
  bool value;
};
struct Identifier {
  std::string name;
};
struct Member {
  ExprPtr object;
  std::string name;
};
/// `receiver.name(args)` or, with a null receiver, a free function call.
struct Call {
  ExprPtr receiver;
  std::string name;
  std::vector<ExprPtr> args;
};
struct Unary {
  UnaryOp op;
  ExprPtr operand;
};
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Expr {
  std::variant<NumberLit, StringLit, BoolLit, Identifier, Member, Call, Unary, Binary> node;
  std::size_t position = 0;
};

/// Throws SyntaxError with the byte offset and the set of expected tokens.
ExprPtr parse(std::string_view text);

/// Fully parenthesized source form; parse(print(e)) is structurally equal to e.
std::string print(const Expr& e);

/// Equality of shape and literals, ignoring source positions.
bool structurallyEqual(const Expr& a, const Expr& b);

bool containsSetValue(const Expr& e);
bool isTopLevelSetValue(const Expr& e);
/// True when `e` reads `this.<property>` (aliases included) of the node under evaluation.
bool readsOwnProperty(const Expr& e, LayoutProperty property);

}  // namespace expr

/// Parsed expression plus its verbatim source; equality is by source text.
class Expression {
 public:
  Expression() = default;
  explicit Expression(std::string source);

  const std::string& source() const { return source_; }
  const expr::Expr& ast() const { return *ast_; }
  bool empty() const { return ast_ == nullptr; }

  bool operator==(const Expression& other) const { return source_ == other.source_; }

 private:
  std::string source_;
  expr::ExprPtr ast_;
};

struct ObjectList {
  ObjectIds ids;
  bool operator==(const ObjectList&) const = default;
};

using Value = std::variant<double, std::string, bool, ObjectList, SlotHandle>;

std::string describe(const Value& value);
std::string_view typeName(const Value& value);

struct EvalContext {
  const Model* model = nullptr;
  ObjectId element;
  const NodeLayout* self = nullptr;
  std::optional<ObjectId> targetElement;
  const NodeLayout* target = nullptr;
  std::optional<Value> lastOutput;
  /// When set, every slot read during evaluation is recorded here.
  std::set<SlotKey>* reads = nullptr;
};

/// Pure evaluation. Errors: NameResolution, TypeError, NumericDomain,
/// DivideByZero, IllegalSetValue (any setValue).
Value evaluate(const expr::Expr& e, const EvalContext& ctx);

struct Execution {
  Value output;
  std::optional<ModelDelta> delta;
};

/// Like evaluate(), but a top-level setValue writes through writeSlot() into
/// `model`. With a null `model` the write is skipped (dry run), which is how
/// read sets are collected without side effects.
Execution execute(const expr::Expr& e, const EvalContext& ctx, Model* model);

/// Converts an evaluated value to what writeSlot() accepts.
SlotValue toSlotValue(const Value& value);
Value fromSlotValue(const SlotValue& value);

struct CompletionContext {
  const MetaModel* metamodel = nullptr;
  std::string className;        // class bound by the rule being edited
  std::string targetClassName;  // class of the rule's target, if any
};

/// Names resolvable at the end of `prefix`; empty when the prefix cannot be analysed.
std::vector<std::string> complete(std::string_view prefix, const CompletionContext& ctx);

}  // namespace posyn
