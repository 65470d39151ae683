#include <cmath>

#include "posyn/expr.hpp"

namespace posyn {

using namespace expr;

std::string_view typeName(const Value& value) {
  switch (value.index()) {
    case 0: return "number";
    case 1: return "string";
    case 2: return "boolean";
    case 3: return "object-list";
    case 4: return "slot-handle";
  }
  return "?";
}

std::string describe(const Value& value) {
  struct Visitor {
    std::string operator()(double v) const { return formatNumber(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const ObjectList& v) const {
      std::string out = "[";
      for (std::size_t i = 0; i < v.ids.size(); ++i) out += (i ? "," : "") + v.ids[i];
      return out + "]";
    }
    std::string operator()(const SlotHandle& h) const { return h.object + "." + h.feature; }
  };
  return std::visit(Visitor{}, value);
}

SlotValue toSlotValue(const Value& value) {
  struct Visitor {
    SlotValue operator()(double v) const { return v; }
    SlotValue operator()(const std::string& v) const { return v; }
    SlotValue operator()(bool v) const { return v; }
    SlotValue operator()(const ObjectList& v) const { return v.ids; }
    SlotValue operator()(const SlotHandle& h) const {
      throw Error(ErrorCode::TypeError, "cannot store slot handle " + h.object + "." + h.feature);
    }
  };
  return std::visit(Visitor{}, value);
}

Value fromSlotValue(const SlotValue& value) {
  struct Visitor {
    Value operator()(std::int64_t v) const { return static_cast<double>(v); }
    Value operator()(double v) const { return v; }
    Value operator()(const std::string& v) const { return v; }
    Value operator()(bool v) const { return v; }
    Value operator()(const EnumLiteral& v) const { return v.literal; }
    Value operator()(const ObjectIds& v) const { return ObjectList{v}; }
  };
  return std::visit(Visitor{}, value);
}

namespace {

enum class Which { Self, Target };

struct RootRef {};
struct NodeRef {
  Which which;
};
struct VertexRef {
  Which which;
};

// Intermediate results: `this`, `this.target` and `vertexSize` are not values.
using Operand = std::variant<Value, RootRef, NodeRef, VertexRef>;

[[noreturn]] void fail(ErrorCode code, const Expr& at, const std::string& message) {
  throw Error(code, message + " (offset " + std::to_string(at.position) + ")");
}

[[noreturn]] void operandMismatch(const Expr& at, BinaryOp op, const Value& lhs, const Value& rhs) {
  fail(ErrorCode::TypeError, at,
       "operator " + std::string(toString(op)) + " on " + std::string(typeName(lhs)) + " and " +
           std::string(typeName(rhs)));
}

double checked(double v, const Expr& at) {
  if (!std::isfinite(v)) fail(ErrorCode::NumericDomain, at, "numeric result is not finite");
  return v;
}

class Evaluator {
 public:
  explicit Evaluator(const EvalContext& ctx) : ctx_(ctx) {}

  Value value(const Expr& e) {
    Operand op = operand(e);
    if (auto* v = std::get_if<Value>(&op)) return std::move(*v);
    fail(ErrorCode::TypeError, e, "expression does not denote a value");
  }

  double number(const Expr& e) {
    Value v = value(e);
    if (auto* d = std::get_if<double>(&v)) return *d;
    fail(ErrorCode::TypeError, e, "expected number, got " + std::string(typeName(v)));
  }

  bool boolean(const Expr& e) {
    Value v = value(e);
    if (auto* b = std::get_if<bool>(&v)) return *b;
    fail(ErrorCode::TypeError, e, "expected boolean, got " + std::string(typeName(v)));
  }

  Operand operand(const Expr& e) {
    return std::visit([&](const auto& n) { return eval(e, n); }, e.node);
  }

  SlotHandle handleReceiver(const Call& c, const Expr& at) {
    Operand recv = operand(*c.receiver);
    const auto* v = std::get_if<Value>(&recv);
    const auto* h = v ? std::get_if<SlotHandle>(v) : nullptr;
    if (!h) fail(ErrorCode::TypeError, at, "setValue needs a slot handle receiver");
    return *h;
  }

 private:
  Operand eval(const Expr&, const NumberLit& n) { return Value{n.value}; }
  Operand eval(const Expr&, const StringLit& s) { return Value{s.value}; }
  Operand eval(const Expr&, const BoolLit& b) { return Value{b.value}; }

  Operand eval(const Expr& e, const Identifier& id) {
    if (id.name == "this") return RootRef{};
    fail(ErrorCode::NameResolution, e, "unknown name '" + id.name + "'");
  }

  const NodeLayout& layoutOf(Which which, const Expr& e) {
    const NodeLayout* l = which == Which::Self ? ctx_.self : ctx_.target;
    if (!l) {
      fail(ErrorCode::NameResolution, e, which == Which::Self ? "no layout bound to this" : "rule has no target");
    }
    return *l;
  }

  Operand modelRoot(Which which, const Expr& e) {
    if (!ctx_.model) fail(ErrorCode::NameResolution, e, "no model bound");
    if (which == Which::Self) return Value{ObjectList{{ctx_.element}}};
    if (!ctx_.targetElement) fail(ErrorCode::NameResolution, e, "rule has no target");
    return Value{ObjectList{{*ctx_.targetElement}}};
  }

  Operand nodeMember(Which which, const std::string& name, const Expr& e) {
    if (name == "vertexSize") {
      layoutOf(which, e);
      return VertexRef{which};
    }
    if (name == "model") return modelRoot(which, e);
    if (auto p = layoutPropertyFromString(name)) return Value{get(layoutOf(which, e), *p)};
    fail(ErrorCode::NameResolution, e, "unknown layout member '" + name + "'");
  }

  Operand eval(const Expr& e, const Member& m) {
    Operand obj = operand(*m.object);
    if (std::holds_alternative<RootRef>(obj)) {
      if (m.name == "target") {
        layoutOf(Which::Target, e);
        return NodeRef{Which::Target};
      }
      if (m.name == "lastOutput") {
        if (!ctx_.lastOutput) fail(ErrorCode::NameResolution, e, "no previous action output");
        return *ctx_.lastOutput;
      }
      return nodeMember(Which::Self, m.name, e);
    }
    if (const auto* n = std::get_if<NodeRef>(&obj)) return nodeMember(n->which, m.name, e);
    if (const auto* v = std::get_if<VertexRef>(&obj)) {
      const NodeLayout& l = layoutOf(v->which, e);
      if (m.name == "x") return Value{l.x};
      if (m.name == "y") return Value{l.y};
      fail(ErrorCode::NameResolution, e, "vertexSize has no member '" + m.name + "'");
    }
    fail(ErrorCode::TypeError, e,
         "cannot access member '" + m.name + "' of " + std::string(typeName(std::get<Value>(obj))));
  }

  Operand eval(const Expr& e, const Call& c) {
    if (!c.receiver) return Value{function(e, c)};
    if (c.name == "setValue") fail(ErrorCode::IllegalSetValue, e, "setValue is only allowed as a whole generic action");
    if (c.name != "getChildren" && c.name != "getValue") {
      fail(ErrorCode::NameResolution, e, "unknown method '" + c.name + "'");
    }
    Operand recv = operand(*c.receiver);
    const auto* v = std::get_if<Value>(&recv);
    if (!v) fail(ErrorCode::TypeError, e, c.name + " needs a model element");
    if (!ctx_.model) fail(ErrorCode::NameResolution, e, "no model bound");

    NavCursor cursor;
    if (const auto* list = std::get_if<ObjectList>(v)) {
      cursor = SlotValue{list->ids};
    } else if (const auto* h = std::get_if<SlotHandle>(v)) {
      cursor = *h;
    } else {
      fail(ErrorCode::TypeError, e, c.name + " applied to " + std::string(typeName(*v)));
    }

    NavStep step;
    if (c.name == "getChildren") {
      if (c.args.size() != 1) fail(ErrorCode::TypeError, e, "getChildren takes one feature name");
      Value arg = value(*c.args[0]);
      const auto* name = std::get_if<std::string>(&arg);
      if (!name) fail(ErrorCode::TypeError, e, "getChildren expects a string");
      step = NavStep::children(*name);
    } else {
      if (!c.args.empty()) fail(ErrorCode::TypeError, e, "getValue takes no arguments");
      step = NavStep::value();
    }

    NavCursor next;
    try {
      next = navigateStep(*ctx_.model, cursor, step);
    } catch (const Error& err) {
      ErrorCode code = (err.code() == ErrorCode::UnknownFeature || err.code() == ErrorCode::UnknownObject)
                           ? ErrorCode::NameResolution
                           : ErrorCode::TypeError;
      fail(code, e, err.what());
    }
    if (ctx_.reads) {
      if (const auto* h = std::get_if<SlotHandle>(&cursor); h && step.kind == NavStep::Kind::Value) {
        ctx_.reads->insert({h->object, h->feature});
      } else if (step.kind == NavStep::Kind::Children && std::holds_alternative<SlotValue>(next)) {
        ctx_.reads->insert({std::get<ObjectIds>(std::get<SlotValue>(cursor)).front(), step.feature});
      }
    }
    if (const auto* h = std::get_if<SlotHandle>(&next)) return Value{*h};
    return fromSlotValue(std::get<SlotValue>(next));
  }

  double function(const Expr& e, const Call& c) {
    auto arity = [&](std::size_t n) {
      if (c.args.size() != n) {
        fail(ErrorCode::TypeError, e, c.name + " takes " + std::to_string(n) + " argument(s)");
      }
    };
    const std::string& f = c.name;
    if (f == "round" || f == "floor" || f == "ceil" || f == "abs" || f == "sqrt" || f == "log2") {
      arity(1);
      double x = number(*c.args[0]);
      if (f == "round") return std::round(x);
      if (f == "floor") return std::floor(x);
      if (f == "ceil") return std::ceil(x);
      if (f == "abs") return std::abs(x);
      if (f == "sqrt") {
        if (x < 0) fail(ErrorCode::NumericDomain, e, "sqrt of a negative number");
        return std::sqrt(x);
      }
      if (x <= 0) fail(ErrorCode::NumericDomain, e, "log2 of a non-positive number");
      return std::log2(x);
    }
    if (f == "min" || f == "max" || f == "pow") {
      arity(2);
      double a = number(*c.args[0]);
      double b = number(*c.args[1]);
      if (f == "min") return std::min(a, b);
      if (f == "max") return std::max(a, b);
      double r = std::pow(a, b);
      if (std::isnan(r)) fail(ErrorCode::NumericDomain, e, "pow outside its domain");
      return checked(r, e);
    }
    fail(ErrorCode::NameResolution, e, "unknown function '" + f + "'");
  }

  Operand eval(const Expr&, const Unary& u) {
    if (u.op == UnaryOp::Neg) return Value{-number(*u.operand)};
    return Value{!boolean(*u.operand)};
  }

  Operand eval(const Expr& e, const Binary& b) {
    if (b.op == BinaryOp::And || b.op == BinaryOp::Or) {
      bool lhs = boolean(*b.lhs);
      if (b.op == BinaryOp::And && !lhs) return Value{false};
      if (b.op == BinaryOp::Or && lhs) return Value{true};
      return Value{boolean(*b.rhs)};
    }
    Value lhs = value(*b.lhs);
    Value rhs = value(*b.rhs);
    const auto* ln = std::get_if<double>(&lhs);
    const auto* rn = std::get_if<double>(&rhs);
    auto mismatch = [&]() { operandMismatch(e, b.op, lhs, rhs); };
    switch (b.op) {
      case BinaryOp::Add:
        if (ln && rn) return Value{checked(*ln + *rn, e)};
        if (std::holds_alternative<std::string>(lhs) && std::holds_alternative<std::string>(rhs)) {
          return Value{std::get<std::string>(lhs) + std::get<std::string>(rhs)};
        }
        operandMismatch(e, b.op, lhs, rhs);
      case BinaryOp::Sub:
        if (!ln || !rn) mismatch();
        return Value{checked(*ln - *rn, e)};
      case BinaryOp::Mul:
        if (!ln || !rn) mismatch();
        return Value{checked(*ln * *rn, e)};
      case BinaryOp::Div:
        if (!ln || !rn) mismatch();
        if (*rn == 0.0) fail(ErrorCode::DivideByZero, e, "division by zero");
        return Value{checked(*ln / *rn, e)};
      case BinaryOp::Eq:
      case BinaryOp::Ne: {
        if (lhs.index() != rhs.index() || std::holds_alternative<SlotHandle>(lhs)) mismatch();
        bool eq = lhs == rhs;
        return Value{b.op == BinaryOp::Eq ? eq : !eq};
      }
      default: break;
    }
    // ordering comparisons
    int cmp = 0;
    if (ln && rn) {
      cmp = (*ln < *rn) ? -1 : (*ln > *rn) ? 1 : 0;
    } else if (std::holds_alternative<std::string>(lhs) && std::holds_alternative<std::string>(rhs)) {
      cmp = std::get<std::string>(lhs).compare(std::get<std::string>(rhs));
      cmp = cmp < 0 ? -1 : cmp > 0 ? 1 : 0;
    } else {
      mismatch();
    }
    switch (b.op) {
      case BinaryOp::Lt: return Value{cmp < 0};
      case BinaryOp::Le: return Value{cmp <= 0};
      case BinaryOp::Gt: return Value{cmp > 0};
      default: return Value{cmp >= 0};
    }
  }

  const EvalContext& ctx_;
};

}  // namespace

Value evaluate(const Expr& e, const EvalContext& ctx) { return Evaluator(ctx).value(e); }

Execution execute(const Expr& e, const EvalContext& ctx, Model* model) {
  if (!isTopLevelSetValue(e)) return {evaluate(e, ctx), std::nullopt};
  const auto& call = std::get<Call>(e.node);
  Evaluator ev(ctx);
  SlotHandle handle = ev.handleReceiver(call, e);
  if (call.args.size() != 1) fail(ErrorCode::TypeError, e, "setValue takes one argument");
  Value v = ev.value(*call.args[0]);
  if (!model) return {v, std::nullopt};
  ModelDelta delta = writeSlot(*model, handle.object, handle.feature, toSlotValue(v));
  return {v, std::move(delta)};
}

}  // namespace posyn
