#include <algorithm>

#include "expr_lexer.hpp"
#include "posyn/expr.hpp"

namespace posyn {
namespace expr {

using detail::Tok;
using detail::Token;

std::string_view toString(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
  }
  return "?";
}

namespace {

// Precedence, loosest first: or, and, not, comparison (non-associative),
// additive, multiplicative, unary minus, postfix member/call.
class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ExprPtr parseAll() {
    ExprPtr e = parseOr();
    if (peek().kind != Tok::End) fail({"operator", "end of input"});
    return e;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& advance() { return toks_[i_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++i_;
    return true;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    std::string msg = "unexpected " + got + " at offset " + std::to_string(t.pos) + ", expected ";
    for (std::size_t k = 0; k < expected.size(); ++k) msg += (k ? ", " : "") + expected[k];
    throw SyntaxError(t.pos, std::move(expected), msg);
  }

  static ExprPtr make(std::size_t pos, auto node) {
    auto e = std::make_shared<Expr>();
    e->node = std::move(node);
    e->position = pos;
    return e;
  }

  ExprPtr parseOr() {
    ExprPtr lhs = parseAnd();
    while (peek().kind == Tok::Or) {
      std::size_t pos = advance().pos;
      lhs = make(pos, Binary{BinaryOp::Or, lhs, parseAnd()});
    }
    return lhs;
  }

  ExprPtr parseAnd() {
    ExprPtr lhs = parseNot();
    while (peek().kind == Tok::And) {
      std::size_t pos = advance().pos;
      lhs = make(pos, Binary{BinaryOp::And, lhs, parseNot()});
    }
    return lhs;
  }

  ExprPtr parseNot() {
    if (peek().kind == Tok::Not) {
      std::size_t pos = advance().pos;
      return make(pos, Unary{UnaryOp::Not, parseNot()});
    }
    return parseComparison();
  }

  static std::optional<BinaryOp> comparisonOp(Tok k) {
    switch (k) {
      case Tok::Eq: return BinaryOp::Eq;
      case Tok::Ne: return BinaryOp::Ne;
      case Tok::Lt: return BinaryOp::Lt;
      case Tok::Le: return BinaryOp::Le;
      case Tok::Gt: return BinaryOp::Gt;
      case Tok::Ge: return BinaryOp::Ge;
      default: return std::nullopt;
    }
  }

  ExprPtr parseComparison() {
    ExprPtr lhs = parseAdditive();
    if (auto op = comparisonOp(peek().kind)) {
      std::size_t pos = advance().pos;
      lhs = make(pos, Binary{*op, lhs, parseAdditive()});
      if (comparisonOp(peek().kind)) fail({"'and'", "'or'", "')'", "end of input"});
    }
    return lhs;
  }

  ExprPtr parseAdditive() {
    ExprPtr lhs = parseMultiplicative();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Token& t = advance();
      BinaryOp op = t.kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
      lhs = make(t.pos, Binary{op, lhs, parseMultiplicative()});
    }
    return lhs;
  }

  ExprPtr parseMultiplicative() {
    ExprPtr lhs = parseUnary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const Token& t = advance();
      BinaryOp op = t.kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
      lhs = make(t.pos, Binary{op, lhs, parseUnary()});
    }
    return lhs;
  }

  ExprPtr parseUnary() {
    if (peek().kind == Tok::Minus) {
      std::size_t pos = advance().pos;
      return make(pos, Unary{UnaryOp::Neg, parseUnary()});
    }
    return parsePostfix();
  }

  std::vector<ExprPtr> parseArgs() {
    std::vector<ExprPtr> args;
    if (accept(Tok::RParen)) return args;
    while (true) {
      args.push_back(parseOr());
      if (accept(Tok::RParen)) return args;
      if (!accept(Tok::Comma)) fail({"','", "')'"});
    }
  }

  ExprPtr parsePostfix() {
    ExprPtr e = parsePrimary();
    while (peek().kind == Tok::Dot) {
      advance();
      if (peek().kind != Tok::Ident) fail({"identifier"});
      const Token& name = advance();
      if (accept(Tok::LParen)) {
        e = make(name.pos, Call{e, name.text, parseArgs()});
      } else {
        e = make(name.pos, Member{e, name.text});
      }
    }
    return e;
  }

  ExprPtr parsePrimary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: advance(); return make(t.pos, NumberLit{t.number});
      case Tok::String: advance(); return make(t.pos, StringLit{t.text});
      case Tok::True: advance(); return make(t.pos, BoolLit{true});
      case Tok::False: advance(); return make(t.pos, BoolLit{false});
      case Tok::Ident: {
        advance();
        if (accept(Tok::LParen)) return make(t.pos, Call{nullptr, t.text, parseArgs()});
        return make(t.pos, Identifier{t.text});
      }
      case Tok::LParen: {
        advance();
        ExprPtr inner = parseOr();
        if (!accept(Tok::RParen)) fail({"')'"});
        return inner;
      }
      default: break;
    }
    fail({"number", "string", "identifier", "'true'", "'false'", "'('", "'-'", "'not'"});
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

void printTo(const Expr& e, std::string& out) {
  struct Visitor {
    std::string& out;
    void operator()(const NumberLit& n) const {
      if (n.value < 0) {
        out += "(-" + formatNumber(-n.value) + ")";
      } else {
        out += formatNumber(n.value);
      }
    }
    void operator()(const StringLit& s) const {
      out += '\'';
      for (char c : s.value) {
        if (c == '\'' || c == '\\') out += '\\';
        if (c == '\n') {
          out += "\\n";
          continue;
        }
        out += c;
      }
      out += '\'';
    }
    void operator()(const BoolLit& b) const { out += b.value ? "true" : "false"; }
    void operator()(const Identifier& i) const { out += i.name; }
    void operator()(const Member& m) const {
      printTo(*m.object, out);
      out += "." + m.name;
    }
    void operator()(const Call& c) const {
      if (c.receiver) {
        printTo(*c.receiver, out);
        out += ".";
      }
      out += c.name + "(";
      for (std::size_t k = 0; k < c.args.size(); ++k) {
        if (k) out += ", ";
        printTo(*c.args[k], out);
      }
      out += ")";
    }
    void operator()(const Unary& u) const {
      out += u.op == UnaryOp::Neg ? "(-" : "(not ";
      printTo(*u.operand, out);
      out += ")";
    }
    void operator()(const Binary& b) const {
      out += "(";
      printTo(*b.lhs, out);
      out += " ";
      out += toString(b.op);
      out += " ";
      printTo(*b.rhs, out);
      out += ")";
    }
  };
  std::visit(Visitor{out}, e.node);
}

template <typename F>
bool anyNode(const Expr& e, F&& pred) {
  if (pred(e)) return true;
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Member>) {
          return anyNode(*n.object, pred);
        } else if constexpr (std::is_same_v<T, Call>) {
          if (n.receiver && anyNode(*n.receiver, pred)) return true;
          return std::any_of(n.args.begin(), n.args.end(), [&](const ExprPtr& a) { return anyNode(*a, pred); });
        } else if constexpr (std::is_same_v<T, Unary>) {
          return anyNode(*n.operand, pred);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return anyNode(*n.lhs, pred) || anyNode(*n.rhs, pred);
        } else {
          return false;
        }
      },
      e.node);
}

bool isThis(const Expr& e) {
  const auto* id = std::get_if<Identifier>(&e.node);
  return id && id->name == "this";
}

}  // namespace

ExprPtr parse(std::string_view text) { return Parser(detail::tokenize(text)).parseAll(); }

std::string print(const Expr& e) {
  std::string out;
  printTo(e, out);
  return out;
}

bool structurallyEqual(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, NumberLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, StringLit> || std::is_same_v<T, BoolLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Identifier>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Member>) {
          return x.name == y.name && structurallyEqual(*x.object, *y.object);
        } else if constexpr (std::is_same_v<T, Call>) {
          if (x.name != y.name || x.args.size() != y.args.size()) return false;
          if (bool(x.receiver) != bool(y.receiver)) return false;
          if (x.receiver && !structurallyEqual(*x.receiver, *y.receiver)) return false;
          for (std::size_t k = 0; k < x.args.size(); ++k) {
            if (!structurallyEqual(*x.args[k], *y.args[k])) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, Unary>) {
          return x.op == y.op && structurallyEqual(*x.operand, *y.operand);
        } else {
          return x.op == y.op && structurallyEqual(*x.lhs, *y.lhs) && structurallyEqual(*x.rhs, *y.rhs);
        }
      },
      a.node);
}

bool containsSetValue(const Expr& e) {
  return anyNode(e, [](const Expr& n) {
    const auto* c = std::get_if<Call>(&n.node);
    return c && c->name == "setValue";
  });
}

bool isTopLevelSetValue(const Expr& e) {
  const auto* c = std::get_if<Call>(&e.node);
  return c && c->receiver && c->name == "setValue";
}

bool readsOwnProperty(const Expr& e, LayoutProperty property) {
  const LayoutProperty want = canonical(property);
  return anyNode(e, [&](const Expr& n) {
    const auto* m = std::get_if<Member>(&n.node);
    if (!m) return false;
    if (isThis(*m->object)) {
      auto p = layoutPropertyFromString(m->name);
      return p && canonical(*p) == want;
    }
    const auto* inner = std::get_if<Member>(&m->object->node);
    if (inner && inner->name == "vertexSize" && isThis(*inner->object)) {
      if (m->name == "x") return want == LayoutProperty::X;
      if (m->name == "y") return want == LayoutProperty::Y;
    }
    return false;
  });
}

}  // namespace expr

Expression::Expression(std::string source) : source_(std::move(source)), ast_(expr::parse(source_)) {}

}  // namespace posyn
