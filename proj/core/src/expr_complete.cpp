#include <algorithm>
#include <cctype>
#include <optional>

#include "expr_lexer.hpp"
#include "posyn/expr.hpp"

namespace posyn {

using expr::detail::Tok;
using expr::detail::Token;

namespace {

const std::vector<std::string> kTopLevel = {"this", "true", "false", "round", "floor", "ceil",
                                            "abs",  "min",  "max",   "log2",  "pow",   "sqrt"};
const std::vector<std::string> kRootMembers = {"x",          "y",     "width",  "height",    "rotation",
                                               "vertexSize", "model", "target", "lastOutput"};
const std::vector<std::string> kNodeMembers = {"x", "y", "width", "height", "rotation", "vertexSize", "model"};
const std::vector<std::string> kVertexMembers = {"x", "y"};
const std::vector<std::string> kObjectMethods = {"getChildren", "getValue"};
const std::vector<std::string> kSlotMethods = {"getValue", "setValue"};

struct StaticType {
  enum class Kind { Root, Node, Vertex, Object, Slot, Other } kind = Kind::Other;
  std::string className;
};

std::vector<std::string> filtered(const std::vector<std::string>& names, std::string_view partial) {
  std::vector<std::string> out;
  for (const auto& n : names) {
    if (n.starts_with(partial)) out.push_back(n);
  }
  return out;
}

// Index of the first token of the postfix chain ending just before `end`.
std::optional<std::size_t> chainStart(const std::vector<Token>& t, std::size_t end) {
  if (end == 0) return std::nullopt;
  std::size_t i = end;
  while (true) {
    if (i == 0) return std::nullopt;
    std::size_t k = i - 1;
    if (t[k].kind == Tok::RParen) {
      int depth = 0;
      while (true) {
        if (t[k].kind == Tok::RParen) ++depth;
        if (t[k].kind == Tok::LParen && --depth == 0) break;
        if (k == 0) return std::nullopt;
        --k;
      }
      if (k == 0 || t[k - 1].kind != Tok::Ident) return std::nullopt;
      k -= 1;
    } else if (t[k].kind != Tok::Ident) {
      return std::nullopt;
    }
    if (k > 0 && t[k - 1].kind == Tok::Dot) {
      i = k - 1;
      continue;
    }
    return k;
  }
}

std::optional<StaticType> resolveChain(const std::vector<Token>& t, std::size_t begin, std::size_t end,
                                       const CompletionContext& ctx) {
  if (begin >= end || t[begin].kind != Tok::Ident || t[begin].text != "this") return std::nullopt;
  StaticType type{StaticType::Kind::Root, ctx.className};
  std::size_t i = begin + 1;
  while (i < end) {
    if (t[i].kind != Tok::Dot || i + 1 >= end || t[i + 1].kind != Tok::Ident) return std::nullopt;
    const std::string& name = t[i + 1].text;
    i += 2;
    std::vector<const Token*> args;
    bool call = false;
    if (i < end && t[i].kind == Tok::LParen) {
      call = true;
      std::size_t k = i + 1;
      int depth = 1;
      while (k < end && depth > 0) {
        if (t[k].kind == Tok::LParen) ++depth;
        if (t[k].kind == Tok::RParen) --depth;
        if (depth > 0) args.push_back(&t[k]);
        ++k;
      }
      i = k;
    }
    using K = StaticType::Kind;
    switch (type.kind) {
      case K::Root:
      case K::Node:
        if (call) return std::nullopt;
        if (name == "vertexSize") {
          type.kind = K::Vertex;
        } else if (name == "model") {
          type = {K::Object, type.kind == K::Root ? ctx.className : ctx.targetClassName};
        } else if (name == "target" && type.kind == K::Root) {
          type = {K::Node, ctx.targetClassName};
        } else {
          type.kind = K::Other;
        }
        break;
      case K::Object: {
        if (!call) return std::nullopt;
        if (name != "getChildren") {
          type.kind = K::Other;
          break;
        }
        if (args.size() != 1 || args[0]->kind != Tok::String || !ctx.metamodel) return std::nullopt;
        if (!ctx.metamodel->findClass(type.className)) return std::nullopt;
        const Feature* f = ctx.metamodel->findFeature(type.className, args[0]->text);
        if (!f) return std::nullopt;
        if (f->isReference()) {
          type.className = f->reference().target;
        } else {
          type.kind = K::Slot;
        }
        break;
      }
      default: type.kind = K::Other; break;
    }
  }
  return type;
}

std::vector<std::string> membersOf(const StaticType& type) {
  using K = StaticType::Kind;
  switch (type.kind) {
    case K::Root: return kRootMembers;
    case K::Node: return kNodeMembers;
    case K::Vertex: return kVertexMembers;
    case K::Object: return kObjectMethods;
    case K::Slot: return kSlotMethods;
    case K::Other: break;
  }
  return {};
}

std::vector<std::string> featureNames(const StaticType& type, const CompletionContext& ctx) {
  std::vector<std::string> out;
  if (type.kind != StaticType::Kind::Object || !ctx.metamodel || !ctx.metamodel->findClass(type.className)) {
    return out;
  }
  for (const auto& f : ctx.metamodel->features(type.className)) out.push_back(f.name());
  return out;
}

// `.getChildren(` immediately before `end`: returns the receiver chain's end.
std::optional<std::size_t> getChildrenOpen(const std::vector<Token>& t, std::size_t end) {
  if (end < 3) return std::nullopt;
  if (t[end - 1].kind != Tok::LParen || t[end - 2].kind != Tok::Ident || t[end - 2].text != "getChildren" ||
      t[end - 3].kind != Tok::Dot) {
    return std::nullopt;
  }
  return end - 3;
}

bool isWordToken(const Token& tok) {
  switch (tok.kind) {
    case Tok::Ident:
    case Tok::True:
    case Tok::False:
    case Tok::And:
    case Tok::Or:
    case Tok::Not: return !tok.text.empty() && std::isalpha(static_cast<unsigned char>(tok.text[0]));
    default: return false;
  }
}

}  // namespace

std::vector<std::string> complete(std::string_view prefix, const CompletionContext& ctx) {
  bool ok = false;
  auto lex = expr::detail::tokenizePrefix(prefix, ok);
  if (!ok) return {};
  std::vector<Token> t(lex.tokens.begin(), lex.tokens.end() - 1);  // drop End
  const std::size_t n = t.size();

  auto receiverType = [&](std::size_t chainEnd) -> std::optional<StaticType> {
    auto begin = chainStart(t, chainEnd);
    if (!begin) return std::nullopt;
    return resolveChain(t, *begin, chainEnd, ctx);
  };

  if (lex.unterminatedString) {
    auto recvEnd = getChildrenOpen(t, n);
    if (!recvEnd) return {};
    auto type = receiverType(*recvEnd);
    if (!type) return {};
    return filtered(featureNames(*type, ctx), lex.pendingString);
  }

  if (n == 0) return kTopLevel;
  const bool endsInSpace = !prefix.empty() && std::isspace(static_cast<unsigned char>(prefix.back()));
  const Token& last = t.back();

  if (auto recvEnd = getChildrenOpen(t, n)) {
    auto type = receiverType(*recvEnd);
    if (!type) return {};
    std::vector<std::string> out;
    for (const auto& f : featureNames(*type, ctx)) out.push_back("'" + f + "'");
    return out;
  }
  if (last.kind == Tok::Dot) {
    auto type = receiverType(n - 1);
    return type ? membersOf(*type) : std::vector<std::string>{};
  }
  if (isWordToken(last) && !endsInSpace) {
    if (n >= 2 && t[n - 2].kind == Tok::Dot) {
      auto type = receiverType(n - 2);
      return type ? filtered(membersOf(*type), last.text) : std::vector<std::string>{};
    }
    return filtered(kTopLevel, last.text);
  }
  switch (last.kind) {
    case Tok::Number:
    case Tok::String:
    case Tok::RParen:
    case Tok::Ident:
    case Tok::True:
    case Tok::False: return {};
    default: return kTopLevel;
  }
}

}  // namespace posyn
