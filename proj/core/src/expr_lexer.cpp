#include "expr_lexer.hpp"

#include <cctype>
#include <charconv>
#include <optional>

#include "posyn/error.hpp"

namespace posyn::expr::detail {

namespace {

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool identPart(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

struct LexFailure {
  std::size_t pos;
  std::string message;
  std::vector<std::string> expected;
};

// Returns nullopt on success; `out` receives the tokens read so far.
std::optional<LexFailure> run(std::string_view s, LexResult& out) {
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t pos, std::string text) {
    Token t;
    t.kind = k;
    t.pos = pos;
    t.text = std::move(text);
    out.tokens.push_back(std::move(t));
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (digit(c)) {
      while (i < s.size() && digit(s[i])) ++i;
      if (i < s.size() && s[i] == '.' && i + 1 < s.size() && digit(s[i + 1])) {
        ++i;
        while (i < s.size() && digit(s[i])) ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && digit(s[j])) {
          i = j;
          while (i < s.size() && digit(s[i])) ++i;
        }
      }
      Token t;
      t.kind = Tok::Number;
      t.pos = start;
      t.text = std::string(s.substr(start, i - start));
      auto res = std::from_chars(s.data() + start, s.data() + i, t.number);
      if (res.ec != std::errc()) return LexFailure{start, "number out of range", {"number"}};
      out.tokens.push_back(std::move(t));
      continue;
    }
    if (identStart(c)) {
      while (i < s.size() && identPart(s[i])) ++i;
      std::string word(s.substr(start, i - start));
      Tok k = Tok::Ident;
      if (word == "true") k = Tok::True;
      else if (word == "false") k = Tok::False;
      else if (word == "and") k = Tok::And;
      else if (word == "or") k = Tok::Or;
      else if (word == "not") k = Tok::Not;
      push(k, start, std::move(word));
      continue;
    }
    if (c == '\'' || c == '"') {
      char quote = c;
      std::string value;
      ++i;
      bool closed = false;
      while (i < s.size()) {
        char d = s[i];
        if (d == quote) {
          closed = true;
          ++i;
          break;
        }
        if (d == '\\' && i + 1 < s.size()) {
          char e = s[i + 1];
          value += (e == 'n') ? '\n' : (e == 't') ? '\t' : e;
          i += 2;
          continue;
        }
        value += d;
        ++i;
      }
      if (!closed) {
        out.unterminatedString = true;
        out.pendingString = std::move(value);
        out.pendingQuote = quote;
        return LexFailure{start, "unterminated string literal", {std::string(1, quote)}};
      }
      push(Tok::String, start, std::move(value));
      continue;
    }
    auto two = [&](char next) { return i + 1 < s.size() && s[i + 1] == next; };
    switch (c) {
      case '.': push(Tok::Dot, start, "."); ++i; continue;
      case '(': push(Tok::LParen, start, "("); ++i; continue;
      case ')': push(Tok::RParen, start, ")"); ++i; continue;
      case ',': push(Tok::Comma, start, ","); ++i; continue;
      case '+': push(Tok::Plus, start, "+"); ++i; continue;
      case '-': push(Tok::Minus, start, "-"); ++i; continue;
      case '*': push(Tok::Star, start, "*"); ++i; continue;
      case '/': push(Tok::Slash, start, "/"); ++i; continue;
      case '=': push(Tok::Eq, start, "="); ++i; continue;
      case '!':
        if (two('=')) {
          push(Tok::Ne, start, "!=");
          i += 2;
        } else {
          push(Tok::Not, start, "!");
          ++i;
        }
        continue;
      case '<':
        if (two('=')) {
          push(Tok::Le, start, "<=");
          i += 2;
        } else {
          push(Tok::Lt, start, "<");
          ++i;
        }
        continue;
      case '>':
        if (two('=')) {
          push(Tok::Ge, start, ">=");
          i += 2;
        } else {
          push(Tok::Gt, start, ">");
          ++i;
        }
        continue;
      case '&':
        if (two('&')) {
          push(Tok::And, start, "&&");
          i += 2;
          continue;
        }
        break;
      case '|':
        if (two('|')) {
          push(Tok::Or, start, "||");
          i += 2;
          continue;
        }
        break;
      default: break;
    }
    return LexFailure{start, std::string("unexpected character '") + c + "'", {}};
  }
  return std::nullopt;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  LexResult out;
  if (auto failure = run(text, out)) {
    throw SyntaxError(failure->pos, failure->expected,
                      failure->message + " at offset " + std::to_string(failure->pos));
  }
  Token end;
  end.kind = Tok::End;
  end.pos = text.size();
  out.tokens.push_back(end);
  return std::move(out.tokens);
}

LexResult tokenizePrefix(std::string_view text, bool& ok) {
  LexResult out;
  auto failure = run(text, out);
  ok = !failure || out.unterminatedString;
  Token end;
  end.kind = Tok::End;
  end.pos = text.size();
  out.tokens.push_back(end);
  return out;
}

}  // namespace posyn::expr::detail
