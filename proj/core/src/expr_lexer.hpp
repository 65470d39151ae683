#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace posyn::expr::detail {

enum class Tok {
  Number,
  String,
  Ident,
  True,
  False,
  And,
  Or,
  Not,
  Dot,
  LParen,
  RParen,
  Comma,
  Plus,
  Minus,
  Star,
  Slash,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier name, decoded string literal, or operator spelling
  double number = 0.0;
  std::size_t pos = 0;
};

struct LexResult {
  std::vector<Token> tokens;  // always terminated by Tok::End
  bool unterminatedString = false;
  std::string pendingString;  // contents of the unterminated literal
  char pendingQuote = '\0';
};

/// Strict tokenization; throws SyntaxError on bad characters or unterminated strings.
std::vector<Token> tokenize(std::string_view text);

/// Tolerant tokenization used by completion: stops at the first problem and
/// reports an unterminated trailing string literal instead of failing.
LexResult tokenizePrefix(std::string_view text, bool& ok);

}  // namespace posyn::expr::detail
