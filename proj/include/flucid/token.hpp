#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "flucid/errors.hpp"

namespace flucid {

enum class TokenKind {
  Identifier,
  Atom,      // 'x' or "x"; lexeme holds the unquoted text
  Integer,
  PlusInf,   // +inf
  Dollar,    // $
  Keyword,
  Operator,  // @ # . == != && ||
  Punct,     // ( ) [ ] { } , ; =
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string lexeme;
  int line = 0;
  int column = 0;

  SourcePos pos() const { return {line, column}; }
  bool is(TokenKind k, std::string_view text) const { return kind == k && lexeme == text; }
  bool is_keyword(std::string_view text) const { return is(TokenKind::Keyword, text); }

  friend bool operator==(const Token&, const Token&) = default;
};

const char* to_string(TokenKind k);

bool is_keyword(std::string_view word);

// Splits `source` into tokens, discarding // and /* */ comments. The result
// always ends with a single End token. Throws LexError on an unterminated
// string or block comment, or on a character no token can start with.
std::vector<Token> tokenize(std::string_view source);

}  // namespace flucid
