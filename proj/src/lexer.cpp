#include <array>
#include <cctype>

#include "flucid/token.hpp"

namespace flucid {

namespace {

constexpr std::array kKeywords = {
    "where", "end",   "dimension", "observation", "sequence", "evidential", "statement", "if",
    "then",  "else",  "unordered", "eod",         "first",    "next",       "fby",       "pby",
    "last",  "prev",  "wvr",       "asa",         "upon",     "iseod",      "in",        "true",
    "false",
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      if (at_end()) {
        out.push_back(Token{TokenKind::End, "", line_, col_});
        return out;
      }
      out.push_back(lex_one());
    }
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const { return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0'; }

  void advance() {
    const char c = src_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      // Columns count code points, not UTF-8 continuation bytes.
      ++col_;
    }
  }

  [[noreturn]] void fail(const std::string& msg, int line, int col) const {
    throw LexError(msg, SourcePos{line, col});
  }

  void skip_trivia() {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        const int line = line_, col = col_;
        advance();
        advance();
        while (!(peek() == '*' && peek(1) == '/')) {
          if (at_end()) fail("unterminated block comment", line, col);
          advance();
        }
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  Token lex_one() {
    const int line = line_, col = col_;
    const char c = peek();
    auto make = [&](TokenKind k, std::string text) { return Token{k, std::move(text), line, col}; };

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
        word += peek();
        advance();
      }
      const TokenKind kind = is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier;
      return make(kind, std::move(word));
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        digits += peek();
        advance();
      }
      return make(TokenKind::Integer, std::move(digits));
    }
    if (c == '\'' || c == '"') {
      const char quote = c;
      advance();
      std::string text;
      for (;;) {
        if (at_end() || peek() == '\n') fail("unterminated string literal", line, col);
        if (peek() == quote) break;
        if (peek() == '\\' && (peek(1) == quote || peek(1) == '\\')) advance();
        text += peek();
        advance();
      }
      advance();
      return make(TokenKind::Atom, std::move(text));
    }
    if (c == '+') {
      if (src_.substr(i_, 4) == "+inf" && !std::isalnum(static_cast<unsigned char>(peek(4))) && peek(4) != '_') {
        for (int k = 0; k < 4; ++k) advance();
        return make(TokenKind::PlusInf, "+inf");
      }
      fail("unexpected '+' (only '+inf' is supported)", line, col);
    }
    if (c == '$') {
      advance();
      return make(TokenKind::Dollar, "$");
    }
    const char two[3] = {c, peek(1), '\0'};
    for (const char* op : {"==", "!=", "&&", "||"}) {
      if (std::string_view(two) == op) {
        advance();
        advance();
        return make(TokenKind::Operator, op);
      }
    }
    if (c == '@' || c == '#' || c == '.') {
      advance();
      return make(TokenKind::Operator, std::string(1, c));
    }
    if (std::string_view("()[]{},;=").find(c) != std::string_view::npos) {
      advance();
      return make(TokenKind::Punct, std::string(1, c));
    }
    fail(std::string("unexpected character '") + c + "'", line, col);
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

const char* to_string(TokenKind k) {
  switch (k) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Atom: return "atom";
    case TokenKind::Integer: return "integer";
    case TokenKind::PlusInf: return "+inf";
    case TokenKind::Dollar: return "$";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Operator: return "operator";
    case TokenKind::Punct: return "punctuation";
    case TokenKind::End: return "end of input";
  }
  return "?";
}

bool is_keyword(std::string_view word) {
  for (const char* k : kKeywords)
    if (word == k) return true;
  return false;
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace flucid
