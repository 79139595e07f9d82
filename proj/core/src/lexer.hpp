#pragma once

// Shared tokenizer for the system and expression languages.

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "forestlab/error.hpp"

namespace forestlab::detail {

struct Token {
  enum class Kind { Ident, Int, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is(std::string_view punct) const { return kind == Kind::Punct && text == punct; }
  bool is_word(std::string_view word) const { return kind == Kind::Ident && text == word; }
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    std::size_t j = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\'')) ++j;
      tok.kind = Token::Kind::Ident;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      tok.kind = Token::Kind::Int;
    } else if (c == '>' && i + 1 < src.size() && src[i + 1] == '=') {
      j = i + 2;
      tok.kind = Token::Kind::Punct;
    } else if (std::string_view("=/[]:,|+()*-^").find(c) != std::string_view::npos) {
      j = i + 1;
      tok.kind = Token::Kind::Punct;
    } else {
      throw ParseError(ParseError::Kind::Syntax, line, col, std::string("unexpected character '") + c + "'");
    }
    tok.text = std::string(src.substr(i, j - i));
    advance(j - i);
    out.push_back(std::move(tok));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t k = pos_ + ahead;
    return k < tokens_.size() ? tokens_[k] : tokens_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }

  bool accept(std::string_view punct) {
    if (!peek().is(punct)) return false;
    next();
    return true;
  }
  bool accept_word(std::string_view word) {
    if (!peek().is_word(word)) return false;
    next();
    return true;
  }
  const Token& expect(std::string_view punct) {
    if (!peek().is(punct)) fail("expected '" + std::string(punct) + "', found " + describe(peek()));
    return next();
  }
  const Token& expect_word(std::string_view word) {
    if (!peek().is_word(word)) fail("expected '" + std::string(word) + "', found " + describe(peek()));
    return next();
  }
  const Token& expect_ident(std::string_view what) {
    if (peek().kind != Token::Kind::Ident) fail("expected " + std::string(what) + ", found " + describe(peek()));
    return next();
  }
  unsigned long expect_int(std::string_view what, ParseError::Kind kind = ParseError::Kind::Syntax) {
    if (peek().kind != Token::Kind::Int) fail("expected " + std::string(what) + ", found " + describe(peek()), kind);
    const Token& t = next();
    if (t.text.size() > 9) fail_at(t, "integer too large: " + t.text, kind);
    return std::stoul(t.text);
  }

  [[noreturn]] void fail(const std::string& what, ParseError::Kind kind = ParseError::Kind::Syntax) const {
    fail_at(peek(), what, kind);
  }
  [[noreturn]] static void fail_at(const Token& t, const std::string& what,
                                   ParseError::Kind kind = ParseError::Kind::Syntax) {
    throw ParseError(kind, t.line, t.column, what);
  }

  static std::string describe(const Token& t) {
    if (t.kind == Token::Kind::End) return "end of input";
    return "'" + t.text + "'";
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace forestlab::detail
