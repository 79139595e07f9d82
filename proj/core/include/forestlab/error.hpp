#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace forestlab {

// Raised when an operation's precondition on its mathematical input fails
// (wrong constant term, negative counts, refused analyses, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured resource bound (order, enumeration size) was exceeded.
class BoundError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Syntax or resolution error in one of the two input languages.
class ParseError : public DomainError {
 public:
  enum class Kind { Syntax, UnknownClass, DuplicateClass, MalformedCoefficient, Invalid };

  ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& what)
      : DomainError(format(kind, line, column, what)), kind_(kind), line_(line), column_(column) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

  static const char* kind_name(Kind kind) noexcept {
    switch (kind) {
      case Kind::Syntax: return "SyntaxError";
      case Kind::UnknownClass: return "UnknownClass";
      case Kind::DuplicateClass: return "DuplicateClass";
      case Kind::MalformedCoefficient: return "MalformedCoefficient";
      case Kind::Invalid: return "InvalidSpecification";
    }
    return "ParseError";
  }

 private:
  static std::string format(Kind kind, std::size_t line, std::size_t column, const std::string& what) {
    return std::string(kind_name(kind)) + " at " + std::to_string(line) + ":" + std::to_string(column) + ": " + what;
  }

  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace forestlab
