#pragma once

// Closed-form generating-function expressions: atoms x and x/(1-x^m), sums,
// products, the multiset operators E(m, .) and Egeq(m, .), and let-bindings.
//
// Grammar:
//   expr  := 'let' ident '=' expr 'in' expr | sum
//   sum   := prod { '+' prod }
//   prod  := atom { '*' atom }
//   atom  := 'x' [ '/' '(' '1' '-' 'x' [ '^' int ] ')' ] | int | ident
//          | 'E' '(' int ',' expr ')' | 'Egeq' '(' int ',' expr ')' | '(' expr ')'
//
// All m are >= 1. Integer literals other than 0 and 1 are rejected; the two
// constants are needed to write empty classes and unrestricted multisets.

#include <string>
#include <string_view>
#include <vector>

#include "forestlab/polya.hpp"

namespace forestlab {

struct GExpr {
  enum class Kind { X, Geometric, Const, Var, Add, Mul, Multiset, Let };

  Kind kind = Kind::X;
  unsigned long m = 0;                                        // Geometric period, Const value
  MultiplicityBound bound = MultiplicityBound::exactly(1);    // Multiset
  std::string name;                                           // Var, Let
  std::vector<GExpr> operands;                                // Add/Mul: 2, Multiset: 1, Let: {value, body}

  static GExpr x() { return {}; }
  static GExpr geometric(unsigned long m);
  static GExpr constant(unsigned long value);
  static GExpr var(std::string name);
  static GExpr add(GExpr a, GExpr b);
  static GExpr mul(GExpr a, GExpr b);
  static GExpr multiset(MultiplicityBound bound, GExpr arg);
  static GExpr let(std::string name, GExpr value, GExpr body);

  friend bool operator==(const GExpr&, const GExpr&) = default;
};

GExpr parse_gexpr(std::string_view source);
std::string to_string(const GExpr& expr);

}  // namespace forestlab
