#include "forestlab/gexpr.hpp"

#include <sstream>

#include "forestlab/error.hpp"
#include "lexer.hpp"

namespace forestlab {

GExpr GExpr::geometric(unsigned long m) {
  if (m == 0) throw DomainError("x/(1-x^m) needs m >= 1");
  GExpr e;
  e.kind = Kind::Geometric;
  e.m = m;
  return e;
}

GExpr GExpr::constant(unsigned long value) {
  GExpr e;
  e.kind = Kind::Const;
  e.m = value;
  return e;
}

GExpr GExpr::var(std::string name) {
  GExpr e;
  e.kind = Kind::Var;
  e.name = std::move(name);
  return e;
}

GExpr GExpr::add(GExpr a, GExpr b) {
  GExpr e;
  e.kind = Kind::Add;
  e.operands = {std::move(a), std::move(b)};
  return e;
}

GExpr GExpr::mul(GExpr a, GExpr b) {
  GExpr e;
  e.kind = Kind::Mul;
  e.operands = {std::move(a), std::move(b)};
  return e;
}

GExpr GExpr::multiset(MultiplicityBound bound, GExpr arg) {
  if (bound.m() == 0) throw DomainError("E(m, .) and Egeq(m, .) need m >= 1");
  GExpr e;
  e.kind = Kind::Multiset;
  e.bound = bound;
  e.operands = {std::move(arg)};
  return e;
}

GExpr GExpr::let(std::string name, GExpr value, GExpr body) {
  GExpr e;
  e.kind = Kind::Let;
  e.name = std::move(name);
  e.operands = {std::move(value), std::move(body)};
  return e;
}

namespace {

using detail::Token;
using detail::TokenCursor;

bool is_keyword(const std::string& w) { return w == "x" || w == "E" || w == "Egeq" || w == "let" || w == "in"; }

class GParser {
 public:
  explicit GParser(std::string_view src) : cur_(detail::tokenize(src)) {}

  GExpr parse() {
    GExpr e = parse_expr();
    if (!cur_.at_end()) cur_.fail("unexpected " + TokenCursor::describe(cur_.peek()));
    return e;
  }

 private:
  GExpr parse_expr() {
    if (cur_.accept_word("let")) {
      const Token& name = cur_.expect_ident("binding name");
      if (is_keyword(name.text)) TokenCursor::fail_at(name, "reserved word used as binding name");
      std::string bound = name.text;
      cur_.expect("=");
      GExpr value = parse_expr();
      cur_.expect_word("in");
      GExpr body = parse_expr();
      return GExpr::let(std::move(bound), std::move(value), std::move(body));
    }
    GExpr e = parse_prod();
    while (cur_.accept("+")) e = GExpr::add(std::move(e), parse_prod());
    return e;
  }

  GExpr parse_prod() {
    GExpr e = parse_atom();
    while (cur_.accept("*")) e = GExpr::mul(std::move(e), parse_atom());
    return e;
  }

  GExpr parse_atom() {
    const Token& t = cur_.peek();
    if (t.is_word("x")) {
      cur_.next();
      if (!cur_.accept("/")) return GExpr::x();
      cur_.expect("(");
      const Token& one = cur_.peek();
      if (cur_.expect_int("1") != 1) TokenCursor::fail_at(one, "expected 1 in x/(1-x^m)");
      cur_.expect("-");
      cur_.expect_word("x");
      unsigned long m = 1;
      if (cur_.accept("^")) {
        const Token& mt = cur_.peek();
        m = cur_.expect_int("exponent m");
        if (m == 0) TokenCursor::fail_at(mt, "x/(1-x^m) needs m >= 1", ParseError::Kind::Invalid);
      }
      cur_.expect(")");
      return GExpr::geometric(m);
    }
    if (t.is_word("E") || t.is_word("Egeq")) {
      const bool at_least = t.text == "Egeq";
      cur_.next();
      cur_.expect("(");
      const Token& mt = cur_.peek();
      const unsigned long m = cur_.expect_int("multiplicity m");
      if (m == 0) TokenCursor::fail_at(mt, "multiset operators need m >= 1", ParseError::Kind::Invalid);
      cur_.expect(",");
      GExpr arg = parse_expr();
      cur_.expect(")");
      const auto bound = at_least ? MultiplicityBound::at_least(static_cast<unsigned>(m))
                                  : MultiplicityBound::exactly(static_cast<unsigned>(m));
      return GExpr::multiset(bound, std::move(arg));
    }
    if (t.kind == Token::Kind::Int) {
      const Token& ct = t;
      const unsigned long v = cur_.expect_int("constant");
      if (v > 1) TokenCursor::fail_at(ct, "only the constants 0 and 1 are allowed", ParseError::Kind::Invalid);
      return GExpr::constant(v);
    }
    if (cur_.accept("(")) {
      GExpr e = parse_expr();
      cur_.expect(")");
      return e;
    }
    const Token& name = cur_.expect_ident("expression");
    if (is_keyword(name.text)) TokenCursor::fail_at(name, "unexpected keyword '" + name.text + "'");
    return GExpr::var(name.text);
  }

  TokenCursor cur_;
};

// 0: let, 1: sum, 2: product, 3: atom
int precedence(const GExpr& e) {
  switch (e.kind) {
    case GExpr::Kind::Let: return 0;
    case GExpr::Kind::Add: return 1;
    case GExpr::Kind::Mul: return 2;
    default: return 3;
  }
}

void print(std::ostream& out, const GExpr& e, int min_prec, int indent) {
  const bool parens = precedence(e) < min_prec;
  if (parens) out << '(';
  switch (e.kind) {
    case GExpr::Kind::X: out << 'x'; break;
    case GExpr::Kind::Geometric: out << "x/(1-x^" << e.m << ')'; break;
    case GExpr::Kind::Const: out << e.m; break;
    case GExpr::Kind::Var: out << e.name; break;
    case GExpr::Kind::Add:
      print(out, e.operands[0], 1, indent);
      out << " + ";
      print(out, e.operands[1], 2, indent);
      break;
    case GExpr::Kind::Mul:
      print(out, e.operands[0], 2, indent);
      out << " * ";
      print(out, e.operands[1], 3, indent);
      break;
    case GExpr::Kind::Multiset:
      out << (e.bound.is_at_least() ? "Egeq(" : "E(") << e.bound.m() << ", ";
      print(out, e.operands[0], 0, indent);
      out << ')';
      break;
    case GExpr::Kind::Let:
      out << "let " << e.name << " = ";
      print(out, e.operands[0], 0, indent + 2);
      out << " in\n" << std::string(static_cast<std::size_t>(indent), ' ');
      print(out, e.operands[1], 0, indent);
      break;
  }
  if (parens) out << ')';
}

}  // namespace

GExpr parse_gexpr(std::string_view source) { return GParser(source).parse(); }

std::string to_string(const GExpr& expr) {
  std::ostringstream out;
  print(out, expr, 0, 0);
  return out.str();
}

}  // namespace forestlab
