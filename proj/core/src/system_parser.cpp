#include <algorithm>
#include <map>
#include <set>

#include "forestlab/error.hpp"
#include "forestlab/system.hpp"
#include "lexer.hpp"

namespace forestlab {

namespace {

using detail::Token;
using detail::TokenCursor;

bool is_statement_start(const Token& t) {
  return t.is_word("system") || t.is_word("class") || t.is_word("def") || t.kind == Token::Kind::End;
}

bool is_reserved(const std::string& word) {
  static const std::set<std::string> reserved{"system", "class", "def", "node", "qrank"};
  return reserved.count(word) > 0;
}

MultiplicityBound parse_coeff(TokenCursor& cur) {
  const bool at_least = cur.accept(">=");
  const unsigned long m = cur.expect_int("multiplicity (k or >=k)", ParseError::Kind::MalformedCoefficient);
  return at_least ? MultiplicityBound::at_least(static_cast<unsigned>(m))
                  : MultiplicityBound::exactly(static_cast<unsigned>(m));
}

// Class-expression parser. `known` resolves names visible at this point.
class ExprParser {
 public:
  ExprParser(TokenCursor& cur, const std::set<std::string>& known) : cur_(cur), known_(known) {}

  ClassExpr parse_union() {
    std::vector<ClassExpr> parts{parse_sum()};
    while (cur_.accept("|")) parts.push_back(parse_sum());
    return ClassExpr::union_of(std::move(parts));
  }

 private:
  ClassExpr parse_sum() {
    std::vector<ClassExpr> parts{parse_primary()};
    while (cur_.accept("+")) parts.push_back(parse_primary());
    return ClassExpr::sum_of(std::move(parts));
  }

  ClassExpr parse_primary() {
    if (cur_.accept_word("node")) {
      if (cur_.accept("/")) return ClassExpr::root_append(parse_primary());
      return ClassExpr::node();
    }
    if (cur_.accept("[")) {
      const MultiplicityBound bound = parse_coeff(cur_);
      cur_.expect("]");
      return ClassExpr::multiset(bound, parse_primary());
    }
    if (cur_.accept("(")) {
      ClassExpr inner = parse_union();
      cur_.expect(")");
      return inner;
    }
    const Token& name = cur_.expect_ident("class expression");
    if (is_reserved(name.text)) TokenCursor::fail_at(name, "unexpected keyword '" + name.text + "'");
    if (!known_.count(name.text)) TokenCursor::fail_at(name, name.text, ParseError::Kind::UnknownClass);
    return ClassExpr::ref(name.text);
  }

  TokenCursor& cur_;
  const std::set<std::string>& known_;
};

struct PendingSlot {
  Token name;
  MultiplicityBound bound;
};

struct PendingClass {
  Token name;
  bool node = false;
  std::vector<std::vector<PendingSlot>> productions;
};

}  // namespace

ComptonSystem parse_system(std::string_view source) {
  TokenCursor cur(detail::tokenize(source));
  std::string name = "unnamed";
  std::optional<unsigned> qrank;
  if (cur.accept_word("system")) {
    name = cur.expect_ident("system name").text;
    if (cur.accept_word("qrank")) qrank = static_cast<unsigned>(cur.expect_int("quantifier rank"));
  }

  // First pass keeps class bodies unresolved so productions may refer forward.
  std::vector<PendingClass> pending;
  std::map<std::string, std::size_t> class_index;
  struct PendingDef {
    Token name;
    ClassExpr expr;
  };
  std::vector<PendingDef> defs;
  std::set<std::string> known;

  // Class names are collected up front so definitions can be checked as they are parsed.
  {
    TokenCursor scan(detail::tokenize(source));
    while (!scan.at_end()) {
      if (scan.peek().is_word("class") && scan.peek(1).kind == Token::Kind::Ident) known.insert(scan.peek(1).text);
      scan.next();
    }
  }

  while (!cur.at_end()) {
    if (cur.accept_word("class")) {
      PendingClass pc;
      pc.name = cur.expect_ident("class name");
      if (is_reserved(pc.name.text)) TokenCursor::fail_at(pc.name, "reserved word used as class name");
      if (class_index.count(pc.name.text)) {
        TokenCursor::fail_at(pc.name, pc.name.text, ParseError::Kind::DuplicateClass);
      }
      cur.expect("=");
      cur.expect_word("node");
      if (!cur.accept("/")) {
        pc.node = true;
      } else {
        do {
          cur.expect("[");
          std::vector<PendingSlot> slots;
          if (!cur.peek().is("]")) {
            do {
              PendingSlot slot{cur.expect_ident("class name"), MultiplicityBound::exactly(0)};
              cur.expect(":");
              slot.bound = parse_coeff(cur);
              slots.push_back(slot);
            } while (cur.accept(","));
          }
          cur.expect("]");
          pc.productions.push_back(std::move(slots));
        } while (cur.accept("|"));
      }
      if (!is_statement_start(cur.peek())) cur.fail("unexpected " + TokenCursor::describe(cur.peek()));
      class_index.emplace(pc.name.text, pending.size());
      pending.push_back(std::move(pc));
    } else if (cur.accept_word("def")) {
      Token def_name = cur.expect_ident("definition name");
      if (is_reserved(def_name.text)) TokenCursor::fail_at(def_name, "reserved word used as definition name");
      if (known.count(def_name.text)) TokenCursor::fail_at(def_name, def_name.text, ParseError::Kind::DuplicateClass);
      cur.expect("=");
      ExprParser parser(cur, known);
      ClassExpr expr = parser.parse_union();
      if (!is_statement_start(cur.peek())) cur.fail("unexpected " + TokenCursor::describe(cur.peek()));
      known.insert(def_name.text);
      defs.push_back({std::move(def_name), std::move(expr)});
    } else {
      cur.fail("expected 'class' or 'def', found " + TokenCursor::describe(cur.peek()));
    }
  }

  if (pending.empty()) cur.fail("system declares no classes");
  if (!pending.front().node) {
    TokenCursor::fail_at(pending.front().name, "the first class must be the node class (`= node`)",
                         ParseError::Kind::Invalid);
  }

  std::vector<ClassDecl> classes;
  classes.reserve(pending.size());
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const auto& pc = pending[i];
    if (i > 0 && pc.node) {
      TokenCursor::fail_at(pc.name, "only the first class may be the node class", ParseError::Kind::Invalid);
    }
    ClassDecl decl{pc.name.text, {}};
    for (const auto& slots : pc.productions) {
      Production gamma(pending.size(), MultiplicityBound::exactly(0));
      std::vector<bool> seen(pending.size(), false);
      for (const auto& slot : slots) {
        auto it = class_index.find(slot.name.text);
        if (it == class_index.end()) {
          TokenCursor::fail_at(slot.name, slot.name.text, ParseError::Kind::UnknownClass);
        }
        if (seen[it->second]) {
          TokenCursor::fail_at(slot.name, "class " + slot.name.text + " appears twice in one production",
                               ParseError::Kind::MalformedCoefficient);
        }
        seen[it->second] = true;
        gamma[it->second] = slot.bound;
      }
      if (std::all_of(gamma.begin(), gamma.end(), [](MultiplicityBound b) { return b.is_zero(); })) {
        TokenCursor::fail_at(pc.name, "class " + pc.name.text + " has an all-zero production",
                             ParseError::Kind::Invalid);
      }
      decl.productions.push_back(std::move(gamma));
    }
    classes.push_back(std::move(decl));
  }
  std::vector<Definition> definitions;
  for (auto& d : defs) definitions.push_back({d.name.text, std::move(d.expr)});
  return ComptonSystem(std::move(name), qrank, std::move(classes), std::move(definitions));
}

ClassExpr parse_class_expr(std::string_view source, const ComptonSystem& system) {
  std::set<std::string> known;
  for (const auto& c : system.classes()) known.insert(c.name);
  for (const auto& d : system.definitions()) known.insert(d.name);
  TokenCursor cur(detail::tokenize(source));
  ExprParser parser(cur, known);
  ClassExpr expr = parser.parse_union();
  if (!cur.at_end()) cur.fail("unexpected " + TokenCursor::describe(cur.peek()));
  if (expr.kind == ClassExpr::Kind::Multiset && !system.is_tree_valued(expr.operands.front())) {
    throw ParseError(ParseError::Kind::Invalid, 1, 1, "multiset operand must denote trees");
  }
  return expr;
}

}  // namespace forestlab
