#pragma once

// Recursive tree-class systems.
//
// Class 0 is the node class {•}. Every other class i is specified as
//   T_i = • / union over productions gamma of  sum_j gamma_j T_j
// where each gamma_j is a MultiplicityBound (exactly m or at least m copies).
//
// Source format (`.fst`, `#` comments):
//
//   system <ident> [qrank <k>]
//   class T0 = node
//   class <ident> = node / [ <ident>:<coeff> {, <ident>:<coeff>} ] { | [ ... ] }
//   def <ident> = <classexpr>
//
// with <coeff> either `k` or `>=k`. Omitted slots mean exactly 0. Class
// expressions combine `node`, names, `|` (union), `+` (sum), `[coeff] e`
// (multiset of trees of e) and `node / e` (new root over a forest).

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forestlab/polya.hpp"

namespace forestlab {

struct ClassExpr {
  enum class Kind { NodeClass, Ref, Union, Sum, Multiset, RootAppend };

  Kind kind = Kind::NodeClass;
  std::string name;                                            // Ref
  MultiplicityBound bound = MultiplicityBound::exactly(0);     // Multiset
  std::vector<ClassExpr> operands;                             // Union/Sum: n >= 1, Multiset/RootAppend: 1

  static ClassExpr node() { return {}; }
  static ClassExpr ref(std::string name);
  static ClassExpr union_of(std::vector<ClassExpr> operands);
  static ClassExpr sum_of(std::vector<ClassExpr> operands);
  static ClassExpr multiset(MultiplicityBound bound, ClassExpr operand);
  static ClassExpr root_append(ClassExpr forest);

  friend bool operator==(const ClassExpr&, const ClassExpr&) = default;
};

std::string to_string(const ClassExpr& expr);

using Production = std::vector<MultiplicityBound>;

struct ClassDecl {
  std::string name;
  // Empty for the node class.
  std::vector<Production> productions;
};

struct Definition {
  std::string name;
  ClassExpr expr;
};

class ComptonSystem {
 public:
  // Checks structural invariants and throws ParseError(Invalid) on violation:
  // class 0 has no productions, every other class has at least one, vectors have
  // one slot per class, no production is all exactly-0, names are unique, and
  // every reference in a definition resolves.
  ComptonSystem(std::string name, std::optional<unsigned> quantifier_rank, std::vector<ClassDecl> classes,
                std::vector<Definition> definitions = {});

  const std::string& name() const noexcept { return name_; }
  std::optional<unsigned> quantifier_rank() const noexcept { return quantifier_rank_; }
  std::size_t class_count() const noexcept { return classes_.size(); }
  const std::vector<ClassDecl>& classes() const noexcept { return classes_; }
  const ClassDecl& decl(std::size_t i) const { return classes_.at(i); }
  const std::vector<Definition>& definitions() const noexcept { return definitions_; }

  std::optional<std::size_t> find_class(std::string_view name) const;
  const Definition* find_definition(std::string_view name) const;

  // Resolves `name` as a class or definition into an expression.
  ClassExpr expression_for(std::string_view name) const;

  // True when the expression denotes a class of trees (as opposed to forests).
  bool is_tree_valued(const ClassExpr& expr) const;

  // Class indices referenced by an expression, following definitions.
  std::vector<std::size_t> referenced_classes(const ClassExpr& expr) const;

 private:
  std::string name_;
  std::optional<unsigned> quantifier_rank_;
  std::vector<ClassDecl> classes_;
  std::vector<Definition> definitions_;
};

ComptonSystem parse_system(std::string_view source);
std::string print_system(const ComptonSystem& system);
ClassExpr parse_class_expr(std::string_view source, const ComptonSystem& system);

struct ClassStatus {
  std::string name;
  bool productive = false;
  bool reachable = false;
};

struct ValidationReport {
  std::vector<ClassStatus> classes;
  std::vector<std::string> warnings;

  bool all_productive() const;
};

// Productivity is the least fixed point: a class is nonempty iff some production
// uses only nonempty classes in its slots with positive lower bound. Reachability is
// measured from `roots` (class indices); when empty, from every definition, or from
// every class if the system has no definitions.
ValidationReport validate(const ComptonSystem& system, const std::vector<std::size_t>& roots = {});

// Productive classes as a mask; shared by the analyses.
std::vector<bool> productive_classes(const ComptonSystem& system);

// A production is live when every slot with positive lower bound names a productive class.
bool is_live(const Production& production, const std::vector<bool>& productive);

// A slot is effective when it can contribute at least one tree: not exactly-0 and over a
// productive class.
inline bool is_effective(MultiplicityBound bound, bool productive) { return !bound.is_zero() && productive; }

}  // namespace forestlab
