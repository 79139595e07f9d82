#include "forestlab/system.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "forestlab/error.hpp"

namespace forestlab {

ClassExpr ClassExpr::ref(std::string name) {
  ClassExpr e;
  e.kind = Kind::Ref;
  e.name = std::move(name);
  return e;
}

ClassExpr ClassExpr::union_of(std::vector<ClassExpr> operands) {
  if (operands.size() == 1) return std::move(operands.front());
  ClassExpr e;
  e.kind = Kind::Union;
  e.operands = std::move(operands);
  return e;
}

ClassExpr ClassExpr::sum_of(std::vector<ClassExpr> operands) {
  if (operands.size() == 1) return std::move(operands.front());
  ClassExpr e;
  e.kind = Kind::Sum;
  e.operands = std::move(operands);
  return e;
}

ClassExpr ClassExpr::multiset(MultiplicityBound bound, ClassExpr operand) {
  ClassExpr e;
  e.kind = Kind::Multiset;
  e.bound = bound;
  e.operands.push_back(std::move(operand));
  return e;
}

ClassExpr ClassExpr::root_append(ClassExpr forest) {
  ClassExpr e;
  e.kind = Kind::RootAppend;
  e.operands.push_back(std::move(forest));
  return e;
}

namespace {

// 0: union, 1: sum, 2: primary
int precedence(const ClassExpr& e) {
  switch (e.kind) {
    case ClassExpr::Kind::Union: return 0;
    case ClassExpr::Kind::Sum: return 1;
    default: return 2;
  }
}

void print_expr(std::ostream& out, const ClassExpr& e, int min_prec) {
  const bool parens = precedence(e) < min_prec;
  if (parens) out << '(';
  switch (e.kind) {
    case ClassExpr::Kind::NodeClass: out << "node"; break;
    case ClassExpr::Kind::Ref: out << e.name; break;
    case ClassExpr::Kind::Union:
    case ClassExpr::Kind::Sum: {
      const char* sep = e.kind == ClassExpr::Kind::Union ? " | " : " + ";
      const int child_prec = precedence(e) + 1;
      for (std::size_t k = 0; k < e.operands.size(); ++k) {
        if (k) out << sep;
        print_expr(out, e.operands[k], child_prec);
      }
      break;
    }
    case ClassExpr::Kind::Multiset:
      out << '[' << e.bound.to_string() << "] ";
      print_expr(out, e.operands.front(), 2);
      break;
    case ClassExpr::Kind::RootAppend:
      out << "node / ";
      print_expr(out, e.operands.front(), 2);
      break;
  }
  if (parens) out << ')';
}

[[noreturn]] void invalid(const std::string& what) { throw ParseError(ParseError::Kind::Invalid, 0, 0, what); }

}  // namespace

std::string to_string(const ClassExpr& expr) {
  std::ostringstream out;
  print_expr(out, expr, 0);
  return out.str();
}

ComptonSystem::ComptonSystem(std::string name, std::optional<unsigned> quantifier_rank,
                             std::vector<ClassDecl> classes, std::vector<Definition> definitions)
    : name_(std::move(name)),
      quantifier_rank_(quantifier_rank),
      classes_(std::move(classes)),
      definitions_(std::move(definitions)) {
  if (classes_.empty()) invalid("a system needs the node class as its first class");
  if (!classes_.front().productions.empty()) invalid("the first class must be the node class");
  std::set<std::string> names;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const auto& c = classes_[i];
    if (!names.insert(c.name).second) throw ParseError(ParseError::Kind::DuplicateClass, 0, 0, c.name);
    if (i == 0) continue;
    if (c.productions.empty()) invalid("class " + c.name + " has no productions; only the first class is the node class");
    for (const auto& gamma : c.productions) {
      if (gamma.size() != classes_.size()) invalid("production of " + c.name + " has the wrong number of slots");
      if (std::all_of(gamma.begin(), gamma.end(), [](MultiplicityBound b) { return b.is_zero(); })) {
        invalid("class " + c.name + " has an all-zero production (the bare node belongs to the node class only)");
      }
    }
  }
  for (const auto& d : definitions_) {
    if (!names.insert(d.name).second) throw ParseError(ParseError::Kind::DuplicateClass, 0, 0, d.name);
  }
  // Definitions may only use earlier definitions, so they cannot be recursive.
  std::set<std::string> visible;
  for (const auto& c : classes_) visible.insert(c.name);
  std::function<void(const ClassExpr&)> check = [&](const ClassExpr& e) {
    if (e.kind == ClassExpr::Kind::Ref && !visible.count(e.name)) {
      throw ParseError(ParseError::Kind::UnknownClass, 0, 0, e.name);
    }
    if (e.kind == ClassExpr::Kind::Multiset && !is_tree_valued(e.operands.front())) {
      invalid("multiset operand must denote trees: " + to_string(e.operands.front()));
    }
    for (const auto& o : e.operands) check(o);
  };
  for (const auto& d : definitions_) {
    check(d.expr);
    visible.insert(d.name);
  }
}

std::optional<std::size_t> ComptonSystem::find_class(std::string_view name) const {
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i].name == name) return i;
  }
  return std::nullopt;
}

const Definition* ComptonSystem::find_definition(std::string_view name) const {
  for (const auto& d : definitions_) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

ClassExpr ComptonSystem::expression_for(std::string_view name) const {
  if (find_class(name) || find_definition(name)) return ClassExpr::ref(std::string(name));
  throw ParseError(ParseError::Kind::UnknownClass, 0, 0, std::string(name));
}

bool ComptonSystem::is_tree_valued(const ClassExpr& expr) const {
  switch (expr.kind) {
    case ClassExpr::Kind::NodeClass:
    case ClassExpr::Kind::RootAppend: return true;
    case ClassExpr::Kind::Ref: {
      if (find_class(expr.name)) return true;
      const Definition* d = find_definition(expr.name);
      return d != nullptr && is_tree_valued(d->expr);
    }
    case ClassExpr::Kind::Union:
      return std::all_of(expr.operands.begin(), expr.operands.end(),
                         [this](const ClassExpr& o) { return is_tree_valued(o); });
    case ClassExpr::Kind::Sum:
    case ClassExpr::Kind::Multiset: return false;
  }
  return false;
}

std::vector<std::size_t> ComptonSystem::referenced_classes(const ClassExpr& expr) const {
  std::set<std::size_t> out;
  std::function<void(const ClassExpr&)> walk = [&](const ClassExpr& e) {
    if (e.kind == ClassExpr::Kind::NodeClass) out.insert(0);
    if (e.kind == ClassExpr::Kind::Ref) {
      if (auto i = find_class(e.name)) {
        out.insert(*i);
      } else if (const Definition* d = find_definition(e.name)) {
        walk(d->expr);
      }
    }
    for (const auto& o : e.operands) walk(o);
  };
  walk(expr);
  return {out.begin(), out.end()};
}

std::string print_system(const ComptonSystem& system) {
  std::ostringstream out;
  out << "system " << system.name();
  if (system.quantifier_rank()) out << " qrank " << *system.quantifier_rank();
  out << '\n';
  const auto& classes = system.classes();
  for (std::size_t i = 0; i < classes.size(); ++i) {
    out << "class " << classes[i].name << " = node";
    for (std::size_t p = 0; p < classes[i].productions.size(); ++p) {
      out << (p == 0 ? " / " : " | ") << '[';
      bool first = true;
      const auto& gamma = classes[i].productions[p];
      for (std::size_t j = 0; j < gamma.size(); ++j) {
        if (gamma[j].is_zero()) continue;
        if (!first) out << ", ";
        first = false;
        out << classes[j].name << ':' << gamma[j].to_string();
      }
      out << ']';
    }
    out << '\n';
  }
  for (const auto& d : system.definitions()) out << "def " << d.name << " = " << to_string(d.expr) << '\n';
  return out.str();
}

bool ValidationReport::all_productive() const {
  return std::all_of(classes.begin(), classes.end(), [](const ClassStatus& c) { return c.productive; });
}

bool is_live(const Production& production, const std::vector<bool>& productive) {
  for (std::size_t j = 0; j < production.size(); ++j) {
    if (production[j].m() > 0 && !productive[j]) return false;
  }
  return true;
}

std::vector<bool> productive_classes(const ComptonSystem& system) {
  const std::size_t n = system.class_count();
  std::vector<bool> productive(n, false);
  productive[0] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 1; i < n; ++i) {
      if (productive[i]) continue;
      for (const auto& gamma : system.decl(i).productions) {
        if (is_live(gamma, productive)) {
          productive[i] = true;
          changed = true;
          break;
        }
      }
    }
  }
  return productive;
}

ValidationReport validate(const ComptonSystem& system, const std::vector<std::size_t>& roots) {
  const std::size_t n = system.class_count();
  const auto productive = productive_classes(system);
  ValidationReport report;

  std::vector<std::size_t> start = roots;
  if (start.empty()) {
    for (const auto& d : system.definitions()) {
      for (std::size_t i : system.referenced_classes(d.expr)) start.push_back(i);
    }
    if (system.definitions().empty()) {
      for (std::size_t i = 0; i < n; ++i) start.push_back(i);
    }
  }
  std::vector<bool> reachable(n, false);
  std::vector<std::size_t> stack;
  for (std::size_t r : start) {
    if (r < n && !reachable[r]) {
      reachable[r] = true;
      stack.push_back(r);
    }
  }
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (const auto& gamma : system.decl(i).productions) {
      for (std::size_t j = 0; j < n; ++j) {
        if (!gamma[j].is_zero() && !reachable[j]) {
          reachable[j] = true;
          stack.push_back(j);
        }
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto& decl = system.decl(i);
    report.classes.push_back({decl.name, productive[i], reachable[i]});
    if (!productive[i]) report.warnings.push_back("class " + decl.name + " is empty (no finite derivation)");
    for (const auto& gamma : decl.productions) {
      for (std::size_t j = 0; j < n; ++j) {
        if (gamma[j].is_at_least() && gamma[j].m() == 0) {
          report.warnings.push_back("class " + decl.name + " uses unrestricted multiplicity >=0 on " +
                                    system.decl(j).name);
        }
        if (!gamma[j].is_zero() && !productive[j] && productive[i]) {
          report.warnings.push_back("class " + decl.name + " refers to empty class " + system.decl(j).name);
        }
      }
    }
  }
  std::function<void(const ClassExpr&, const std::string&)> unions = [&](const ClassExpr& e, const std::string& def) {
    if (e.kind == ClassExpr::Kind::Union) {
      report.warnings.push_back("definition " + def + " uses a union; operands are counted as disjoint");
    }
    for (const auto& o : e.operands) unions(o, def);
  };
  for (const auto& d : system.definitions()) unions(d.expr, d.name);
  return report;
}

}  // namespace forestlab
