#include <algorithm>
#include <numeric>
#include <set>

#include "forestlab/error.hpp"
#include "forestlab/structure.hpp"

namespace forestlab {

namespace {

GExpr power_of_x(std::size_t k) {
  GExpr e = GExpr::x();
  for (std::size_t i = 1; i < k; ++i) e = GExpr::mul(std::move(e), GExpr::x());
  return e;
}

std::optional<GExpr> multiply(std::optional<GExpr> acc, GExpr factor) {
  if (!acc) return factor;
  return GExpr::mul(std::move(*acc), std::move(factor));
}

std::optional<GExpr> plus(std::optional<GExpr> acc, GExpr term) {
  if (!acc) return term;
  return GExpr::add(std::move(*acc), std::move(term));
}

// E_bound applied to an arbitrary closed-form argument.
GExpr multiset_of(MultiplicityBound bound, GExpr arg) {
  if (bound == MultiplicityBound::exactly(1)) return arg;
  if (bound.is_zero()) return GExpr::constant(1);
  if (bound == MultiplicityBound::at_least(0)) {
    return GExpr::add(GExpr::constant(1), GExpr::multiset(MultiplicityBound::at_least(1), std::move(arg)));
  }
  return GExpr::multiset(bound, std::move(arg));
}

// prod_j E_{gamma_j}(T_j) over effective slots.
GExpr production_product(const ComptonSystem& system, const Production& gamma, const std::vector<bool>& productive) {
  std::optional<GExpr> acc;
  for (std::size_t j = 0; j < gamma.size(); ++j) {
    if (!is_effective(gamma[j], productive[j])) continue;
    acc = multiply(std::move(acc), multiset_of(gamma[j], GExpr::var(system.decl(j).name)));
  }
  return acc ? std::move(*acc) : GExpr::constant(1);
}

void collect_vars(const GExpr& e, std::set<std::string>& out) {
  if (e.kind == GExpr::Kind::Var) out.insert(e.name);
  for (const auto& o : e.operands) collect_vars(o, out);
}

bool is_reserved_name(const std::string& s) { return s == "x" || s == "E" || s == "Egeq" || s == "let" || s == "in"; }

}  // namespace

GExpr class_expr_to_gexpr(const ComptonSystem& system, const ClassExpr& expr) {
  switch (expr.kind) {
    case ClassExpr::Kind::NodeClass: return GExpr::x();
    case ClassExpr::Kind::Ref: {
      if (system.find_class(expr.name)) return GExpr::var(expr.name);
      if (const Definition* d = system.find_definition(expr.name)) return class_expr_to_gexpr(system, d->expr);
      throw ParseError(ParseError::Kind::UnknownClass, 0, 0, expr.name);
    }
    case ClassExpr::Kind::Union:
    case ClassExpr::Kind::Sum: {
      GExpr acc = class_expr_to_gexpr(system, expr.operands.front());
      for (std::size_t k = 1; k < expr.operands.size(); ++k) {
        GExpr next = class_expr_to_gexpr(system, expr.operands[k]);
        acc = expr.kind == ClassExpr::Kind::Union ? GExpr::add(std::move(acc), std::move(next))
                                                  : GExpr::mul(std::move(acc), std::move(next));
      }
      return acc;
    }
    case ClassExpr::Kind::Multiset: return multiset_of(expr.bound, class_expr_to_gexpr(system, expr.operands.front()));
    case ClassExpr::Kind::RootAppend:
      return GExpr::mul(GExpr::x(), class_expr_to_gexpr(system, expr.operands.front()));
  }
  throw DomainError("unhandled class expression");
}

ExplicitForms to_explicit(const ComptonSystem& system, const DependencyDigraph& g,
                          const RadiusClassification& classification) {
  const std::size_t n = system.class_count();
  for (std::size_t i = 0; i < n; ++i) {
    if (classification.classes[i].verdict == Radius::SubOne) {
      throw DomainError("RADIUS_SUB_ONE: explicit form unavailable (class " + system.decl(i).name + ")");
    }
    if (is_reserved_name(system.decl(i).name)) {
      throw DomainError("class name '" + system.decl(i).name + "' collides with an expression keyword");
    }
  }
  const auto productive = productive_classes(system);
  ExplicitForms out;
  out.bodies.resize(n);
  out.order.resize(n);
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::size_t a, std::size_t b) { return g.rank[a] < g.rank[b]; });

  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      out.bodies[i] = GExpr::x();
      continue;
    }
    if (!productive[i]) {
      out.bodies[i] = GExpr::constant(0);
      continue;
    }
    const auto& prods = system.decl(i).productions;
    const std::size_t comp = g.component_of[i];
    std::optional<GExpr> total;
    if (!g.nontrivial[comp]) {
      // Direct equation: x * sum over productions.
      std::optional<GExpr> sum;
      for (const auto& gamma : prods) {
        if (is_live(gamma, productive)) sum = plus(std::move(sum), production_product(system, gamma, productive));
      }
      total = GExpr::mul(GExpr::x(), std::move(*sum));
    } else {
      const CycleModuleInfo* cycle = classification.cycle_for_component(comp);
      if (cycle == nullptr) throw DomainError("no cycle modules for class " + system.decl(i).name);
      const std::size_t pump = cycle->pump_size();
      for (std::size_t k : cycle->cycle) {
        const auto& escapes = cycle->escapes.at(k);
        if (escapes.empty()) continue;
        std::optional<GExpr> esc;
        for (std::size_t p : escapes) esc = plus(std::move(esc), production_product(system, system.decl(k).productions[p], productive));
        const std::size_t connector = cycle->connector_size(i, k);
        GExpr prefix = GExpr::geometric(pump);
        if (connector > 0) prefix = GExpr::mul(power_of_x(connector), std::move(prefix));
        total = plus(std::move(total), GExpr::mul(std::move(prefix), std::move(*esc)));
      }
      if (!total) total = GExpr::constant(0);
    }
    out.bodies[i] = std::move(*total);
  }
  return out;
}

namespace {

GExpr wrap(const ComptonSystem& system, const ExplicitForms& forms, GExpr body) {
  // Bindings needed by the body, closed under dependencies.
  std::set<std::string> needed;
  collect_vars(body, needed);
  for (auto it = forms.order.rbegin(); it != forms.order.rend(); ++it) {
    if (needed.count(system.decl(*it).name)) collect_vars(forms.bodies[*it], needed);
  }
  for (auto it = forms.order.rbegin(); it != forms.order.rend(); ++it) {
    const auto& name = system.decl(*it).name;
    if (needed.count(name)) body = GExpr::let(name, forms.bodies[*it], std::move(body));
  }
  return body;
}

}  // namespace

GExpr ExplicitForms::for_class(const ComptonSystem& system, std::size_t cls) const {
  return wrap(system, *this, GExpr::var(system.decl(cls).name));
}

GExpr ExplicitForms::for_expression(const ComptonSystem& system, const ClassExpr& expr) const {
  return wrap(system, *this, class_expr_to_gexpr(system, expr));
}

}  // namespace forestlab
