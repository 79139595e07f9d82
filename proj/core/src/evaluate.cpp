#include "forestlab/evaluate.hpp"

#include <map>
#include <memory>
#include <optional>

#include "forestlab/error.hpp"

namespace forestlab {

namespace {

void check_order(std::size_t order, const EvalLimits& limits) {
  if (order > limits.max_order) {
    throw BoundError("order " + std::to_string(order) + " exceeds the configured maximum " +
                     std::to_string(limits.max_order));
  }
}

void divide_exact(Integer& value, unsigned long divisor, std::size_t degree) {
  if (mpz_divisible_ui_p(value.get_mpz_t(), divisor) == 0) {
    throw DomainError("non-integral multiset count at degree " + std::to_string(degree));
  }
  mpz_divexact_ui(value.get_mpz_t(), value.get_mpz_t(), divisor);
}

// Multiset series of one growing class series, extended one degree at a time.
// Degree n of every tracked operator needs the source only through degree n.
class MultisetTracker {
 public:
  MultisetTracker(const std::vector<Integer>& source, std::size_t order) : src_(source), order_(order) {}

  void require_exactly(unsigned m) {
    while (exact_.size() <= m) exact_.emplace_back(order_ + 1);
    if (exact_[0][0] == 0) exact_[0][0] = 1;
  }
  void require_full() {
    if (!full_) {
      full_.emplace(order_ + 1);
      (*full_)[0] = 1;
      weights_.assign(order_ + 1, 0);
    }
  }

  // Extends every tracked series to degree n; the source must be known through n.
  void extend(std::size_t n) {
    if (n == 0) return;
    for (std::size_t m = 1; m < exact_.size(); ++m) {
      // m E_m(n) = sum_{k=1}^{m} sum_{i>=1} a(i) E_{m-k}(n - k i)
      Integer acc;
      for (std::size_t k = 1; k <= m; ++k) {
        const auto& prev = exact_[m - k];
        for (std::size_t i = 1; i * k <= n; ++i) {
          if (src_[i] != 0 && prev[n - i * k] != 0) {
            mpz_addmul(acc.get_mpz_t(), src_[i].get_mpz_t(), prev[n - i * k].get_mpz_t());
          }
        }
      }
      divide_exact(acc, m, n);
      exact_[m][n] = std::move(acc);
    }
    if (full_) {
      // weights(k) = sum_{d|k} d a(d); a(n) contributes to weights at multiples of n.
      if (src_[n] != 0) {
        Integer w = src_[n] * static_cast<unsigned long>(n);
        for (std::size_t k = n; k <= order_; k += n) weights_[k] += w;
      }
      auto& f = *full_;
      Integer acc;
      for (std::size_t k = 1; k <= n; ++k) {
        if (weights_[k] != 0 && f[n - k] != 0) mpz_addmul(acc.get_mpz_t(), weights_[k].get_mpz_t(), f[n - k].get_mpz_t());
      }
      divide_exact(acc, n, n);
      f[n] = std::move(acc);
    }
  }

  Integer value(MultiplicityBound bound, std::size_t n) const {
    if (bound.is_exactly()) return exact_[bound.m()][n];
    Integer v = (*full_)[n];
    for (unsigned j = 0; j < bound.m(); ++j) v -= exact_[j][n];
    return v;
  }

 private:
  const std::vector<Integer>& src_;
  std::size_t order_;
  std::vector<std::vector<Integer>> exact_;
  std::optional<std::vector<Integer>> full_;
  std::vector<Integer> weights_;
};

struct Factor {
  std::size_t cls;
  MultiplicityBound bound;
  std::vector<Integer> values;  // factor series, filled degree by degree
};

struct ProductPlan {
  std::vector<Factor> factors;
  // prefix[r] holds factors[0] * ... * factors[r]
  std::vector<std::vector<Integer>> prefix;
};

}  // namespace

SystemSeries evaluate_system(const ComptonSystem& system, std::size_t order, const EvalLimits& limits) {
  check_order(order, limits);
  const std::size_t classes = system.class_count();
  std::vector<std::vector<Integer>> counts(classes, std::vector<Integer>(order + 1));

  std::vector<std::unique_ptr<MultisetTracker>> trackers(classes);
  auto tracker = [&](std::size_t j) -> MultisetTracker& {
    if (!trackers[j]) trackers[j] = std::make_unique<MultisetTracker>(counts[j], order);
    return *trackers[j];
  };

  std::vector<std::vector<ProductPlan>> plans(classes);
  for (std::size_t i = 1; i < classes; ++i) {
    for (const auto& gamma : system.decl(i).productions) {
      ProductPlan plan;
      for (std::size_t j = 0; j < classes; ++j) {
        const MultiplicityBound b = gamma[j];
        if (b.is_zero()) continue;
        if (b == MultiplicityBound::exactly(1)) {
          // identity factor, read straight from the class counts
        } else if (b.is_exactly()) {
          tracker(j).require_exactly(b.m());
        } else {
          tracker(j).require_exactly(b.m() == 0 ? 0 : b.m() - 1);
          tracker(j).require_full();
        }
        plan.factors.push_back({j, b, std::vector<Integer>(order + 1)});
      }
      plan.prefix.assign(plan.factors.size(), std::vector<Integer>(order + 1));
      plans[i].push_back(std::move(plan));
    }
  }

  if (order >= 1) counts[0][1] = 1;
  for (std::size_t n = 1; n <= order; ++n) {
    // Degree n-1 of every factor depends on class coefficients through n-1 only.
    const std::size_t d = n - 1;
    for (auto& t : trackers) {
      if (t) t->extend(d);
    }
    for (std::size_t i = 1; i < classes; ++i) {
      Integer total;
      for (auto& plan : plans[i]) {
        if (plan.factors.empty()) {
          if (d == 0) total += 1;
          continue;
        }
        for (std::size_t r = 0; r < plan.factors.size(); ++r) {
          auto& f = plan.factors[r];
          if (f.bound == MultiplicityBound::exactly(1)) {
            f.values[d] = counts[f.cls][d];
          } else {
            f.values[d] = trackers[f.cls]->value(f.bound, d);
          }
          if (r == 0) {
            plan.prefix[0][d] = f.values[d];
            continue;
          }
          Integer acc;
          const auto& prev = plan.prefix[r - 1];
          for (std::size_t k = 0; k <= d; ++k) {
            if (prev[k] != 0 && f.values[d - k] != 0) {
              mpz_addmul(acc.get_mpz_t(), prev[k].get_mpz_t(), f.values[d - k].get_mpz_t());
            }
          }
          plan.prefix[r][d] = std::move(acc);
        }
        total += plan.prefix.back()[d];
      }
      if (sgn(total) < 0) throw DomainError("negative class count for " + system.decl(i).name);
      counts[i][n] = std::move(total);
    }
  }

  SystemSeries out;
  out.order = order;
  for (const auto& c : counts) out.classes.push_back(TruncatedSeries::from_integers(c));
  return out;
}

TruncatedSeries evaluate_class_expr(const ComptonSystem& system, const SystemSeries& series, const ClassExpr& expr) {
  const std::size_t order = series.order;
  switch (expr.kind) {
    case ClassExpr::Kind::NodeClass: return TruncatedSeries::monomial(1, order);
    case ClassExpr::Kind::Ref: {
      if (auto i = system.find_class(expr.name)) return series.at(*i);
      if (const Definition* d = system.find_definition(expr.name)) return evaluate_class_expr(system, series, d->expr);
      throw ParseError(ParseError::Kind::UnknownClass, 0, 0, expr.name);
    }
    case ClassExpr::Kind::Union: {
      TruncatedSeries acc(order);
      for (const auto& o : expr.operands) acc = add(acc, evaluate_class_expr(system, series, o));
      return acc;
    }
    case ClassExpr::Kind::Sum: {
      TruncatedSeries acc = TruncatedSeries::one(order);
      for (const auto& o : expr.operands) acc = cauchy_mul(acc, evaluate_class_expr(system, series, o));
      return acc;
    }
    case ClassExpr::Kind::Multiset:
      return polya_exp_bound(evaluate_class_expr(system, series, expr.operands.front()), expr.bound);
    case ClassExpr::Kind::RootAppend:
      return cauchy_mul(TruncatedSeries::monomial(1, order),
                        evaluate_class_expr(system, series, expr.operands.front()));
  }
  throw DomainError("unhandled class expression");
}

namespace {

TruncatedSeries eval_g(const GExpr& e, std::size_t order, std::map<std::string, TruncatedSeries>& env) {
  switch (e.kind) {
    case GExpr::Kind::X: return TruncatedSeries::monomial(1, order);
    case GExpr::Kind::Geometric: return geometric(1, e.m, order);
    case GExpr::Kind::Const: return TruncatedSeries::monomial(0, order, Coefficient(e.m));
    case GExpr::Kind::Var: {
      auto it = env.find(e.name);
      if (it == env.end()) throw DomainError("unbound variable '" + e.name + "'");
      return it->second;
    }
    case GExpr::Kind::Add: return add(eval_g(e.operands[0], order, env), eval_g(e.operands[1], order, env));
    case GExpr::Kind::Mul: return cauchy_mul(eval_g(e.operands[0], order, env), eval_g(e.operands[1], order, env));
    case GExpr::Kind::Multiset: return polya_exp_bound(eval_g(e.operands[0], order, env), e.bound);
    case GExpr::Kind::Let: {
      TruncatedSeries value = eval_g(e.operands[0], order, env);
      std::optional<TruncatedSeries> shadowed;
      if (auto it = env.find(e.name); it != env.end()) shadowed = it->second;
      env.insert_or_assign(e.name, std::move(value));
      TruncatedSeries body = eval_g(e.operands[1], order, env);
      if (shadowed) {
        env.insert_or_assign(e.name, std::move(*shadowed));
      } else {
        env.erase(e.name);
      }
      return body;
    }
  }
  throw DomainError("unhandled expression");
}

}  // namespace

TruncatedSeries evaluate_gexpr(const GExpr& expr, std::size_t order, const EvalLimits& limits) {
  check_order(order, limits);
  std::map<std::string, TruncatedSeries> env;
  return eval_g(expr, order, env);
}

}  // namespace forestlab
