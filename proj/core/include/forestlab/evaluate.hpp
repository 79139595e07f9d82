#pragma once

#include <cstddef>
#include <vector>

#include "forestlab/gexpr.hpp"
#include "forestlab/series.hpp"
#include "forestlab/system.hpp"

namespace forestlab {

struct EvalLimits {
  std::size_t max_order = 10000;
};

// Per-class counting series of a system, indexed like ComptonSystem::classes().
struct SystemSeries {
  std::size_t order = 0;
  std::vector<TruncatedSeries> classes;

  const TruncatedSeries& at(std::size_t i) const { return classes.at(i); }
};

// Degree-synchronous evaluation of T_i(x) = x * sum_gamma prod_j E_{gamma_j}(T_j(x)).
// All classes' degree-n coefficients are produced from degrees < n, so the result is
// prefix stable in `order`. Throws BoundError when order > limits.max_order.
SystemSeries evaluate_system(const ComptonSystem& system, std::size_t order, const EvalLimits& limits = {});

// Series of a class expression over already-evaluated class series.
TruncatedSeries evaluate_class_expr(const ComptonSystem& system, const SystemSeries& series, const ClassExpr& expr);

// Structural evaluation of a closed-form expression. Free variables are an error.
TruncatedSeries evaluate_gexpr(const GExpr& expr, std::size_t order, const EvalLimits& limits = {});

}  // namespace forestlab
