#pragma once

// Multiset construction operators on integer-coefficient series.
//
// For a class with counting series P(x) (P(0) = 0):
//   polya_exp(P)          1 + A(x) = prod_n (1 - x^n)^{-p(n)}, multisets of any size
//   polya_exp_m(P, m)     multisets with exactly m components
//   polya_exp_geq(P, m)   multisets with at least m components
// plus the star and hat transforms used by the ratio-test machinery.

#include <cstddef>
#include <string>
#include <vector>

#include "forestlab/series.hpp"

namespace forestlab {

class MultiplicityBound {
 public:
  enum class Kind { Exactly, AtLeast };

  static constexpr MultiplicityBound exactly(unsigned m) { return {Kind::Exactly, m}; }
  static constexpr MultiplicityBound at_least(unsigned m) { return {Kind::AtLeast, m}; }

  constexpr Kind kind() const noexcept { return kind_; }
  constexpr unsigned m() const noexcept { return m_; }
  constexpr bool is_exactly() const noexcept { return kind_ == Kind::Exactly; }
  constexpr bool is_at_least() const noexcept { return kind_ == Kind::AtLeast; }
  // Exactly(0): the slot contributes nothing.
  constexpr bool is_zero() const noexcept { return kind_ == Kind::Exactly && m_ == 0; }

  // `k` or `>=k`
  std::string to_string() const;

  friend constexpr bool operator==(MultiplicityBound, MultiplicityBound) = default;

 private:
  constexpr MultiplicityBound(Kind kind, unsigned m) : kind_(kind), m_(m) {}
  Kind kind_;
  unsigned m_;
};

TruncatedSeries star_transform(const TruncatedSeries& p);

TruncatedSeries polya_exp(const TruncatedSeries& p);
TruncatedSeries polya_exp_m(const TruncatedSeries& p, unsigned m);
TruncatedSeries polya_exp_geq(const TruncatedSeries& p, unsigned m);
TruncatedSeries polya_exp_bound(const TruncatedSeries& p, MultiplicityBound bound);

// E_0(p), ..., E_max_m(p) from one recurrence table.
std::vector<TruncatedSeries> polya_exp_table(const TruncatedSeries& p, unsigned max_m);

// (x/(1-x)) * d/dx star(q); q-hat(n) = sum_{m<=n} floor(n/m) m q(m).
TruncatedSeries hat_transform(const TruncatedSeries& q);

// prod_n (1 - x^n)^{-p(n)} expanded factor by factor.
TruncatedSeries partition_product(const TruncatedSeries& p);

namespace detail {

// Integer kernels shared with the incremental evaluator.
// Divisor sums c(k) = sum_{d|k} d p(d) for k = 0..p.size()-1.
std::vector<Integer> divisor_weight_sums(const std::vector<Integer>& p);

// Validates polya inputs: p(0) = 0, integral and nonnegative. Returns the integers.
std::vector<Integer> checked_counts(const TruncatedSeries& p, const char* op);

}  // namespace detail

}  // namespace forestlab
