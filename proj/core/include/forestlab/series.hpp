#pragma once

// Exact truncated power series over the rationals.
//
// A TruncatedSeries stores coefficients 0..order inclusive. Binary operations
// truncate to the smaller operand order so no coefficient is ever produced
// from data that was not stored.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace forestlab {

using Coefficient = mpq_class;
using Integer = mpz_class;

class TruncatedSeries {
 public:
  // Zero series of the given order.
  explicit TruncatedSeries(std::size_t order = 0);
  // Takes ownership of the coefficient vector; must be nonempty.
  explicit TruncatedSeries(std::vector<Coefficient> coeffs);

  static TruncatedSeries from_integers(const std::vector<Integer>& coeffs);
  // Integer literal helper: coefficients 0..k, padded with zeros up to `order`.
  static TruncatedSeries from_list(std::initializer_list<long> coeffs, std::size_t order);

  static TruncatedSeries zero(std::size_t order) { return TruncatedSeries(order); }
  static TruncatedSeries one(std::size_t order);
  // x^k truncated (zero if k > order).
  static TruncatedSeries monomial(std::size_t k, std::size_t order, const Coefficient& c = 1);

  std::size_t order() const noexcept { return coeffs_.size() - 1; }
  std::span<const Coefficient> coeffs() const noexcept { return coeffs_; }

  // Bounds-checked coefficient access; throws std::out_of_range past order().
  const Coefficient& at(std::size_t n) const;
  const Coefficient& operator[](std::size_t n) const { return coeffs_[n]; }

  bool is_integral() const;
  bool is_nonnegative() const;
  bool is_zero() const;
  // Integer coefficients; throws DomainError if any coefficient is not integral.
  std::vector<Integer> integers() const;

  // Lowest degree with a nonzero coefficient, or order()+1 for the zero series.
  std::size_t valuation() const;

  TruncatedSeries truncate(std::size_t order) const;

  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

 private:
  std::vector<Coefficient> coeffs_;
};

TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries subtract(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries scale(const TruncatedSeries& a, const Coefficient& c);
TruncatedSeries cauchy_mul(const TruncatedSeries& a, const TruncatedSeries& b);

// A(x^d), same order as A.
TruncatedSeries substitute_power(const TruncatedSeries& a, std::size_t d);

// exp(A) for a(0) = 0 and log(A) for a(0) = 1, via the recurrence from B' = A'B.
TruncatedSeries exp_truncated(const TruncatedSeries& a);
TruncatedSeries log_truncated(const TruncatedSeries& a);

// Coefficient n-1 of the result is n*a(n); the order drops by one (floor 0).
TruncatedSeries derivative(const TruncatedSeries& a);

// x^c / (1 - x^m) to the given order.
TruncatedSeries geometric(std::size_t c, std::size_t m, std::size_t order);

inline TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) { return add(a, b); }
inline TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return subtract(a, b); }
inline TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) { return cauchy_mul(a, b); }

// `p/q`, or `p` when the denominator is 1.
std::string to_string(const Coefficient& c);

// CSV dump with header `n,coefficient`, rows first_degree..order.
void write_csv(std::ostream& out, const TruncatedSeries& a, std::size_t first_degree = 0);

}  // namespace forestlab
