#include "forestlab/polya.hpp"

#include "forestlab/error.hpp"

namespace forestlab {

std::string MultiplicityBound::to_string() const {
  return (is_at_least() ? ">=" : "") + std::to_string(m_);
}

namespace detail {

std::vector<Integer> checked_counts(const TruncatedSeries& p, const char* op) {
  if (sgn(p[0]) != 0) throw DomainError(std::string(op) + ": constant term must be 0");
  if (!p.is_integral()) throw DomainError(std::string(op) + ": coefficients must be integers");
  if (!p.is_nonnegative()) throw DomainError(std::string(op) + ": coefficients must be nonnegative");
  return p.integers();
}

std::vector<Integer> divisor_weight_sums(const std::vector<Integer>& p) {
  const std::size_t order = p.size() - 1;
  std::vector<Integer> c(order + 1);
  for (std::size_t d = 1; d <= order; ++d) {
    if (p[d] == 0) continue;
    Integer w = p[d] * static_cast<unsigned long>(d);
    for (std::size_t k = d; k <= order; k += d) c[k] += w;
  }
  return c;
}

}  // namespace detail

TruncatedSeries star_transform(const TruncatedSeries& p) {
  if (sgn(p[0]) != 0) throw DomainError("star_transform: constant term must be 0");
  const std::size_t order = p.order();
  std::vector<Coefficient> s(order + 1);
  // n p*(n) = sum_{d|n} d p(d)
  for (std::size_t d = 1; d <= order; ++d) {
    if (sgn(p[d]) == 0) continue;
    Coefficient w = p[d] * Coefficient(static_cast<unsigned long>(d));
    for (std::size_t n = d; n <= order; n += d) s[n] += w;
  }
  for (std::size_t n = 1; n <= order; ++n) s[n] /= Coefficient(static_cast<unsigned long>(n));
  return TruncatedSeries(std::move(s));
}

TruncatedSeries polya_exp(const TruncatedSeries& p) {
  const auto counts = detail::checked_counts(p, "polya_exp");
  const std::size_t order = p.order();
  const auto c = detail::divisor_weight_sums(counts);
  std::vector<Integer> a(order + 1);
  a[0] = 1;
  Integer acc;
  for (std::size_t n = 1; n <= order; ++n) {
    acc = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      if (c[k] != 0 && a[n - k] != 0) mpz_addmul(acc.get_mpz_t(), c[k].get_mpz_t(), a[n - k].get_mpz_t());
    }
    if (mpz_divisible_ui_p(acc.get_mpz_t(), n) == 0) {
      throw DomainError("polya_exp: non-integral coefficient at degree " + std::to_string(n));
    }
    mpz_divexact_ui(a[n].get_mpz_t(), acc.get_mpz_t(), n);
  }
  return TruncatedSeries::from_integers(a);
}

std::vector<TruncatedSeries> polya_exp_table(const TruncatedSeries& p, unsigned max_m) {
  const auto counts = detail::checked_counts(p, "polya_exp_m");
  const std::size_t order = p.order();
  std::vector<std::vector<Integer>> table(max_m + 1, std::vector<Integer>(order + 1));
  table[0][0] = 1;
  // m E_m = sum_{k=1}^{m} P(x^k) E_{m-k}
  for (unsigned m = 1; m <= max_m; ++m) {
    auto& row = table[m];
    for (unsigned k = 1; k <= m; ++k) {
      const auto& prev = table[m - k];
      for (std::size_t i = 1; i * k <= order; ++i) {
        if (counts[i] == 0) continue;
        const std::size_t shift = i * k;
        for (std::size_t n = shift; n <= order; ++n) {
          if (prev[n - shift] != 0) mpz_addmul(row[n].get_mpz_t(), counts[i].get_mpz_t(), prev[n - shift].get_mpz_t());
        }
      }
    }
    for (std::size_t n = 0; n <= order; ++n) {
      if (mpz_divisible_ui_p(row[n].get_mpz_t(), m) == 0) {
        throw DomainError("polya_exp_m: non-integral coefficient at degree " + std::to_string(n));
      }
      mpz_divexact_ui(row[n].get_mpz_t(), row[n].get_mpz_t(), m);
    }
  }
  std::vector<TruncatedSeries> out;
  out.reserve(table.size());
  for (const auto& row : table) out.push_back(TruncatedSeries::from_integers(row));
  return out;
}

TruncatedSeries polya_exp_m(const TruncatedSeries& p, unsigned m) {
  return std::move(polya_exp_table(p, m).back());
}

TruncatedSeries polya_exp_geq(const TruncatedSeries& p, unsigned m) {
  TruncatedSeries all = polya_exp(p);
  if (m == 0) return all;
  // E_j has valuation >= j, so the subtraction is exact at every stored degree.
  for (const auto& ej : polya_exp_table(p, m - 1)) all = subtract(all, ej);
  return all;
}

TruncatedSeries polya_exp_bound(const TruncatedSeries& p, MultiplicityBound bound) {
  return bound.is_exactly() ? polya_exp_m(p, bound.m()) : polya_exp_geq(p, bound.m());
}

TruncatedSeries hat_transform(const TruncatedSeries& q) {
  if (sgn(q[0]) != 0) throw DomainError("hat_transform: constant term must be 0");
  if (!q.is_nonnegative()) throw DomainError("hat_transform: coefficients must be nonnegative");
  const std::size_t order = q.order();
  std::vector<Coefficient> weighted(order + 1);
  // n q*(n) = sum_{d|n} d q(d); q-hat is its running sum.
  for (std::size_t d = 1; d <= order; ++d) {
    if (sgn(q[d]) == 0) continue;
    Coefficient w = q[d] * Coefficient(static_cast<unsigned long>(d));
    for (std::size_t n = d; n <= order; n += d) weighted[n] += w;
  }
  for (std::size_t n = 1; n <= order; ++n) weighted[n] += weighted[n - 1];
  return TruncatedSeries(std::move(weighted));
}

TruncatedSeries partition_product(const TruncatedSeries& p) {
  const auto counts = detail::checked_counts(p, "partition_product");
  const std::size_t order = p.order();
  std::vector<Integer> a(order + 1);
  a[0] = 1;
  for (std::size_t n = 1; n <= order; ++n) {
    const Integer& e = counts[n];
    if (e == 0) continue;
    const std::size_t terms = order / n;
    if (e <= terms) {
      // e repeated multiplications by 1/(1 - x^n): stride prefix sums.
      const unsigned long reps = e.get_ui();
      for (unsigned long r = 0; r < reps; ++r) {
        for (std::size_t t = n; t <= order; ++t) a[t] += a[t - n];
      }
      continue;
    }
    // (1 - x^n)^{-e} = sum_k C(e+k-1, k) x^{nk}; update from the top down.
    std::vector<Integer> binom(terms + 1);
    binom[0] = 1;
    for (std::size_t k = 1; k <= terms; ++k) {
      binom[k] = binom[k - 1] * (e + static_cast<unsigned long>(k - 1));
      mpz_divexact_ui(binom[k].get_mpz_t(), binom[k].get_mpz_t(), k);
    }
    for (std::size_t t = order; t >= n; --t) {
      for (std::size_t k = 1; k * n <= t; ++k) {
        if (a[t - k * n] != 0) mpz_addmul(a[t].get_mpz_t(), binom[k].get_mpz_t(), a[t - k * n].get_mpz_t());
      }
    }
  }
  return TruncatedSeries::from_integers(a);
}

}  // namespace forestlab
