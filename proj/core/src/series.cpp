#include "forestlab/series.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "forestlab/error.hpp"

namespace forestlab {

TruncatedSeries::TruncatedSeries(std::size_t order) : coeffs_(order + 1) {}

TruncatedSeries::TruncatedSeries(std::vector<Coefficient> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("TruncatedSeries needs at least one coefficient");
  for (auto& c : coeffs_) c.canonicalize();
}

TruncatedSeries TruncatedSeries::from_integers(const std::vector<Integer>& coeffs) {
  std::vector<Coefficient> q(coeffs.begin(), coeffs.end());
  return TruncatedSeries(std::move(q));
}

TruncatedSeries TruncatedSeries::from_list(std::initializer_list<long> coeffs, std::size_t order) {
  TruncatedSeries s(order);
  std::size_t n = 0;
  for (long c : coeffs) {
    if (n > order) break;
    s.coeffs_[n++] = c;
  }
  return s;
}

TruncatedSeries TruncatedSeries::one(std::size_t order) { return monomial(0, order); }

TruncatedSeries TruncatedSeries::monomial(std::size_t k, std::size_t order, const Coefficient& c) {
  TruncatedSeries s(order);
  if (k <= order) s.coeffs_[k] = c;
  return s;
}

const Coefficient& TruncatedSeries::at(std::size_t n) const {
  if (n >= coeffs_.size()) {
    throw std::out_of_range("coefficient " + std::to_string(n) + " beyond truncation order " +
                            std::to_string(order()));
  }
  return coeffs_[n];
}

bool TruncatedSeries::is_integral() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const Coefficient& c) { return c.get_den() == 1; });
}

bool TruncatedSeries::is_nonnegative() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Coefficient& c) { return sgn(c) >= 0; });
}

bool TruncatedSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Coefficient& c) { return sgn(c) == 0; });
}

std::vector<Integer> TruncatedSeries::integers() const {
  std::vector<Integer> out;
  out.reserve(coeffs_.size());
  for (std::size_t n = 0; n < coeffs_.size(); ++n) {
    if (coeffs_[n].get_den() != 1) {
      throw DomainError("coefficient " + std::to_string(n) + " is not an integer: " + to_string(coeffs_[n]));
    }
    out.push_back(coeffs_[n].get_num());
  }
  return out;
}

std::size_t TruncatedSeries::valuation() const {
  for (std::size_t n = 0; n < coeffs_.size(); ++n) {
    if (sgn(coeffs_[n]) != 0) return n;
  }
  return coeffs_.size();
}

TruncatedSeries TruncatedSeries::truncate(std::size_t order) const {
  if (order >= this->order()) return *this;
  return TruncatedSeries(std::vector<Coefficient>(coeffs_.begin(), coeffs_.begin() + order + 1));
}

TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b) {
  const std::size_t order = std::min(a.order(), b.order());
  std::vector<Coefficient> c(order + 1);
  for (std::size_t n = 0; n <= order; ++n) c[n] = a[n] + b[n];
  return TruncatedSeries(std::move(c));
}

TruncatedSeries subtract(const TruncatedSeries& a, const TruncatedSeries& b) {
  const std::size_t order = std::min(a.order(), b.order());
  std::vector<Coefficient> c(order + 1);
  for (std::size_t n = 0; n <= order; ++n) c[n] = a[n] - b[n];
  return TruncatedSeries(std::move(c));
}

TruncatedSeries scale(const TruncatedSeries& a, const Coefficient& k) {
  std::vector<Coefficient> c(a.order() + 1);
  for (std::size_t n = 0; n <= a.order(); ++n) c[n] = a[n] * k;
  return TruncatedSeries(std::move(c));
}

TruncatedSeries cauchy_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  const std::size_t order = std::min(a.order(), b.order());
  // Integer fast path: the common case (class counts) avoids rational canonicalization.
  if (a.is_integral() && b.is_integral()) {
    std::vector<Integer> c(order + 1);
    const auto ai = a.truncate(order).integers();
    const auto bi = b.truncate(order).integers();
    for (std::size_t i = 0; i <= order; ++i) {
      if (ai[i] == 0) continue;
      for (std::size_t j = 0; i + j <= order; ++j) {
        if (bi[j] != 0) mpz_addmul(c[i + j].get_mpz_t(), ai[i].get_mpz_t(), bi[j].get_mpz_t());
      }
    }
    return TruncatedSeries::from_integers(c);
  }
  std::vector<Coefficient> c(order + 1);
  for (std::size_t i = 0; i <= order; ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; i + j <= order; ++j) c[i + j] += a[i] * b[j];
  }
  return TruncatedSeries(std::move(c));
}

TruncatedSeries substitute_power(const TruncatedSeries& a, std::size_t d) {
  if (d == 0) throw DomainError("substitute_power: exponent must be positive");
  std::vector<Coefficient> c(a.order() + 1);
  for (std::size_t n = 0; n * d <= a.order(); ++n) c[n * d] = a[n];
  return TruncatedSeries(std::move(c));
}

TruncatedSeries exp_truncated(const TruncatedSeries& a) {
  if (sgn(a[0]) != 0) throw DomainError("exp_truncated: constant term must be 0, got " + to_string(a[0]));
  const std::size_t order = a.order();
  std::vector<Coefficient> b(order + 1);
  b[0] = 1;
  // n b(n) = sum_{k=1}^{n} k a(k) b(n-k)
  for (std::size_t n = 1; n <= order; ++n) {
    Coefficient acc = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      if (sgn(a[k]) != 0) acc += Coefficient(static_cast<unsigned long>(k)) * a[k] * b[n - k];
    }
    b[n] = acc / Coefficient(static_cast<unsigned long>(n));
  }
  return TruncatedSeries(std::move(b));
}

TruncatedSeries log_truncated(const TruncatedSeries& b) {
  if (b[0] != 1) throw DomainError("log_truncated: constant term must be 1, got " + to_string(b[0]));
  const std::size_t order = b.order();
  std::vector<Coefficient> a(order + 1);
  // n a(n) = n b(n) - sum_{k=1}^{n-1} k a(k) b(n-k)
  for (std::size_t n = 1; n <= order; ++n) {
    Coefficient acc = Coefficient(static_cast<unsigned long>(n)) * b[n];
    for (std::size_t k = 1; k < n; ++k) {
      if (sgn(a[k]) != 0) acc -= Coefficient(static_cast<unsigned long>(k)) * a[k] * b[n - k];
    }
    a[n] = acc / Coefficient(static_cast<unsigned long>(n));
  }
  return TruncatedSeries(std::move(a));
}

TruncatedSeries derivative(const TruncatedSeries& a) {
  if (a.order() == 0) return TruncatedSeries(0);
  std::vector<Coefficient> c(a.order());
  for (std::size_t n = 1; n <= a.order(); ++n) c[n - 1] = a[n] * Coefficient(static_cast<unsigned long>(n));
  return TruncatedSeries(std::move(c));
}

TruncatedSeries geometric(std::size_t c, std::size_t m, std::size_t order) {
  if (m == 0) throw DomainError("geometric: period m must be at least 1");
  std::vector<Coefficient> coeffs(order + 1);
  for (std::size_t n = c; n <= order; n += m) coeffs[n] = 1;
  return TruncatedSeries(std::move(coeffs));
}

std::string to_string(const Coefficient& c) {
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

void write_csv(std::ostream& out, const TruncatedSeries& a, std::size_t first_degree) {
  out << "n,coefficient\n";
  for (std::size_t n = first_degree; n <= a.order(); ++n) out << n << ',' << to_string(a[n]) << '\n';
}

}  // namespace forestlab
