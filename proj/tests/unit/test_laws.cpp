#include <algorithm>
#include <cmath>

#include "corpus.hpp"
#include "doctest.h"
#include "forestlab/error.hpp"
#include "forestlab/evaluate.hpp"
#include "forestlab/laws.hpp"
#include "forestlab/polya.hpp"
#include "oracles.hpp"

using namespace forestlab;

namespace {

TruncatedSeries ints(std::initializer_list<long> v, std::size_t order) { return TruncatedSeries::from_list(v, order); }

// Partition series with the constant term dropped.
TruncatedSeries nonempty_partitions(std::size_t n) {
  auto p = oracle::pentagonal_partitions(n);
  p[0] = 0;
  return TruncatedSeries::from_integers(p);
}

}  // namespace

TEST_CASE("detect_period") {
  CHECK(detect_period(nonempty_partitions(50)).period == 1);
  const auto two = detect_period(geometric(2, 2, 40));
  CHECK(two.period == 2);
  CHECK(two.onset == 2u);
  CHECK(detect_period(ints({0, 0, 0, 1, 0, 0, 1}, 6)).period == 3);
  CHECK_THROWS_AS(detect_period(TruncatedSeries::zero(10)), DomainError);
  CHECK_THROWS_AS(detect_period(TruncatedSeries::one(10)), DomainError);
}

TEST_CASE("window parsing") {
  const auto w = DegreeWindow::parse("1000..5000");
  CHECK(w.begin == 1000);
  CHECK(w.end == 5000);
  CHECK_THROWS_AS(DegreeWindow::parse("10-20"), DomainError);
  CHECK_THROWS_AS(DegreeWindow::parse("20..10"), DomainError);
}

TEST_CASE("ratio_test on partitions") {
  const auto p = nonempty_partitions(5000);
  const auto r = ratio_test(p, {1000, 5000});
  CHECK(r.verdict == RatioVerdict::ConvergesToOne);
  CHECK(r.trend.last >= 0.97);
  CHECK(r.trend.last < 1.0);
  CHECK(r.trend.gap_strictly_decreasing);
  for (const auto& s : r.ratios) CHECK(s.ratio < 1);
  const auto small = ratio_test(p, {40, 50});
  CHECK(small.ratios.back().ratio == Coefficient(Integer(173525)) / Integer(204226));
  CHECK(small.verdict == RatioVerdict::Inconclusive);
  // gap tracks pi/sqrt(6n)
  CHECK(r.trend.last_gap == doctest::Approx(M_PI / std::sqrt(6.0 * 5000)).epsilon(0.05));
  CHECK_THROWS_AS(ratio_test(p, {4000, 6000}), DomainError);
  CHECK_THROWS_AS(ratio_test(ints({0, 1, 1}, 10), {0, 10}), DomainError);
}

TEST_CASE("ratio_test on all-tree forests diverges") {
  const auto s = corpus::load("alltrees.fst");
  const auto series = evaluate_system(s, 200);
  const auto t = evaluate_class_expr(s, series, s.expression_for("All"));
  const auto r = ratio_test(polya_exp_geq(t, 1), {100, 200});
  CHECK(r.verdict == RatioVerdict::Diverges);
  CHECK(r.trend.last == doctest::Approx(1.0 / 2.9557652856519949747).epsilon(0.02));
}

TEST_CASE("closure of converging series under sum and product") {
  const auto p = nonempty_partitions(3000);
  const auto q = geometric(1, 1, 3000) * p;
  const DegreeWindow w{1500, 3000};
  REQUIRE(ratio_test(p, w).verdict == RatioVerdict::ConvergesToOne);
  REQUIRE(ratio_test(q, w).verdict == RatioVerdict::ConvergesToOne);
  CHECK(ratio_test(p + q, w).verdict == RatioVerdict::ConvergesToOne);
  CHECK(ratio_test(p * q, w).verdict == RatioVerdict::ConvergesToOne);
  CHECK(ratio_test(p * p, w).verdict == RatioVerdict::ConvergesToOne);
}

TEST_CASE("density") {
  const auto p = nonempty_partitions(60);
  for (const auto& s : density(p, p, 1)) CHECK(s.ratio == 1);
  for (const auto& s : density(TruncatedSeries::zero(60), p, 1)) CHECK(s.ratio == 0);
  // partitions with a part of size one: b(n) = p(n-1)
  const auto all = oracle::partitions_series(60);
  std::vector<Integer> b(61);
  for (std::size_t n = 1; n <= 60; ++n) b[n] = all[n - 1].get_num();
  const auto ds = density(TruncatedSeries::from_integers(b), p, 1);
  REQUIRE(ds.size() == 60);
  for (std::size_t k = 1; k < ds.size(); ++k) {
    CHECK(ds[k].ratio == all[ds[k].degree - 1] / all[ds[k].degree]);
    if (ds[k].degree > 26) CHECK(ds[k - 1].ratio < ds[k].ratio);
  }
  const auto odd = density(ints({0, 1, 0, 1}, 3), ints({0, 1, 0, 2}, 3), 1);
  CHECK(odd.size() == 2);
  CHECK_THROWS_AS(density(p, p, 0), DomainError);
}

TEST_CASE("schur_ratio") {
  const auto c = oracle::partitions_series(600);
  for (const auto& s : schur_ratio(c, c, {1, 600})) CHECK(s.ratio == 1);
  const auto a = ints({1, 1}, 600) * c;
  const auto sa = schur_ratio(a, c, {400, 600});
  CHECK(sa.back().value == doctest::Approx(2.0).epsilon(0.05));
  // a = p / (1 - x/2): compare with the integer convolution 2^n a(n) = sum_k 2^(n-k) p(n-k).
  const std::size_t n = 1000;
  const auto pc = oracle::pentagonal_partitions(n);
  std::vector<Coefficient> b(n + 1);
  for (std::size_t k = 0; k <= n; ++k) b[k] = Coefficient(1) / Integer(Integer(1) << k);
  const auto weighted = TruncatedSeries(b) * oracle::partitions_series(n);
  for (std::size_t m : {500, 1000}) {
    Integer scaled = 0;
    for (std::size_t k = 0; k <= m; ++k) scaled += (Integer(1) << (m - k)) * pc[m - k];
    const auto r = schur_ratio(weighted, oracle::partitions_series(n), {m, m});
    CHECK(r.front().ratio == Coefficient(scaled) / Integer((Integer(1) << m) * pc[m]));
  }
  const auto r500 = schur_ratio(weighted, oracle::partitions_series(n), {500, 500}).front().value;
  const auto r1000 = schur_ratio(weighted, oracle::partitions_series(n), {1000, 1000}).front().value;
  CHECK(r500 < r1000);
  CHECK(r1000 < 2.0);
  CHECK(std::abs(r1000 - 2.0) <= 0.05 * 2.0);
  CHECK_THROWS_AS(schur_ratio(a, TruncatedSeries::zero(600), {1, 5}), DomainError);
}

TEST_CASE("check_main_theorem on the corpus") {
  struct Run {
    const char* file;
    std::size_t order;
  };
  for (auto [file, order] : {Run{"lin.fst", 3000}, Run{"height1.fst", 3000}, Run{"evenchains.fst", 4000},
                             Run{"bamboo.fst", 6000}, Run{"alltrees.fst", 200}, Run{"binary.fst", 200}}) {
    const auto s = corpus::load(file);
    const auto& entry = *std::find_if(corpus::entries().begin(), corpus::entries().end(),
                                      [&](const corpus::Entry& e) { return e.file == file; });
    const auto tree = s.expression_for(entry.query);
    const auto rep = check_main_theorem(s, tree, order);
    CHECK_MESSAGE(rep.coherence == Coherence::Agree, file, " ", rep.note);
    CHECK(rep.structural == entry.verdict);
    // Period of trees and forests coincide.
    const auto series = evaluate_system(s, 300);
    const auto t = evaluate_class_expr(s, series, tree);
    CHECK(detect_period(t).period == detect_period(polya_exp_geq(t, 1)).period);
  }
  const auto ev = corpus::load("evenchains.fst");
  const auto rep = check_main_theorem(ev, ev.expression_for("Even"), 4000);
  REQUIRE(rep.period.has_value());
  CHECK(rep.period->period == 2);
}

TEST_CASE("check_main_theorem reports instead of throwing") {
  const auto lin = corpus::load("lin.fst");
  const auto forest = ClassExpr::multiset(MultiplicityBound::at_least(1), lin.expression_for("Lin"));
  const auto r1 = check_main_theorem(lin, forest, 100);
  CHECK(r1.coherence == Coherence::Conflict);
  CHECK_FALSE(r1.note.empty());
  const auto empty = parse_system("class T0 = node\nclass E = node / [E:1]\n");
  const auto r2 = check_main_theorem(empty, ClassExpr::ref("E"), 100);
  CHECK(r2.note == "tree class is empty");
  const auto r3 = check_main_theorem(lin, lin.expression_for("Lin"), 100);
  CHECK(r3.coherence == Coherence::Conflict);
  CHECK(r3.ratio->verdict == RatioVerdict::Inconclusive);
}
