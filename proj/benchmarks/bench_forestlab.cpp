#include <fstream>
#include <sstream>
#include <string>

#include <benchmark/benchmark.h>

#include "forestlab/evaluate.hpp"
#include "forestlab/laws.hpp"
#include "forestlab/polya.hpp"
#include "forestlab/system.hpp"

using namespace forestlab;

namespace {

TruncatedSeries all_ones(std::size_t order) {
  std::vector<Integer> v(order + 1, Integer(1));
  v[0] = 0;
  return TruncatedSeries::from_integers(v);
}


ComptonSystem load(const char* file) {
  std::ifstream in(std::string(FORESTLAB_CORPUS_DIR) + "/" + file);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

void BM_PolyaExp(benchmark::State& state) {
  const auto p = all_ones(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(polya_exp(p));
}
BENCHMARK(BM_PolyaExp)->Arg(500)->Arg(2000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_PartitionProduct(benchmark::State& state) {
  const auto p = all_ones(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(partition_product(p));
}
BENCHMARK(BM_PartitionProduct)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

// Rooted-tree counts: large exponents take the binomial branch of the product form.
TruncatedSeries rooted_trees(std::size_t order) {
  const auto s = load("alltrees.fst");
  const auto series = evaluate_system(s, order);
  return evaluate_class_expr(s, series, s.expression_for("All"));
}

void BM_PolyaExpTrees(benchmark::State& state) {
  const auto t = rooted_trees(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(polya_exp(t));
}
BENCHMARK(BM_PolyaExpTrees)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_PartitionProductTrees(benchmark::State& state) {
  const auto t = rooted_trees(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(partition_product(t));
}
BENCHMARK(BM_PartitionProductTrees)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ExpStar(benchmark::State& state) {
  const auto p = all_ones(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exp_truncated(star_transform(p)));
}
BENCHMARK(BM_ExpStar)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_EvaluateSystem(benchmark::State& state, const char* file) {
  const auto s = load(file);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_system(s, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK_CAPTURE(BM_EvaluateSystem, alltrees, "alltrees.fst")->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EvaluateSystem, binary, "binary.fst")->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EvaluateSystem, bamboo, "bamboo.fst")->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_RatioTest(benchmark::State& state) {
  auto f = polya_exp(all_ones(5000)) - TruncatedSeries::one(5000);
  for (auto _ : state) benchmark::DoNotOptimize(ratio_test(f, {1000, 5000}));
}
BENCHMARK(BM_RatioTest)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
