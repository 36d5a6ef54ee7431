// Serial reference against the OpenMP kernels: the brute-force oracle and the
// exact ordering search.

#include <benchmark/benchmark.h>

#include <random>

#include "faq/frontend.hpp"
#include "faq/optimizer.hpp"
#include "faq/oracle.hpp"
#include "support.hpp"

using namespace faq;

namespace {

// A dense-ish sum-product instance with n variables over domain d.
FAQInstance oracle_instance(int n, int d) {
  std::mt19937_64 rng(1);
  std::string text = "context nat-sum-prod;\nfree v0;\n";
  for (int v = 1; v < n; ++v) text += "sum v" + std::to_string(v) + ";\n";
  std::vector<TextTable> tables;
  for (int v = 0; v + 1 < n; ++v) {
    text += "factor F" + std::to_string(v) + "(v" + std::to_string(v) + ", v" + std::to_string(v + 1) + ");\n";
    TextTable t;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        if (rng() % 2) t.push_back({{std::to_string(a), std::to_string(b)}, std::to_string(1 + rng() % 5)});
    tables.push_back(std::move(t));
  }
  return build_instance(parse_query(text), tables);
}

// Mixed aggregates over a cycle with chords: many linear extensions.
FAQQuery search_query(int n) {
  std::string text = "context nat-sum-prod;\n";
  for (int v = 0; v < n; ++v) text += "sum v" + std::to_string(v) + ";\n";
  for (int v = 0; v < n; ++v)
    text += "factor C" + std::to_string(v) + "(v" + std::to_string(v) + ", v" + std::to_string((v + 1) % n) + ");\n";
  text += "factor K(v0, v" + std::to_string(n / 2) + ");\n";
  return parse_query(text);
}

void BM_Oracle(benchmark::State& state) {
  const auto inst = oracle_instance(static_cast<int>(state.range(0)), 6);
  OracleOptions o;
  o.parallel = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_eval(inst, o));
  state.SetLabel(o.parallel ? "parallel" : "serial");
}
BENCHMARK(BM_Oracle)->ArgsProduct({{6, 7}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_ExactSearch(benchmark::State& state) {
  const auto q = search_query(static_cast<int>(state.range(0)));
  const auto cands = enumerate_orderings(q, build_precedence_poset(q), 5040);
  OptimizerOptions o;
  o.mode = OptimizerMode::exact;
  o.parallel = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(best_of(q, cands, o));
  state.SetLabel(o.parallel ? "parallel" : "serial");
  state.counters["orderings"] = static_cast<double>(cands.size());
}
BENCHMARK(BM_ExactSearch)->ArgsProduct({{6, 7}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
