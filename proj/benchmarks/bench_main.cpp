#include <benchmark/benchmark.h>

#include "qsocount/approx.hpp"
#include "qsocount/counting.hpp"
#include "qsocount/eval.hpp"
#include "qsocount/generators.hpp"
#include "qsocount/normalize.hpp"
#include "qsocount/reductions.hpp"
#include "qsocount/syntax.hpp"

using namespace qsocount;

namespace {

std::vector<Disj2SatFormula> corpus(std::uint32_t vars, std::size_t size) {
  Rng rng(derive_seed(kDefaultSeed, vars));
  std::vector<Disj2SatFormula> out;
  while (out.size() < size) {
    auto f = gen::d2s(rng, vars, 4, 3 * vars);
    if (f.num_vars == vars) out.push_back(std::move(f));
  }
  return out;
}

void BM_CountBrute(benchmark::State& state) {
  auto fs = corpus(static_cast<std::uint32_t>(state.range(0)), 16);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(count_bruteforce(fs[i++ % fs.size()]).count);
}
BENCHMARK(BM_CountBrute)->DenseRange(8, 20, 4);

void BM_CountSelfReduce(benchmark::State& state) {
  auto fs = corpus(static_cast<std::uint32_t>(state.range(0)), 16);
  std::size_t i = 0;
  std::uint64_t nodes = 0;
  for (auto _ : state) {
    auto r = count_selfreduce(fs[i++ % fs.size()]);
    nodes += r.nodes_explored;
    benchmark::DoNotOptimize(r.count);
  }
  state.counters["nodes"] = benchmark::Counter(static_cast<double>(nodes), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_CountSelfReduce)->DenseRange(8, 20, 4);

void BM_Sat2(benchmark::State& state) {
  Rng rng(7);
  const auto v = static_cast<std::uint32_t>(state.range(0));
  TwoSatConjunct conj;
  for (std::uint32_t k = 0; k < 2 * v; ++k) {
    auto lit = [&] { return static_cast<Literal>(1 + rng.below(v)) * (rng.below(2) ? 1 : -1); };
    conj.push_back(canonical_clause({lit(), lit()}));
  }
  for (auto _ : state) benchmark::DoNotOptimize(sat2_satisfiable(conj, v));
}
BENCHMARK(BM_Sat2)->RangeMultiplier(8)->Range(64, 1 << 15);

void BM_QsoEval(benchmark::State& state) {
  Vocabulary v({{"E", 2}});
  Rng rng(11);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<Tuple> edges;
  for (Element a = 0; a + 1 < n; ++a) edges.push_back({a, static_cast<Element>(a + 1)});
  Structure s(v, n, {{"E", edges}});
  auto f = parse_qso("sum X:1 . exists . forall x y . [ {~E(x,y)} | ~X(y) | X(x) ]", v);
  for (auto _ : state) benchmark::DoNotOptimize(qso_eval(s, f));
}
BENCHMARK(BM_QsoEval)->DenseRange(4, 16, 4);

void BM_ReduceParsimonious(benchmark::State& state) {
  Vocabulary v({{"E", 2}});
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<Tuple> edges;
  for (Element a = 0; a + 1 < n; ++a) edges.push_back({a, static_cast<Element>(a + 1)});
  Structure s(v, n, {{"E", edges}});
  auto nf = normalize_qso(parse_qso("sum X:1 . sumfo z . exists . forall x y . [ {~E(x,y)} | ~X(y) | X(x) ]", v), v);
  for (auto _ : state) benchmark::DoNotOptimize(reduce_qso_to_d2s(nf, s).formula.num_vars);
}
BENCHMARK(BM_ReduceParsimonious)->DenseRange(4, 32, 14);

void BM_ReduceProduct(benchmark::State& state) {
  Rng rng(13);
  Graph g{static_cast<std::uint32_t>(state.range(0)), {}};
  for (std::uint32_t a = 0; a < g.num_vertices; ++a)
    for (std::uint32_t b = a + 1; b < g.num_vertices; ++b)
      if (rng.below(4) == 0) g.edges.emplace_back(a, b);
  if (g.edges.empty()) g.edges.emplace_back(0, 1);
  auto enc = encode_vc(g);
  for (auto _ : state) benchmark::DoNotOptimize(reduce_pi2_to_monotone(enc.spec, enc.structure).exponent);
}
BENCHMARK(BM_ReduceProduct)->RangeMultiplier(2)->Range(8, 64);

void BM_Estimate(benchmark::State& state) {
  auto s = machine_from_fp(1000);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(fpras_rp1(s, 0.1, 0.05, seed++).estimate);
}
BENCHMARK(BM_Estimate);

}  // namespace

BENCHMARK_MAIN();
