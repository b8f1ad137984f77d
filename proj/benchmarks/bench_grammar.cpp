#include <benchmark/benchmark.h>

#include "bench_util.hpp"
#include "robospeech/grammar/fst.hpp"
#include "robospeech/grammar/jsgf.hpp"

using namespace robospeech;

namespace {

void BM_CompileGrammar(benchmark::State& state, const std::string& id) {
  const auto& ast = bench::library().ast(id);
  for (auto _ : state) benchmark::DoNotOptimize(grammar::compile_grammar(ast, true, id));
}
BENCHMARK_CAPTURE(BM_CompileGrammar, q1, std::string("q1"));
BENCHMARK_CAPTURE(BM_CompileGrammar, commands1, std::string("commands1"));

void BM_ParseJsgf(benchmark::State& state) {
  std::string text = grammar::to_jsgf(bench::library().ast("commands2"));
  for (auto _ : state) benchmark::DoNotOptimize(grammar::parse_jsgf(text));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseJsgf);

void BM_EnumerateLanguage(benchmark::State& state) {
  auto fst = bench::library().get("commands2");
  for (auto _ : state) benchmark::DoNotOptimize(grammar::enumerate_language(*fst, 10000));
}
BENCHMARK(BM_EnumerateLanguage);

}  // namespace
