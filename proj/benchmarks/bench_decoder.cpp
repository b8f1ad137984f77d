#include <benchmark/benchmark.h>

#include "bench_util.hpp"
#include "robospeech/decoder/recognizer.hpp"
#include "robospeech/decoder/search.hpp"

using namespace robospeech;

namespace {

const std::vector<std::string> kAnswer{"moved", "quickly", "for", "twenty", "seconds"};

void BM_ViterbiAdvance(benchmark::State& state) {
  auto fst = bench::library().get("q1");
  auto frames = bench::stream(bench::vocabulary(*fst), kAnswer, 25, 40, 1);
  for (auto _ : state) {
    decoder::ViterbiSearch search(fst, static_cast<std::size_t>(state.range(0)));
    for (const auto& f : frames) search.advance(f);
    benchmark::DoNotOptimize(search.best_complete());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(frames.size()));
}
BENCHMARK(BM_ViterbiAdvance)->Arg(0)->Arg(16)->Arg(64);

// End-to-end recognizer cost per utterance: ring, gating and endpointing.
void BM_RecognizerPump(benchmark::State& state) {
  auto fst = bench::library().get("q1");
  auto frames = bench::stream(bench::vocabulary(*fst), kAnswer, 25, 60, 2);
  for (auto _ : state) {
    decoder::Recognizer r;
    r.set_grammar(fst);
    int results = 0;
    for (const auto& f : frames) results += r.pump(f).has_value();
    if (results != 1) state.SkipWithError("expected one result");
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(frames.size()));
}
BENCHMARK(BM_RecognizerPump);

}  // namespace
