#include <benchmark/benchmark.h>

#include <vector>

#include "navsynth/mixing.hpp"
#include "navsynth/planted.hpp"
#include "navsynth/synth.hpp"

namespace {

using namespace navsynth;

const PlantedWorld& world() {
  static const PlantedWorld w = [] {
    PlantedWorldSpec spec;
    spec.num_nodes = 2000;
    spec.corpus_size = 20000;
    spec.memory_strength = 0.5;
    spec.seed = 7;
    return generate_planted_world(spec);
  }();
  return w;
}

void BM_GenerateCorpusWeighted(benchmark::State& state) {
  const auto& w = world();
  const auto model = build_transition_model(w.graph, &w.clickstream);
  std::size_t pages = 0;
  for (auto _ : state) {
    const auto corpus = generate_corpus(model, w.corpus, StoppingRule::extrinsic(), 3);
    for (const auto& s : corpus.sequences) pages += s.size();
    benchmark::DoNotOptimize(corpus.sequences.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(pages));
}
BENCHMARK(BM_GenerateCorpusWeighted)->Unit(benchmark::kMillisecond);

void BM_ExpectedMi(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const std::uint64_t per = 40;
  std::vector<std::uint64_t> rows(k, per);
  std::vector<std::uint64_t> cols(k, per);
  for (auto _ : state) benchmark::DoNotOptimize(expected_mi(rows, cols, per * k));
}
BENCHMARK(BM_ExpectedMi)->Arg(4)->Arg(16)->Arg(64);

void BM_AmiSurvey(benchmark::State& state) {
  const auto& w = world();
  for (auto _ : state) {
    const auto survey = ami_survey(w.corpus, 100, {}, 1);
    benchmark::DoNotOptimize(survey.records.data());
  }
}
BENCHMARK(BM_AmiSurvey)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
