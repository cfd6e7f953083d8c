#include <benchmark/benchmark.h>

#include "edgecl/experiments.hpp"
#include "edgecl/model.hpp"
#include "edgecl/sampler.hpp"
#include "edgecl/scheduler.hpp"
#include "edgecl/stream.hpp"

namespace {

using namespace edgecl;

std::vector<DataItem> items_for(const ModelConfig& mc, std::size_t n) {
  FamilyParams fp;
  fp.num_classes = mc.num_classes;
  fp.input_dim = mc.input_dim;
  return sample_scene(family_scene(family_backbone(1, 0, fp), 1, 0, fp), n, 2);
}

void BM_Forward(benchmark::State& state) {
  ModelConfig mc;
  auto rng = make_rng(1);
  const auto w = ModelWeights::random(mc, rng);
  const auto items = items_for(mc, 256);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward(w, items[i++ % items.size()].features));
  }
}
BENCHMARK(BM_Forward);

void BM_Gradient(benchmark::State& state) {
  ModelConfig mc;
  auto rng = make_rng(1);
  const auto w = ModelWeights::random(mc, rng);
  const auto items = items_for(mc, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gradient(w, items));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Gradient)->Arg(8)->Arg(64);

void BM_SgdEpoch(benchmark::State& state) {
  ModelConfig mc;
  auto rng = make_rng(1);
  const auto w = ModelWeights::random(mc, rng);
  const auto items = items_for(mc, 40);
  for (auto _ : state) benchmark::DoNotOptimize(sgd_epoch(w, items, {}, items, rng));
}
BENCHMARK(BM_SgdEpoch);

void BM_ScpsOffer(benchmark::State& state) {
  ModelConfig mc;
  auto rng = make_rng(1);
  const auto w = ModelWeights::random(mc, rng);
  const auto items = items_for(mc, 4096);
  std::vector<Embedding> emb;
  for (const auto& it : items) emb.push_back(forward(w, it.features).embedding);
  SamplerConfig sc;
  sc.capacity = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    CandidateBuffer buffer(sc);
    for (std::size_t i = 0; i < items.size(); ++i) buffer.offer(items[i], emb[i]);
    benchmark::DoNotOptimize(buffer.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(items.size()));
}
BENCHMARK(BM_ScpsOffer)->Arg(256)->Arg(1024);

void BM_Pipeline(benchmark::State& state) {
  FamilyParams fp;
  const auto script = family_script(family_backbone(1, 0, fp), 1, 0, 4, 90.0, 40.0, fp);
  PipelineConfig pc;
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(script, PolicyId::Legilimens, pc, 1).served);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(4 * 90 * 40));
}
BENCHMARK(BM_Pipeline)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
