#include <benchmark/benchmark.h>

#include "oric/chain_builder.hpp"
#include "oric/estimator.hpp"
#include "oric/oracle.hpp"
#include "oric/stream_synth.hpp"

using namespace oric;

namespace {

synth::StreamSpec bench_spec(std::uint32_t rows) {
    synth::StreamSpec spec;
    spec.num_features = 23;
    spec.categories_per_feature = 16;
    spec.rows_per_period = rows;
    spec.horizon = 1;
    spec.positive_rate = 0.5;
    spec.rng_seed = 7;
    for (std::uint32_t i = 0; i < 4; ++i) {
        synth::PlantedPattern planted;
        planted.pattern = Pattern::from_pairs({{2 * i, 1}, {2 * i + 1, 1}});
        planted.freq_pos = {0.6 - 0.1 * i};
        planted.freq_neg = {0.1 + 0.05 * i};
        spec.planted.push_back(planted);
    }
    return spec;
}

} // namespace

static void BM_GenerateChains(benchmark::State& state) {
    const auto batch = synth::generate_period(bench_spec(50000), 1);
    const ClassView view(batch, 1);
    ChainConfig cfg;
    cfg.num_chains = static_cast<std::uint32_t>(state.range(0));
    cfg.max_length = 20;
    cfg.max_tail_size = 4;
    for (auto _ : state) {
        auto chains = generate_chains(view, cfg);
        benchmark::DoNotOptimize(chains);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateChains)->Arg(1000)->Arg(10000);

static void BM_ModelUpdate(benchmark::State& state) {
    const auto batch =
        synth::generate_period(bench_spec(std::uint32_t(state.range(0))), 1);
    OricConfig cfg;
    cfg.chains.num_chains = 10000;
    for (auto _ : state) {
        OricModel model(cfg, batch.schema);
        model.update(batch);
        benchmark::DoNotOptimize(model);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ModelUpdate)->Arg(20000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_ExactScan(benchmark::State& state) {
    const auto spec = bench_spec(std::uint32_t(state.range(0)));
    const auto batch = synth::generate_period(spec, 1);
    std::vector<Pattern> patterns;
    for (const auto& planted : spec.planted) patterns.push_back(planted.pattern);
    for (auto _ : state) {
        auto stats = oracle::exact_scan(batch, patterns);
        benchmark::DoNotOptimize(stats);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ExactScan)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_Select(benchmark::State& state) {
    const auto batch = synth::generate_period(bench_spec(50000), 1);
    OricConfig cfg;
    cfg.chains.num_chains = 10000;
    OricModel model(cfg, batch.schema);
    model.update(batch);
    for (auto _ : state) {
        auto selection = model.select();
        benchmark::DoNotOptimize(selection);
    }
}
BENCHMARK(BM_Select)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
