// Per-weight quantizer cost across bit widths. The soft path is the training
// hot loop: one sigmoid per level transition, so 8-bit is ~127x the work of
// 1-bit and worth tracking separately from the step path's early-out scan.
#include <benchmark/benchmark.h>

#include <vector>

#include "snnq/quantizer.hpp"
#include "snnq/rng.hpp"

namespace {

std::vector<double> draw_weights(std::size_t n) {
    snnq::Rng rng(42);
    std::vector<double> w(n);
    for (auto& x : w) x = rng.uniform(-1.2, 1.2);
    return w;
}

void bm_step(benchmark::State& state) {
    const auto spec = snnq::derive_spec(snnq::uniform_levels(static_cast<int>(state.range(0))));
    snnq::LayerQuantState st{0.8, 1.3, 1e4};
    const auto w = draw_weights(4096);
    for (auto _ : state) {
        double acc = 0.0;
        for (double x : w) acc += snnq::quantize_step(x, spec, st);
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.size()));
}

void bm_soft(benchmark::State& state) {
    const auto spec = snnq::derive_spec(snnq::uniform_levels(static_cast<int>(state.range(0))));
    snnq::LayerQuantState st{0.8, 1.3, 50.0};
    const auto w = draw_weights(4096);
    for (auto _ : state) {
        double acc = 0.0;
        for (double x : w) acc += snnq::quantize_soft(x, spec, st);
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.size()));
}

void bm_soft_grads(benchmark::State& state) {
    const auto spec = snnq::derive_spec(snnq::uniform_levels(static_cast<int>(state.range(0))));
    snnq::LayerQuantState st{0.8, 1.3, 50.0};
    const auto w = draw_weights(4096);
    for (auto _ : state) {
        double acc = 0.0;
        for (double x : w) acc += snnq::quantize_soft_grads(x, spec, st).d_w;
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.size()));
}

}  // namespace

BENCHMARK(bm_step)->Arg(1)->Arg(2)->Arg(4)->Arg(8);
BENCHMARK(bm_soft)->Arg(1)->Arg(2)->Arg(4)->Arg(8);
BENCHMARK(bm_soft_grads)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
