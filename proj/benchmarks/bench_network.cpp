// Full forward and forward+backward cost on the two desk presets. Tracks the
// training-step budget that dominates every experiment; mode contrast shows
// what the soft-quantization tax is over plain hard inference.
#include <benchmark/benchmark.h>

#include <vector>

#include "snnq/data.hpp"
#include "snnq/network.hpp"
#include "snnq/presets.hpp"

namespace {

snnq::FrameTensor one_sample(const std::string& preset, int timesteps) {
    snnq::SyntheticSpec ss = snnq::preset_synthetic(preset);
    ss.samples_per_class = 1;
    auto streams = snnq::gen_synthetic(ss, 7);
    return snnq::events_to_frames(streams.front(), timesteps);
}

void bm_infer_hard(benchmark::State& state, const std::string& preset) {
    snnq::Network net = snnq::build_network(snnq::preset_network(preset), 7, 2);
    const auto sample = one_sample(preset, net.timesteps());
    for (auto _ : state) {
        auto r = snnq::forward(net, sample, snnq::ForwardMode::InferHard);
        benchmark::DoNotOptimize(r.out_rates);
    }
}

void bm_train_step(benchmark::State& state, const std::string& preset) {
    snnq::Network net = snnq::build_network(snnq::preset_network(preset), 7, 2);
    const auto sample = one_sample(preset, net.timesteps());
    for (auto _ : state) {
        auto r = snnq::forward(net, sample, snnq::ForwardMode::TrainSoft);
        auto g = snnq::backward(net, r.tape, sample.label);
        benchmark::DoNotOptimize(g.layers.front().w.data());
    }
}

}  // namespace

BENCHMARK_CAPTURE(bm_infer_hard, micro, "micro");
BENCHMARK_CAPTURE(bm_infer_hard, desk_tiny, "desk-tiny");
BENCHMARK_CAPTURE(bm_train_step, micro, "micro");
BENCHMARK_CAPTURE(bm_train_step, desk_tiny, "desk-tiny");

BENCHMARK_MAIN();
