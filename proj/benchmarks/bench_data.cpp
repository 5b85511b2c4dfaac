// Event-pipeline throughput: synthetic generation, frame integration, and the
// binary container round trip. These run once per experiment rather than per
// step, but the frame integration is O(events) and shows up at import time.
#include <benchmark/benchmark.h>

#include <cstdio>
#include <string>

#include "snnq/data.hpp"

namespace {

snnq::EventStream dense_stream() {
    snnq::SyntheticSpec ss;
    ss.n_classes = 3;
    ss.samples_per_class = 1;
    ss.events_per_sample = 20000;
    return snnq::gen_synthetic(ss, 11).front();
}

void bm_gen_synthetic(benchmark::State& state) {
    snnq::SyntheticSpec ss;
    ss.samples_per_class = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto streams = snnq::gen_synthetic(ss, 11);
        benchmark::DoNotOptimize(streams.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * ss.n_classes *
                            ss.events_per_sample);
}

void bm_events_to_frames(benchmark::State& state) {
    const auto s = dense_stream();
    const auto policy = state.range(0) == 0 ? snnq::SlicePolicy::ByCount
                                            : snnq::SlicePolicy::ByDuration;
    for (auto _ : state) {
        auto f = snnq::events_to_frames(s, 10, policy);
        benchmark::DoNotOptimize(f.frames.data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(s.events.size()));
}

void bm_event_file_round_trip(benchmark::State& state) {
    const auto s = dense_stream();
    const std::string path = "bench_events.aers";
    for (auto _ : state) {
        snnq::write_event_file(s, path);
        auto back = snnq::read_event_file(path);
        benchmark::DoNotOptimize(back.events.data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(s.events.size()));
    std::remove(path.c_str());
}

}  // namespace

BENCHMARK(bm_gen_synthetic)->Arg(10)->Arg(100);
BENCHMARK(bm_events_to_frames)->Arg(0)->Arg(1);
BENCHMARK(bm_event_file_round_trip);

BENCHMARK_MAIN();
