#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "snnq/rng.hpp"
#include "snnq/tensor.hpp"

namespace snnq {

struct Event {
    std::uint32_t t = 0;  // microseconds
    std::uint16_t x = 0;
    std::uint16_t y = 0;
    std::uint8_t polarity = 0;  // 0 = OFF, 1 = ON
};

// Ordered address-event record for one sample. Timestamps non-decreasing,
// coordinates inside the sensor, polarity in {0, 1}.
struct EventStream {
    std::uint16_t width = 0;
    std::uint16_t height = 0;
    std::uint16_t label = 0;
    std::vector<Event> events;
};

void validate(const EventStream& s);

// Per-timestep polarity-split count frames plus the class label.
// frames[t] has shape (2, height, width).
struct FrameTensor {
    std::vector<Tensor3> frames;
    int label = 0;
};

enum class SlicePolicy {
    ByCount,    // equal event count per slice, remainder in the last slice
    ByDuration  // equal wall-clock span per slice
};

// frame[t](polarity, y, x) counts the events routed to slice t. ByCount puts
// floor(n/T) events in slices 0..T-2 and the rest in the final slice, so
// every event lands in exactly one frame.
FrameTensor events_to_frames(const EventStream& s, int t_slices,
                             SlicePolicy policy = SlicePolicy::ByCount);

// Container format (little-endian):
//   magic "AERS" | version u16 = 1 | width u16 | height u16 | label u16 |
//   count u64 | count records of { t u32, x u16, y u16, polarity u8 }
EventStream read_event_file(const std::string& path);
void write_event_file(const EventStream& s, const std::string& path);

// Moving oriented bars by default: class k sweeps a bar of orientation k
// across the sensor over the sample duration. Supplying static per-class rate
// maps (height*width weights each) replaces the bars.
struct SyntheticSpec {
    int n_classes = 3;
    int samples_per_class = 250;
    int width = 16;
    int height = 16;
    int events_per_sample = 400;
    double noise_rate = 0.1;  // fraction of events drawn uniformly at random
    std::vector<std::vector<double>> class_maps;
};

std::vector<EventStream> gen_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

// Seeded shuffle then partition; the test side gets round(n * test_fraction)
// samples, and both sides keep at least one.
template <typename T>
std::pair<std::vector<T>, std::vector<T>> split(const std::vector<T>& dataset,
                                                double test_fraction, std::uint64_t seed) {
    if (dataset.size() < 2) throw std::invalid_argument("split needs at least two samples");
    if (!(test_fraction > 0.0) || !(test_fraction < 1.0))
        throw std::invalid_argument("test_fraction must lie in (0, 1)");
    std::vector<std::size_t> order(dataset.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    auto n_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(dataset.size())));
    if (n_test < 1) n_test = 1;
    if (n_test > dataset.size() - 1) n_test = dataset.size() - 1;

    std::pair<std::vector<T>, std::vector<T>> out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < order.size() - n_test ? out.first : out.second).push_back(dataset[order[i]]);
    }
    return out;
}

}  // namespace snnq
