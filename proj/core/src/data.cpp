#include "snnq/data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "snnq/serial.hpp"

namespace snnq {

namespace {

constexpr std::uint32_t kSampleDurationUs = 100000;

void check_event(const EventStream& s, const Event& e, std::size_t k, std::uint32_t prev_t,
                 std::uint64_t offset) {
    if (e.x >= s.width || e.y >= s.height)
        throw IoError(IoErrc::RangeViolation, offset,
                      "record " + std::to_string(k) + ": coordinate (" + std::to_string(e.x) +
                          ", " + std::to_string(e.y) + ") outside " + std::to_string(s.width) +
                          "x" + std::to_string(s.height) + " sensor");
    if (e.polarity > 1)
        throw IoError(IoErrc::RangeViolation, offset,
                      "record " + std::to_string(k) + ": polarity must be 0 or 1");
    if (k > 0 && e.t < prev_t)
        throw IoError(IoErrc::OrderViolation, offset,
                      "record " + std::to_string(k) + ": timestamp " + std::to_string(e.t) +
                          " precedes " + std::to_string(prev_t));
}

}  // namespace

void validate(const EventStream& s) {
    if (s.width == 0 || s.height == 0)
        throw std::invalid_argument("event stream sensor dimensions must be positive");
    std::uint32_t prev = 0;
    for (std::size_t k = 0; k < s.events.size(); ++k) {
        check_event(s, s.events[k], k, prev, 0);
        prev = s.events[k].t;
    }
}

FrameTensor events_to_frames(const EventStream& s, int t_slices, SlicePolicy policy) {
    if (t_slices < 1) throw std::invalid_argument("t_slices must be at least 1");
    if (s.events.empty()) throw std::invalid_argument("empty event stream: no events to slice");
    validate(s);

    FrameTensor out;
    out.label = s.label;
    out.frames.assign(static_cast<std::size_t>(t_slices), Tensor3(2, s.height, s.width));

    const std::size_t n = s.events.size();
    const auto slices = static_cast<std::size_t>(t_slices);
    if (policy == SlicePolicy::ByCount) {
        // floor(n/T) per slice; the remainder stays in the final slice
        const std::size_t base = n / slices;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t idx = base == 0 ? slices - 1 : std::min(k / base, slices - 1);
            const Event& e = s.events[k];
            out.frames[idx].at(e.polarity, e.y, e.x) += 1.0;
        }
    } else {
        const std::uint64_t t0 = s.events.front().t;
        const std::uint64_t span = s.events.back().t - t0;
        for (const Event& e : s.events) {
            auto idx = static_cast<std::size_t>((e.t - t0) * slices / (span + 1));
            out.frames[idx].at(e.polarity, e.y, e.x) += 1.0;
        }
    }
    return out;
}

EventStream read_event_file(const std::string& path) {
    const auto raw = read_file_bytes(path);
    ByteReader r(raw);

    if (raw.size() < 4 || raw[0] != 'A' || raw[1] != 'E' || raw[2] != 'R' || raw[3] != 'S')
        throw IoError(IoErrc::BadMagic, 0, path + ": not an AERS event file");
    r.bytes(4);

    const std::uint16_t version = r.u16();
    if (version != 1)
        throw IoError(IoErrc::BadVersion, r.offset() - 2,
                      path + ": unsupported AERS version " + std::to_string(version));

    EventStream s;
    s.width = r.u16();
    s.height = r.u16();
    s.label = r.u16();
    if (s.width == 0 || s.height == 0)
        throw IoError(IoErrc::BadValue, 6, path + ": sensor dimensions must be positive");

    const std::uint64_t count = r.u64();
    if (count == 0) throw IoError(IoErrc::EmptyStream, r.offset() - 8, path + ": no events");

    s.events.reserve(count);
    std::uint32_t prev_t = 0;
    for (std::uint64_t k = 0; k < count; ++k) {
        const std::uint64_t rec_off = r.offset();
        Event e;
        e.t = r.u32();
        e.x = r.u16();
        e.y = r.u16();
        e.polarity = r.u8();
        check_event(s, e, static_cast<std::size_t>(k), prev_t, rec_off);
        prev_t = e.t;
        s.events.push_back(e);
    }
    if (r.remaining() != 0)
        throw IoError(IoErrc::BadValue, r.offset(),
                      path + ": " + std::to_string(r.remaining()) + " trailing bytes after events");
    return s;
}

void write_event_file(const EventStream& s, const std::string& path) {
    validate(s);
    if (s.events.empty()) throw std::invalid_argument("refusing to write an empty event stream");

    ByteWriter w;
    w.bytes("AERS", 4);
    w.u16(1);
    w.u16(s.width);
    w.u16(s.height);
    w.u16(s.label);
    w.u64(s.events.size());
    for (const Event& e : s.events) {
        w.u32(e.t);
        w.u16(e.x);
        w.u16(e.y);
        w.u8(e.polarity);
    }
    write_file_atomic(path, w.data().data(), w.size());
}

namespace {

// Draws a pixel index from a static rate map via inverse CDF.
std::size_t draw_from_map(const std::vector<double>& cdf, double u) {
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u * cdf.back());
    if (it == cdf.end()) --it;
    return static_cast<std::size_t>(it - cdf.begin());
}

}  // namespace

std::vector<EventStream> gen_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    if (spec.n_classes < 1 || spec.samples_per_class < 1)
        throw std::invalid_argument("synthetic spec needs at least one class and one sample");
    if (spec.width < 2 || spec.height < 2)
        throw std::invalid_argument("synthetic sensor must be at least 2x2");
    if (spec.events_per_sample < 1)
        throw std::invalid_argument("events_per_sample must be positive");
    if (spec.noise_rate < 0.0 || spec.noise_rate > 1.0)
        throw std::invalid_argument("noise_rate must lie in [0, 1]");

    std::vector<std::vector<double>> cdfs;
    if (!spec.class_maps.empty()) {
        if (static_cast<int>(spec.class_maps.size()) != spec.n_classes)
            throw std::invalid_argument("need one class map per class");
        for (const auto& m : spec.class_maps) {
            if (m.size() != static_cast<std::size_t>(spec.width) * spec.height)
                throw std::invalid_argument("class map size must equal height*width");
            std::vector<double> cdf(m.size());
            double acc = 0.0;
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (m[i] < 0.0) throw std::invalid_argument("class map weights must be >= 0");
                acc += m[i];
                cdf[i] = acc;
            }
            if (!(acc > 0.0)) throw std::invalid_argument("class map must have positive mass");
            cdfs.push_back(std::move(cdf));
        }
    }

    Rng rng(seed);
    const int n_noise =
        static_cast<int>(std::llround(spec.noise_rate * spec.events_per_sample));
    const int n_sig = spec.events_per_sample - n_noise;
    const double cx = (spec.width - 1) / 2.0;
    const double cy = (spec.height - 1) / 2.0;
    const double extent = static_cast<double>(std::max(spec.width, spec.height));

    std::vector<EventStream> out;
    out.reserve(static_cast<std::size_t>(spec.n_classes) * spec.samples_per_class);

    for (int k = 0; k < spec.n_classes; ++k) {
        // class identity = bar orientation; the bar oscillates about the
        // center so the time-summed footprint stays an oriented band
        const double theta = std::numbers::pi * k / spec.n_classes;
        const double dx = std::cos(theta), dy = std::sin(theta);
        const double nx = -std::sin(theta), ny = std::cos(theta);

        for (int j = 0; j < spec.samples_per_class; ++j) {
            EventStream s;
            s.width = static_cast<std::uint16_t>(spec.width);
            s.height = static_cast<std::uint16_t>(spec.height);
            s.label = static_cast<std::uint16_t>(k);

            std::vector<Event> sig;
            sig.reserve(static_cast<std::size_t>(n_sig));
            for (int i = 0; i < n_sig; ++i) {
                const double phase = (i + rng.uniform01()) / n_sig;  // monotone in i
                Event e;
                e.t = static_cast<std::uint32_t>(std::llround(phase * kSampleDurationUs));
                if (cdfs.empty()) {
                    const double along = rng.uniform(-extent / 2.0, extent / 2.0);
                    const double jit = rng.uniform(-1.0, 1.0);
                    const double off =
                        (extent / 4.0) * std::sin(2.0 * std::numbers::pi * phase) + jit;
                    const double px = cx + along * dx + off * nx;
                    const double py = cy + along * dy + off * ny;
                    e.x = static_cast<std::uint16_t>(
                        std::clamp<long>(std::llround(px), 0, spec.width - 1));
                    e.y = static_cast<std::uint16_t>(
                        std::clamp<long>(std::llround(py), 0, spec.height - 1));
                    e.polarity = jit >= 0.0 ? 1 : 0;  // leading vs trailing edge
                } else {
                    const std::size_t pix = draw_from_map(cdfs[k], rng.uniform01());
                    e.x = static_cast<std::uint16_t>(pix % spec.width);
                    e.y = static_cast<std::uint16_t>(pix / spec.width);
                    e.polarity = static_cast<std::uint8_t>(rng.below(2));
                }
                sig.push_back(e);
            }

            for (int i = 0; i < n_noise; ++i) {
                Event e;
                e.t = static_cast<std::uint32_t>(rng.below(kSampleDurationUs + 1));
                e.x = static_cast<std::uint16_t>(rng.below(spec.width));
                e.y = static_cast<std::uint16_t>(rng.below(spec.height));
                e.polarity = static_cast<std::uint8_t>(rng.below(2));
                sig.push_back(e);
            }

            std::stable_sort(sig.begin(), sig.end(),
                             [](const Event& a, const Event& b) { return a.t < b.t; });
            s.events = std::move(sig);
            out.push_back(std::move(s));
        }
    }
    return out;
}

}  // namespace snnq
