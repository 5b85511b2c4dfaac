#pragma once

// Reference implementations the tests trust, written independently of the
// library code paths they check.

#include <cmath>
#include <cstddef>
#include <vector>

#include "snnq/data.hpp"

namespace oracle {

// Hard quantization of a uniform level grid as clamp + round-half-up on the
// grid index. Ties at a border land on the upper level.
inline double clamp_round_quant(double w, double alpha, double beta,
                                const std::vector<double>& levels) {
    const double lo = levels.front();
    const double gap = levels[1] - levels[0];
    const double n = static_cast<double>(levels.size() - 1);
    double k = std::floor((beta * w - lo) / gap + 0.5);
    if (k < 0.0) k = 0.0;
    if (k > n) k = n;
    return alpha * (lo + gap * k);
}

template <typename F>
double central_diff(F f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Flattens a sample by summing frames over time.
inline std::vector<double> time_summed(const snnq::FrameTensor& sample) {
    std::vector<double> out(sample.frames.front().v.size(), 0.0);
    for (const auto& f : sample.frames)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += f.v[i];
    return out;
}

// Nearest-centroid accuracy: centroids from the train split, L2 matching on
// the test split. A floor for "this dataset is separable at all".
inline double nearest_centroid_accuracy(const std::vector<snnq::FrameTensor>& train,
                                        const std::vector<snnq::FrameTensor>& test,
                                        int n_classes) {
    const std::size_t dim = time_summed(train.front()).size();
    std::vector<std::vector<double>> centroid(n_classes, std::vector<double>(dim, 0.0));
    std::vector<int> count(n_classes, 0);
    for (const auto& s : train) {
        auto v = time_summed(s);
        for (std::size_t i = 0; i < dim; ++i) centroid[s.label][i] += v[i];
        ++count[s.label];
    }
    for (int c = 0; c < n_classes; ++c)
        if (count[c] > 0)
            for (auto& x : centroid[c]) x /= count[c];

    int hits = 0;
    for (const auto& s : test) {
        auto v = time_summed(s);
        int best = 0;
        double best_d = 1e300;
        for (int c = 0; c < n_classes; ++c) {
            double d = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                const double diff = v[i] - centroid[c][i];
                d += diff * diff;
            }
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        if (best == s.label) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(test.size());
}

}  // namespace oracle
