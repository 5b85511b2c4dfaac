#include "snnq/quantizer.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace snnq {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double sigmoid_prime(double z) {
    const double s = sigmoid(z);
    return s * (1.0 - s);
}

QuantLevels::QuantLevels(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) throw std::invalid_argument("quantizer needs at least two levels");
    for (std::size_t i = 1; i < values_.size(); ++i) {
        if (!(values_[i] > values_[i - 1]))
            throw std::invalid_argument("levels must be strictly increasing");
    }
    const std::size_t n = values_.size();
    for (std::size_t i = 0; i < n; ++i) {
        // symmetry about zero keeps the offset recentring exact
        if (std::abs(values_[i] + values_[n - 1 - i]) > 1e-12)
            throw std::invalid_argument("levels must be symmetric about zero");
    }
}

QuantLevels QuantLevels::uniform(int bits) {
    switch (bits) {
        case 1: return QuantLevels({-1.0, 1.0});
        case 2: return QuantLevels({-1.0, 0.0, 1.0});
        case 4:
        case 8: {
            const int top = bits == 4 ? 7 : 127;
            std::vector<double> v;
            v.reserve(static_cast<std::size_t>(2 * top + 1));
            for (int q = -top; q <= top; ++q) v.push_back(static_cast<double>(q));
            return QuantLevels(std::move(v));
        }
        default:
            throw std::invalid_argument("unsupported bit width " + std::to_string(bits) +
                                        " (supported: 1, 2, 4, 8)");
    }
}

QuantLevels uniform_levels(int bits) { return QuantLevels::uniform(bits); }

QuantSpec derive_spec(const QuantLevels& levels) {
    const auto& q = levels.values();
    QuantSpec spec{levels, {}, {}, 0.0};
    double step_sum = 0.0;
    for (std::size_t i = 1; i < q.size(); ++i) {
        spec.steps.push_back(q[i] - q[i - 1]);
        spec.borders.push_back(0.5 * (q[i - 1] + q[i]));
        step_sum += q[i] - q[i - 1];
    }
    spec.offset = 0.5 * step_sum;
    return spec;
}

static void check_state(const LayerQuantState& st, bool need_temperature) {
    if (!(st.alpha > 0.0) || !(st.beta > 0.0))
        throw std::invalid_argument("quantizer scales must be positive");
    if (need_temperature && !(st.temperature > 0.0))
        throw std::invalid_argument("quantizer temperature must be positive");
}

int quantize_index(double w, const QuantSpec& spec, const LayerQuantState& st) {
    check_state(st, false);
    const double x = st.beta * w;
    int k = 0;
    for (double b : spec.borders) {
        if (x >= b) ++k;  // ties take the upper level
    }
    return k;
}

double quantize_step(double w, const QuantSpec& spec, const LayerQuantState& st) {
    return st.alpha * spec.levels.values()[static_cast<std::size_t>(quantize_index(w, spec, st))];
}

// Past this point sigmoid(z) rounds to exactly 1 (or falls below the sum's
// resolution), so the transcendental call can be skipped.
constexpr double kSigmoidSaturation = 45.0;

double quantize_soft(double w, const QuantSpec& spec, const LayerQuantState& st) {
    check_state(st, true);
    const double x = st.beta * w;
    double acc = 0.0;
    for (std::size_t i = 0; i < spec.steps.size(); ++i) {
        const double z = st.temperature * (x - spec.borders[i]);
        if (z >= kSigmoidSaturation)
            acc += spec.steps[i];
        else if (z > -kSigmoidSaturation)
            acc += spec.steps[i] * sigmoid(z);
    }
    return st.alpha * (acc - spec.offset);
}

QuantGrads quantize_soft_grads(double w, const QuantSpec& spec, const LayerQuantState& st) {
    check_state(st, true);
    const double x = st.beta * w;
    double acc = 0.0;
    double slope = 0.0;
    for (std::size_t i = 0; i < spec.steps.size(); ++i) {
        const double z = st.temperature * (x - spec.borders[i]);
        if (z >= kSigmoidSaturation) {
            acc += spec.steps[i];
            continue;
        }
        if (z <= -kSigmoidSaturation) continue;
        acc += spec.steps[i] * sigmoid(z);
        slope += spec.steps[i] * sigmoid_prime(z);
    }
    QuantGrads g;
    g.d_w = st.alpha * st.temperature * st.beta * slope;
    g.d_alpha = acc - spec.offset;
    g.d_beta = st.alpha * st.temperature * w * slope;
    return g;
}

double temperature_at(long epoch, double t0, double rate) {
    if (epoch < 0) throw std::invalid_argument("epoch must be non-negative");
    const double t = t0 + rate * static_cast<double>(epoch);
    if (!(t > 0.0))
        throw std::invalid_argument("temperature schedule produced " + std::to_string(t) +
                                    "; soft quantization requires T > 0");
    return t;
}

ScaleInit init_scales(std::span<const double> weights, const QuantLevels& levels) {
    if (weights.empty()) throw std::invalid_argument("cannot derive scales from an empty layer");
    double m = 0.0;
    for (double w : weights) m = std::max(m, std::abs(w));
    if (m == 0.0) return {1.0, 1.0};
    const double beta = levels.max() / m;
    return {1.0 / beta, beta};
}

}  // namespace snnq
