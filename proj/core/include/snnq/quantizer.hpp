#pragma once

#include <span>
#include <vector>

namespace snnq {

// Numerically stable logistic. Saturates to exact 0.0 / 1.0 once |z| is large
// enough that the result is not representable apart from the limit.
double sigmoid(double z);
double sigmoid_prime(double z);

// Strictly increasing level values, symmetric about zero, at least two.
class QuantLevels {
public:
    explicit QuantLevels(std::vector<double> values);

    // Integer grids used throughout: 1 -> {-1,1}, 2 -> {-1,0,1},
    // 4 -> {-7..7}, 8 -> {-127..127}.
    static QuantLevels uniform(int bits);

    const std::vector<double>& values() const { return values_; }
    int count() const { return static_cast<int>(values_.size()); }
    double min() const { return values_.front(); }
    double max() const { return values_.back(); }

private:
    std::vector<double> values_;
};

QuantLevels uniform_levels(int bits);

// Derived once per level set: steps s_i = q_i - q_{i-1}, decision borders at
// the midpoints b_i = (q_{i-1} + q_i) / 2, and the offset o = sum(s_i) / 2
// that recenters the step sum onto the levels.
struct QuantSpec {
    QuantLevels levels;
    std::vector<double> steps;
    std::vector<double> borders;
    double offset = 0.0;
};

QuantSpec derive_spec(const QuantLevels& levels);

// Per-layer learnable scales plus the sharpness of the soft transitions.
// beta scales weights into the level grid, alpha scales the result back out.
struct LayerQuantState {
    double alpha = 1.0;
    double beta = 1.0;
    double temperature = 1.0;
};

// Hard staircase: alpha * (sum_i s_i * heaviside(beta*w - b_i) - o), with
// heaviside(0) = 1 so a weight exactly on a border takes the upper level.
// The step sum telescopes to a level value, so the result is exactly
// alpha * q_k for the selected k.
double quantize_step(double w, const QuantSpec& spec, const LayerQuantState& st);

// Index k of the level quantize_step selects (count of fired borders).
int quantize_index(double w, const QuantSpec& spec, const LayerQuantState& st);

// Soft relaxation: each heaviside replaced by sigmoid(T * (beta*w - b_i)).
// Continuous and strictly increasing in w for T > 0; approaches the staircase
// as T grows.
double quantize_soft(double w, const QuantSpec& spec, const LayerQuantState& st);

struct QuantGrads {
    double d_w = 0.0;
    double d_alpha = 0.0;
    double d_beta = 0.0;
};

// Exact partials of quantize_soft at fixed temperature:
//   d_w     = alpha * T * beta * sum_i s_i * sig'_i
//   d_alpha = sum_i s_i * sig_i - o          (the forward divided by alpha)
//   d_beta  = alpha * T * w    * sum_i s_i * sig'_i
QuantGrads quantize_soft_grads(double w, const QuantSpec& spec, const LayerQuantState& st);

// Linear warm-up schedule t0 + rate * epoch. The result must stay positive.
double temperature_at(long epoch, double t0, double rate);

struct ScaleInit {
    double alpha = 1.0;
    double beta = 1.0;
};

// beta0 maps the largest-magnitude weight onto the top level, alpha0 = 1/beta0
// restores the original scale. All-zero weights fall back to (1, 1).
ScaleInit init_scales(std::span<const double> weights, const QuantLevels& levels);

}  // namespace snnq
