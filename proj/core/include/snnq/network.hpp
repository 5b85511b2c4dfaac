#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "snnq/data.hpp"
#include "snnq/neuron.hpp"
#include "snnq/quantizer.hpp"
#include "snnq/tensor.hpp"

namespace snnq {

enum class LayerKind : std::uint8_t {
    Conv2d = 0,        // odd kernel, stride 1, zero padding to keep H x W, no bias
    Dense = 1,         // flattens its input, no bias
    MaxPool2 = 2,      // 2x2 window, stride 2, floor division of the dims
    Lif = 3,           // elementwise membrane dynamics, keeps the shape
    VotingAvgPool = 4  // averages groups of `window` features into class scores
};

struct LayerSpec {
    LayerKind kind = LayerKind::Dense;
    int out_channels = 0;  // Conv2d
    int kernel = 3;        // Conv2d
    int out_features = 0;  // Dense
    int window = 10;       // VotingAvgPool
};

LayerSpec conv2d(int out_channels, int kernel = 3);
LayerSpec dense(int out_features);
LayerSpec maxpool2();
LayerSpec lif();
LayerSpec voting_avgpool(int window = 10);

// Feedforward stack evaluated per timestep. Must end with the voting layer;
// each conv/dense must be followed, possibly after a pool, by a lif layer.
struct NetworkSpec {
    int in_channels = 2;
    int in_h = 0;
    int in_w = 0;
    int timesteps = 10;
    std::vector<LayerSpec> layers;
    LifParams lif_params{};
    SurrogateParams surrogate{};
};

void validate(const NetworkSpec& spec);

struct Layer {
    LayerSpec spec;
    std::string name;
    // shapes resolved against the input
    int in_c = 0, in_h = 0, in_w = 0;
    int out_c = 0, out_h = 0, out_w = 0;
    int fan_in = 0;
    std::vector<double> weights;  // conv: (out_c, in_c, k, k); dense: (out, in)
    // absent => the layer runs at full precision (32-bit mode)
    std::optional<QuantSpec> quant;
    LayerQuantState qstate;

    bool synaptic() const {
        return spec.kind == LayerKind::Conv2d || spec.kind == LayerKind::Dense;
    }
    std::size_t weight_count() const { return weights.size(); }
};

enum class ForwardMode {
    InferHard,       // staircase-quantized weights, binary spikes
    TrainSoft,       // sigmoid-quantized weights, binary spikes
    GradcheckSmooth  // sigmoid-quantized weights, surrogate-transfer spikes
};

// Everything the backward pass needs, recorded by forward in the training
// modes. `signature` captures the discrete choices of the run (surrogate
// regions and pool argmaxes), so two runs with different signatures crossed a
// non-differentiable kink.
struct ActivationTape {
    ForwardMode mode = ForwardMode::TrainSoft;
    int timesteps = 0;
    std::uint64_t param_stamp = 0;  // hash of the parameters the tape was built from
    std::vector<std::vector<std::vector<double>>> inputs;  // [layer][t] synaptic inputs
    std::vector<std::vector<double>> wq;                   // [layer] quantized weights
    std::vector<LifTape> lif;                              // [layer]
    std::vector<std::vector<std::vector<int>>> argmax;     // [layer][t] winning input index
    std::vector<std::vector<double>> voted;                // [t][class]
    std::vector<std::uint8_t> signature;
};

struct ForwardResult {
    std::vector<double> out_rates;  // mean voted output per class
    ActivationTape tape;
};

struct LayerGrads {
    std::vector<double> w;
    double alpha = 0.0;
    double beta = 0.0;
};

struct Gradients {
    std::vector<LayerGrads> layers;  // aligned with the network's layer list
};

class Network {
public:
    Network() = default;

    const NetworkSpec& spec() const { return spec_; }
    const std::vector<Layer>& layers() const { return layers_; }
    std::vector<Layer>& layers() { return layers_; }
    int n_classes() const { return n_classes_; }
    int timesteps() const { return spec_.timesteps; }

    std::size_t param_count() const;           // synaptic weights
    bool quantized() const;                    // any layer carrying a quantizer
    void set_temperature(double t);            // all quantized layers
    std::uint64_t param_stamp() const;         // hash of weights + scales + temperatures

private:
    friend Network build_network(const NetworkSpec&, std::uint64_t, int);
    friend Network assemble_network(const NetworkSpec&, const std::vector<std::vector<double>>&);
    NetworkSpec spec_;
    std::vector<Layer> layers_;
    int n_classes_ = 0;
};

// Weights drawn uniformly from [-sqrt(6/fan_in), +sqrt(6/fan_in)], wide
// enough to keep the stack spiking on count-valued inputs. bits = 32 leaves
// the layers unquantized; 1/2/4/8 attach the matching level grid with scales
// from init_scales.
Network build_network(const NetworkSpec& spec, std::uint64_t seed, int bits = 32);

// Rebuilds a network around externally supplied weights (checkpoint loading,
// quantized import). Quantizers are not attached.
Network assemble_network(const NetworkSpec& spec, const std::vector<std::vector<double>>& weights);

ForwardResult forward(const Network& net, const FrameTensor& sample, ForwardMode mode);

// Mean squared error against a one-hot target held constant over time:
// L = mean over t and classes of (voted(t, n) - y(n))^2.
double mse_loss(const std::vector<std::vector<double>>& voted, int label, int n_classes);

// Reverse sweep over the tape: time-major backpropagation through the
// membrane recursion, the surrogate spike derivative, pool routing, and the
// soft quantizer, yielding d/dW, d/dalpha, d/dbeta per synaptic layer.
Gradients backward(const Network& net, const ActivationTape& tape, int label);

// argmax of infer_hard rates; ties resolve to the lowest class index.
int predict(const Network& net, const FrameTensor& sample);
int argmax_class(const std::vector<double>& rates);

namespace detail {
// Exposed for targeted tests and benchmarks.
void conv2d_forward(const Tensor3& in, const std::vector<double>& w, int kernel, Tensor3& out);
void conv2d_backward(const Tensor3& in, const std::vector<double>& w, int kernel,
                     const Tensor3& g_out, std::vector<double>& g_w, Tensor3& g_in);
void maxpool2_forward(const Tensor3& in, Tensor3& out, std::vector<int>& argmax);
void maxpool2_backward(const std::vector<int>& argmax, const Tensor3& g_out, Tensor3& g_in);
}  // namespace detail

}  // namespace snnq
