#include "snnq/network.hpp"

#include <cmath>
#include <stdexcept>

#include "snnq/rng.hpp"
#include "snnq/serial.hpp"

namespace snnq {

LayerSpec conv2d(int out_channels, int kernel) {
    LayerSpec s;
    s.kind = LayerKind::Conv2d;
    s.out_channels = out_channels;
    s.kernel = kernel;
    return s;
}

LayerSpec dense(int out_features) {
    LayerSpec s;
    s.kind = LayerKind::Dense;
    s.out_features = out_features;
    return s;
}

LayerSpec maxpool2() {
    LayerSpec s;
    s.kind = LayerKind::MaxPool2;
    return s;
}

LayerSpec lif() {
    LayerSpec s;
    s.kind = LayerKind::Lif;
    return s;
}

LayerSpec voting_avgpool(int window) {
    LayerSpec s;
    s.kind = LayerKind::VotingAvgPool;
    s.window = window;
    return s;
}

static std::string layer_label(const LayerSpec& spec, std::size_t index) {
    const char* prefix = "layer";
    switch (spec.kind) {
        case LayerKind::Conv2d: prefix = "conv"; break;
        case LayerKind::Dense: prefix = "dense"; break;
        case LayerKind::MaxPool2: prefix = "pool"; break;
        case LayerKind::Lif: prefix = "lif"; break;
        case LayerKind::VotingAvgPool: prefix = "vote"; break;
    }
    return std::string(prefix) + std::to_string(index);
}

void validate(const NetworkSpec& spec) {
    if (spec.in_channels < 1 || spec.in_h < 1 || spec.in_w < 1)
        throw std::invalid_argument("network input dimensions must be positive");
    if (spec.timesteps < 1) throw std::invalid_argument("network needs at least one timestep");
    if (spec.layers.empty()) throw std::invalid_argument("network needs at least one layer");
    validate(spec.lif_params);
    validate(spec.surrogate);

    if (spec.layers.back().kind != LayerKind::VotingAvgPool)
        throw std::invalid_argument("network must end with a voting_avgpool layer");
    for (std::size_t i = 0; i + 1 < spec.layers.size(); ++i) {
        if (spec.layers[i].kind == LayerKind::VotingAvgPool)
            throw std::invalid_argument("voting_avgpool is only valid as the final layer");
    }
    // every synaptic layer must reach a lif layer, with at most pools between
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const auto kind = spec.layers[i].kind;
        if (kind != LayerKind::Conv2d && kind != LayerKind::Dense) continue;
        std::size_t j = i + 1;
        while (j < spec.layers.size() && spec.layers[j].kind == LayerKind::MaxPool2) ++j;
        if (j >= spec.layers.size() || spec.layers[j].kind != LayerKind::Lif)
            throw std::invalid_argument(layer_label(spec.layers[i], i) +
                                        " must be followed by a lif layer (pools may intervene)");
    }
}

static std::vector<Layer> resolve_layers(const NetworkSpec& spec) {
    std::vector<Layer> layers;
    int c = spec.in_channels, h = spec.in_h, w = spec.in_w;
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const LayerSpec& ls = spec.layers[i];
        Layer l;
        l.spec = ls;
        l.name = layer_label(ls, i);
        l.in_c = c;
        l.in_h = h;
        l.in_w = w;
        switch (ls.kind) {
            case LayerKind::Conv2d: {
                if (ls.out_channels < 1)
                    throw std::invalid_argument(l.name + ": out_channels must be positive");
                if (ls.kernel < 1 || ls.kernel % 2 == 0)
                    throw std::invalid_argument(l.name + ": kernel must be odd and positive");
                l.out_c = ls.out_channels;
                l.out_h = h;
                l.out_w = w;
                l.fan_in = c * ls.kernel * ls.kernel;
                l.weights.assign(static_cast<std::size_t>(ls.out_channels) * l.fan_in, 0.0);
                break;
            }
            case LayerKind::Dense: {
                if (ls.out_features < 1)
                    throw std::invalid_argument(l.name + ": out_features must be positive");
                l.fan_in = c * h * w;
                l.out_c = ls.out_features;
                l.out_h = 1;
                l.out_w = 1;
                l.weights.assign(static_cast<std::size_t>(ls.out_features) * l.fan_in, 0.0);
                break;
            }
            case LayerKind::MaxPool2: {
                l.out_c = c;
                l.out_h = h / 2;
                l.out_w = w / 2;
                if (l.out_h < 1 || l.out_w < 1)
                    throw std::invalid_argument(l.name + ": pooling would reduce " +
                                                std::to_string(h) + "x" + std::to_string(w) +
                                                " to an empty grid");
                break;
            }
            case LayerKind::Lif: {
                l.out_c = c;
                l.out_h = h;
                l.out_w = w;
                break;
            }
            case LayerKind::VotingAvgPool: {
                if (h != 1 || w != 1)
                    throw std::invalid_argument(l.name + ": voting expects a flat feature vector");
                if (ls.window < 1 || c % ls.window != 0)
                    throw std::invalid_argument(l.name + ": window " + std::to_string(ls.window) +
                                                " must divide " + std::to_string(c) + " features");
                l.out_c = c / ls.window;
                l.out_h = 1;
                l.out_w = 1;
                break;
            }
        }
        c = l.out_c;
        h = l.out_h;
        w = l.out_w;
        layers.push_back(std::move(l));
    }
    return layers;
}

std::size_t Network::param_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l.weight_count();
    return n;
}

bool Network::quantized() const {
    for (const auto& l : layers_)
        if (l.quant) return true;
    return false;
}

void Network::set_temperature(double t) {
    if (!(t > 0.0)) throw std::invalid_argument("temperature must be positive");
    for (auto& l : layers_)
        if (l.quant) l.qstate.temperature = t;
}

std::uint64_t Network::param_stamp() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 0x100000001b3ull;
        }
    };
    for (const auto& l : layers_) {
        mix(l.weights.data(), l.weights.size() * sizeof(double));
        if (l.quant) {
            mix(&l.qstate.alpha, sizeof(double));
            mix(&l.qstate.beta, sizeof(double));
            mix(&l.qstate.temperature, sizeof(double));
        }
    }
    return h;
}

Network build_network(const NetworkSpec& spec, std::uint64_t seed, int bits) {
    if (bits != 32 && bits != 1 && bits != 2 && bits != 4 && bits != 8)
        throw std::invalid_argument("unsupported bit width " + std::to_string(bits) +
                                    " (quantized: 1, 2, 4, 8; full precision: 32)");
    validate(spec);
    Network net;
    net.spec_ = spec;
    net.layers_ = resolve_layers(spec);
    net.n_classes_ = net.layers_.back().out_c;

    Rng rng(seed);
    for (auto& l : net.layers_) {
        if (!l.synaptic()) continue;
        // Wide enough that count-valued inputs push early membranes across a
        // unit threshold; 1/sqrt(fan_in) leaves the stack silent at start.
        const double bound = std::sqrt(6.0 / static_cast<double>(l.fan_in));
        for (auto& w : l.weights) w = rng.uniform(-bound, bound);
        if (bits != 32) {
            l.quant = derive_spec(uniform_levels(bits));
            const ScaleInit si = init_scales(l.weights, l.quant->levels);
            l.qstate = {si.alpha, si.beta, 1.0};
        }
    }
    return net;
}

Network assemble_network(const NetworkSpec& spec,
                         const std::vector<std::vector<double>>& weights) {
    validate(spec);
    Network net;
    net.spec_ = spec;
    net.layers_ = resolve_layers(spec);
    net.n_classes_ = net.layers_.back().out_c;

    std::size_t wi = 0;
    for (auto& l : net.layers_) {
        if (!l.synaptic()) continue;
        if (wi >= weights.size())
            throw std::invalid_argument("assemble_network: missing weights for " + l.name);
        if (weights[wi].size() != l.weight_count())
            throw std::invalid_argument("assemble_network: " + l.name + " expects " +
                                        std::to_string(l.weight_count()) + " weights, got " +
                                        std::to_string(weights[wi].size()));
        l.weights = weights[wi++];
    }
    if (wi != weights.size())
        throw std::invalid_argument("assemble_network: more weight blocks than synaptic layers");
    return net;
}

namespace detail {

void conv2d_forward(const Tensor3& in, const std::vector<double>& w, int kernel, Tensor3& out) {
    const int pad = kernel / 2;
    const int C = in.c, H = in.h, W = in.w, O = out.c;
    for (int oc = 0; oc < O; ++oc) {
        for (int y = 0; y < H; ++y) {
            for (int x = 0; x < W; ++x) {
                double acc = 0.0;
                for (int ic = 0; ic < C; ++ic) {
                    const std::size_t wbase =
                        ((static_cast<std::size_t>(oc) * C + ic) * kernel) * kernel;
                    for (int dy = 0; dy < kernel; ++dy) {
                        const int yy = y + dy - pad;
                        if (yy < 0 || yy >= H) continue;
                        for (int dx = 0; dx < kernel; ++dx) {
                            const int xx = x + dx - pad;
                            if (xx < 0 || xx >= W) continue;
                            acc += w[wbase + static_cast<std::size_t>(dy) * kernel + dx] *
                                   in.at(ic, yy, xx);
                        }
                    }
                }
                out.at(oc, y, x) = acc;
            }
        }
    }
}

void conv2d_backward(const Tensor3& in, const std::vector<double>& w, int kernel,
                     const Tensor3& g_out, std::vector<double>& g_w, Tensor3& g_in) {
    const int pad = kernel / 2;
    const int C = in.c, H = in.h, W = in.w, O = g_out.c;
    for (int oc = 0; oc < O; ++oc) {
        for (int y = 0; y < H; ++y) {
            for (int x = 0; x < W; ++x) {
                const double g = g_out.at(oc, y, x);
                if (g == 0.0) continue;
                for (int ic = 0; ic < C; ++ic) {
                    const std::size_t wbase =
                        ((static_cast<std::size_t>(oc) * C + ic) * kernel) * kernel;
                    for (int dy = 0; dy < kernel; ++dy) {
                        const int yy = y + dy - pad;
                        if (yy < 0 || yy >= H) continue;
                        for (int dx = 0; dx < kernel; ++dx) {
                            const int xx = x + dx - pad;
                            if (xx < 0 || xx >= W) continue;
                            const std::size_t wi =
                                wbase + static_cast<std::size_t>(dy) * kernel + dx;
                            g_w[wi] += g * in.at(ic, yy, xx);
                            g_in.at(ic, yy, xx) += g * w[wi];
                        }
                    }
                }
            }
        }
    }
}

void maxpool2_forward(const Tensor3& in, Tensor3& out, std::vector<int>& argmax) {
    argmax.assign(out.size(), 0);
    std::size_t o = 0;
    for (int c = 0; c < out.c; ++c) {
        for (int y = 0; y < out.h; ++y) {
            for (int x = 0; x < out.w; ++x, ++o) {
                int best_idx = static_cast<int>(in.index(c, 2 * y, 2 * x));
                double best = in.v[static_cast<std::size_t>(best_idx)];
                // fixed scan order; strict comparison keeps the first maximum
                for (int dy = 0; dy < 2; ++dy) {
                    for (int dx = 0; dx < 2; ++dx) {
                        const auto idx = in.index(c, 2 * y + dy, 2 * x + dx);
                        if (in.v[idx] > best) {
                            best = in.v[idx];
                            best_idx = static_cast<int>(idx);
                        }
                    }
                }
                out.v[o] = best;
                argmax[o] = best_idx;
            }
        }
    }
}

void maxpool2_backward(const std::vector<int>& argmax, const Tensor3& g_out, Tensor3& g_in) {
    for (std::size_t o = 0; o < g_out.size(); ++o)
        g_in.v[static_cast<std::size_t>(argmax[o])] += g_out.v[o];
}

}  // namespace detail

namespace {

void dense_forward(const std::vector<double>& in, const std::vector<double>& w, int out_n,
                   std::vector<double>& out) {
    const std::size_t in_n = in.size();
    out.assign(static_cast<std::size_t>(out_n), 0.0);
    for (int o = 0; o < out_n; ++o) {
        const double* row = w.data() + static_cast<std::size_t>(o) * in_n;
        double acc = 0.0;
        for (std::size_t i = 0; i < in_n; ++i) acc += row[i] * in[i];
        out[static_cast<std::size_t>(o)] = acc;
    }
}

std::vector<double> quantized_weights(const Layer& l, ForwardMode mode) {
    if (!l.quant) return l.weights;
    std::vector<double> wq(l.weights.size());
    if (mode == ForwardMode::InferHard) {
        for (std::size_t i = 0; i < wq.size(); ++i)
            wq[i] = quantize_step(l.weights[i], *l.quant, l.qstate);
    } else {
        for (std::size_t i = 0; i < wq.size(); ++i)
            wq[i] = quantize_soft(l.weights[i], *l.quant, l.qstate);
    }
    return wq;
}

void append_i32(std::vector<std::uint8_t>& sig, int v) {
    const auto u = static_cast<std::uint32_t>(v);
    sig.push_back(static_cast<std::uint8_t>(u));
    sig.push_back(static_cast<std::uint8_t>(u >> 8));
    sig.push_back(static_cast<std::uint8_t>(u >> 16));
    sig.push_back(static_cast<std::uint8_t>(u >> 24));
}

}  // namespace

ForwardResult forward(const Network& net, const FrameTensor& sample, ForwardMode mode) {
    const auto& layers = net.layers();
    const auto& spec = net.spec();
    if (static_cast<int>(sample.frames.size()) != spec.timesteps)
        throw std::invalid_argument("sample provides " + std::to_string(sample.frames.size()) +
                                    " frames, network expects " +
                                    std::to_string(spec.timesteps));
    for (const auto& f : sample.frames) {
        if (f.c != spec.in_channels || f.h != spec.in_h || f.w != spec.in_w)
            throw std::invalid_argument("frame shape does not match the network input");
    }

    const bool record = mode != ForwardMode::InferHard;
    const LifParams& lp = spec.lif_params;
    const SurrogateParams& sp = spec.surrogate;

    ForwardResult res;
    ActivationTape& tape = res.tape;
    tape.mode = mode;
    tape.timesteps = spec.timesteps;
    tape.param_stamp = net.param_stamp();
    tape.inputs.resize(layers.size());
    tape.wq.resize(layers.size());
    tape.lif.resize(layers.size());
    tape.argmax.resize(layers.size());

    std::vector<std::vector<double>> wq(layers.size());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (!layers[l].synaptic()) continue;
        wq[l] = quantized_weights(layers[l], mode);
        if (record) tape.wq[l] = wq[l];
    }

    // membrane state per lif layer, reset potential everywhere at t = 0
    std::vector<std::vector<double>> membrane(layers.size());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (layers[l].spec.kind == LayerKind::Lif)
            membrane[l].assign(static_cast<std::size_t>(layers[l].out_c) * layers[l].out_h *
                                   layers[l].out_w,
                               lp.v_reset);
    }

    res.out_rates.assign(static_cast<std::size_t>(net.n_classes()), 0.0);

    for (int t = 0; t < spec.timesteps; ++t) {
        Tensor3 cur = sample.frames[static_cast<std::size_t>(t)];
        for (std::size_t l = 0; l < layers.size(); ++l) {
            const Layer& layer = layers[l];
            switch (layer.spec.kind) {
                case LayerKind::Conv2d: {
                    if (record) tape.inputs[l].push_back(cur.v);
                    Tensor3 out(layer.out_c, layer.out_h, layer.out_w);
                    detail::conv2d_forward(cur, wq[l], layer.spec.kernel, out);
                    cur = std::move(out);
                    break;
                }
                case LayerKind::Dense: {
                    if (record) tape.inputs[l].push_back(cur.v);
                    Tensor3 out(layer.out_c, 1, 1);
                    dense_forward(cur.v, wq[l], layer.out_c, out.v);
                    cur = std::move(out);
                    break;
                }
                case LayerKind::MaxPool2: {
                    Tensor3 out(layer.out_c, layer.out_h, layer.out_w);
                    std::vector<int> argmax;
                    detail::maxpool2_forward(cur, out, argmax);
                    if (record) {
                        for (int a : argmax) append_i32(tape.signature, a);
                        tape.argmax[l].push_back(std::move(argmax));
                    }
                    cur = std::move(out);
                    break;
                }
                case LayerKind::Lif: {
                    auto& v = membrane[l];
                    std::vector<double> h(cur.size());
                    std::vector<double> s(cur.size());
                    for (std::size_t i = 0; i < cur.size(); ++i) {
                        h[i] = lif_charge(v[i], cur.v[i], lp);
                        const double u = h[i] - lp.v_threshold;
                        s[i] = mode == ForwardMode::GradcheckSmooth ? surrogate_transfer(u, sp)
                                                                    : fire(h[i], lp);
                        v[i] = reset(h[i], s[i], lp);
                        if (record)
                            tape.signature.push_back(
                                static_cast<std::uint8_t>(surrogate_region(u, sp)));
                    }
                    if (record) {
                        tape.lif[l].h.push_back(h);
                        tape.lif[l].s.push_back(s);
                        tape.lif[l].v.push_back(v);
                    }
                    cur.v = std::move(s);
                    break;
                }
                case LayerKind::VotingAvgPool: {
                    const int window = layer.spec.window;
                    Tensor3 out(layer.out_c, 1, 1);
                    for (int n = 0; n < layer.out_c; ++n) {
                        double acc = 0.0;
                        for (int j = 0; j < window; ++j)
                            acc += cur.v[static_cast<std::size_t>(n) * window + j];
                        out.v[static_cast<std::size_t>(n)] = acc / window;
                    }
                    cur = std::move(out);
                    break;
                }
            }
        }
        tape.voted.push_back(cur.v);
        for (std::size_t n = 0; n < res.out_rates.size(); ++n) res.out_rates[n] += cur.v[n];
    }
    for (auto& r : res.out_rates) r /= spec.timesteps;
    return res;
}

double mse_loss(const std::vector<std::vector<double>>& voted, int label, int n_classes) {
    if (voted.empty()) throw std::invalid_argument("mse_loss needs at least one timestep");
    if (label < 0 || label >= n_classes)
        throw std::invalid_argument("label " + std::to_string(label) + " outside [0, " +
                                    std::to_string(n_classes) + ")");
    double acc = 0.0;
    for (const auto& row : voted) {
        if (static_cast<int>(row.size()) != n_classes)
            throw std::invalid_argument("voted row size does not match n_classes");
        for (int n = 0; n < n_classes; ++n) {
            const double y = n == label ? 1.0 : 0.0;
            const double d = row[static_cast<std::size_t>(n)] - y;
            acc += d * d;
        }
    }
    return acc / (static_cast<double>(voted.size()) * n_classes);
}

Gradients backward(const Network& net, const ActivationTape& tape, int label) {
    const auto& layers = net.layers();
    const auto& spec = net.spec();
    if (tape.mode == ForwardMode::InferHard)
        throw std::invalid_argument("backward needs a tape from a training-mode forward");
    if (tape.param_stamp != net.param_stamp())
        throw std::invalid_argument("tape was recorded for different parameters");
    if (label < 0 || label >= net.n_classes())
        throw std::invalid_argument("label outside the class range");

    const int T = tape.timesteps;
    const int N = net.n_classes();
    const LifParams& lp = spec.lif_params;
    const SurrogateParams& sp = spec.surrogate;
    const double inv_tau = 1.0 / lp.tau;

    Gradients out;
    out.layers.resize(layers.size());
    std::vector<std::vector<double>> d_wq(layers.size());
    std::vector<std::vector<double>> carry(layers.size());  // dL/dV(t) arriving from t+1
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (layers[l].synaptic()) d_wq[l].assign(layers[l].weight_count(), 0.0);
        if (layers[l].spec.kind == LayerKind::Lif)
            carry[l].assign(static_cast<std::size_t>(layers[l].out_c) * layers[l].out_h *
                                layers[l].out_w,
                            0.0);
    }

    for (int t = T - 1; t >= 0; --t) {
        const auto& voted = tape.voted[static_cast<std::size_t>(t)];
        std::vector<double> g(static_cast<std::size_t>(N));
        for (int n = 0; n < N; ++n) {
            const double y = n == label ? 1.0 : 0.0;
            g[static_cast<std::size_t>(n)] =
                2.0 * (voted[static_cast<std::size_t>(n)] - y) / (static_cast<double>(T) * N);
        }

        for (std::size_t li = layers.size(); li-- > 0;) {
            const Layer& layer = layers[li];
            switch (layer.spec.kind) {
                case LayerKind::VotingAvgPool: {
                    const int window = layer.spec.window;
                    std::vector<double> g_in(static_cast<std::size_t>(layer.in_c));
                    for (int j = 0; j < layer.in_c; ++j)
                        g_in[static_cast<std::size_t>(j)] =
                            g[static_cast<std::size_t>(j / window)] / window;
                    g = std::move(g_in);
                    break;
                }
                case LayerKind::Lif: {
                    const auto& h = tape.lif[li].h[static_cast<std::size_t>(t)];
                    const auto& s = tape.lif[li].s[static_cast<std::size_t>(t)];
                    auto& c = carry[li];
                    for (std::size_t i = 0; i < g.size(); ++i) {
                        // V = H(1-S) + v_reset*S: credit reaches S both from the
                        // next layer and from the reset gate, then H through the
                        // surrogate and the kept-membrane path
                        const double g_s = g[i] + c[i] * (lp.v_reset - h[i]);
                        const double g_h =
                            g_s * surrogate_grad(h[i] - lp.v_threshold, sp) + c[i] * (1.0 - s[i]);
                        c[i] = g_h * (1.0 - inv_tau);
                        g[i] = g_h * inv_tau;  // dH/dX = 1/tau
                    }
                    break;
                }
                case LayerKind::MaxPool2: {
                    const auto& argmax = tape.argmax[li][static_cast<std::size_t>(t)];
                    std::vector<double> g_in(
                        static_cast<std::size_t>(layer.in_c) * layer.in_h * layer.in_w, 0.0);
                    for (std::size_t o = 0; o < g.size(); ++o)
                        g_in[static_cast<std::size_t>(argmax[o])] += g[o];
                    g = std::move(g_in);
                    break;
                }
                case LayerKind::Dense: {
                    const auto& in = tape.inputs[li][static_cast<std::size_t>(t)];
                    const auto& wq = tape.wq[li];
                    auto& dw = d_wq[li];
                    const std::size_t in_n = in.size();
                    std::vector<double> g_in(in_n, 0.0);
                    for (int o = 0; o < layer.out_c; ++o) {
                        const double go = g[static_cast<std::size_t>(o)];
                        if (go == 0.0) continue;
                        const std::size_t base = static_cast<std::size_t>(o) * in_n;
                        for (std::size_t i = 0; i < in_n; ++i) {
                            dw[base + i] += go * in[i];
                            g_in[i] += go * wq[base + i];
                        }
                    }
                    g = std::move(g_in);
                    break;
                }
                case LayerKind::Conv2d: {
                    const auto& in_v = tape.inputs[li][static_cast<std::size_t>(t)];
                    Tensor3 in(layer.in_c, layer.in_h, layer.in_w);
                    in.v = in_v;
                    Tensor3 g_out(layer.out_c, layer.out_h, layer.out_w);
                    g_out.v = std::move(g);
                    Tensor3 g_in(layer.in_c, layer.in_h, layer.in_w);
                    detail::conv2d_backward(in, tape.wq[li], layer.spec.kernel, g_out, d_wq[li],
                                            g_in);
                    g = std::move(g_in.v);
                    break;
                }
            }
        }
    }

    // chain through the quantizer: dL/dw = dL/dWq * dWq/dw, plus the scale
    // gradients accumulated across all weights of the layer
    for (std::size_t li = 0; li < layers.size(); ++li) {
        const Layer& layer = layers[li];
        if (!layer.synaptic()) continue;
        LayerGrads& lg = out.layers[li];
        if (!layer.quant) {
            lg.w = std::move(d_wq[li]);
            continue;
        }
        lg.w.assign(layer.weight_count(), 0.0);
        for (std::size_t i = 0; i < layer.weight_count(); ++i) {
            const double gq = d_wq[li][i];
            const QuantGrads qg = quantize_soft_grads(layer.weights[i], *layer.quant, layer.qstate);
            lg.w[i] = gq * qg.d_w;
            lg.alpha += gq * qg.d_alpha;
            lg.beta += gq * qg.d_beta;
        }
    }
    return out;
}

int argmax_class(const std::vector<double>& rates) {
    if (rates.empty()) throw std::invalid_argument("no class rates to rank");
    std::size_t best = 0;
    for (std::size_t n = 1; n < rates.size(); ++n)
        if (rates[n] > rates[best]) best = n;  // ties keep the lowest index
    return static_cast<int>(best);
}

int predict(const Network& net, const FrameTensor& sample) {
    return argmax_class(forward(net, sample, ForwardMode::InferHard).out_rates);
}

}  // namespace snnq
