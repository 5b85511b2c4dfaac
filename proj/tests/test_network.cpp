#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "snnq/network.hpp"
#include "snnq/presets.hpp"
#include "snnq/rng.hpp"

using namespace snnq;

namespace {

Tensor3 random_tensor(int c, int h, int w, Rng& rng) {
    Tensor3 t(c, h, w);
    for (auto& v : t.v) v = rng.uniform(-1.0, 1.0);
    return t;
}

// Straightforward quadruple loop with explicit zero padding.
Tensor3 conv_reference(const Tensor3& in, const std::vector<double>& weights, int out_c,
                       int kernel) {
    Tensor3 out(out_c, in.h, in.w);
    const int pad = kernel / 2;
    for (int oc = 0; oc < out_c; ++oc)
        for (int y = 0; y < in.h; ++y)
            for (int x = 0; x < in.w; ++x) {
                double acc = 0.0;
                for (int ic = 0; ic < in.c; ++ic)
                    for (int ky = 0; ky < kernel; ++ky)
                        for (int kx = 0; kx < kernel; ++kx) {
                            const int sy = y + ky - pad;
                            const int sx = x + kx - pad;
                            if (sy < 0 || sy >= in.h || sx < 0 || sx >= in.w) continue;
                            const std::size_t wi =
                                ((static_cast<std::size_t>(oc) * in.c + ic) * kernel + ky) *
                                    kernel +
                                kx;
                            acc += weights[wi] * in.at(ic, sy, sx);
                        }
                out.at(oc, y, x) = acc;
            }
    return out;
}

// Minimal hand net: 2 input features -> dense(4) -> lif -> vote(window 2).
Network hand_net(int timesteps) {
    NetworkSpec spec;
    spec.in_channels = 1;
    spec.in_h = 1;
    spec.in_w = 2;
    spec.timesteps = timesteps;
    spec.layers = {dense(4), lif(), voting_avgpool(2)};
    return build_network(spec, 0, 32);
}

FrameTensor constant_sample(int timesteps, double a, double b) {
    FrameTensor ft;
    ft.label = 0;
    for (int t = 0; t < timesteps; ++t) {
        Tensor3 f(1, 1, 2);
        f.at(0, 0, 0) = a;
        f.at(0, 0, 1) = b;
        ft.frames.push_back(f);
    }
    return ft;
}

}  // namespace

TEST_SUITE_BEGIN("network");

TEST_CASE("spec validation") {
    NetworkSpec spec;
    spec.in_h = 8;
    spec.in_w = 8;
    spec.timesteps = 4;

    SUBCASE("must end with voting") {
        spec.layers = {dense(10), lif()};
        CHECK_THROWS(validate(spec));
    }
    SUBCASE("synaptic layers need a lif") {
        spec.layers = {dense(10), voting_avgpool(5)};
        CHECK_THROWS(validate(spec));
    }
    SUBCASE("voting only at the end") {
        spec.layers = {voting_avgpool(2), dense(10), lif(), voting_avgpool(5)};
        CHECK_THROWS(validate(spec));
    }
    SUBCASE("a pool between conv and lif is fine") {
        spec.layers = {conv2d(4), maxpool2(), lif(), dense(10), lif(), voting_avgpool(5)};
        CHECK_NOTHROW(validate(spec));
    }
    SUBCASE("even kernels are rejected") {
        spec.layers = {conv2d(4, 4), lif(), dense(10), lif(), voting_avgpool(5)};
        CHECK_THROWS(build_network(spec, 0));
    }
    SUBCASE("pooling an empty grid is rejected") {
        spec.in_h = 1;
        spec.in_w = 8;
        spec.layers = {maxpool2(), dense(10), lif(), voting_avgpool(5)};
        CHECK_THROWS(build_network(spec, 0));
    }
    SUBCASE("voting window must divide the features") {
        spec.layers = {dense(10), lif(), voting_avgpool(3)};
        CHECK_THROWS(build_network(spec, 0));
    }
}

TEST_CASE("preset parameter counts") {
    CHECK(build_network(preset_network("micro"), 1).param_count() == 1352);
    CHECK(build_network(preset_network("desk-tiny"), 1).param_count() == 10832);
}

TEST_CASE("conv forward matches the reference") {
    Rng rng(31);
    for (int kernel : {1, 3, 5}) {
        const int in_c = 2, out_c = 3, h = 6, w = 5;
        Tensor3 in = random_tensor(in_c, h, w, rng);
        std::vector<double> weights(static_cast<std::size_t>(out_c) * in_c * kernel * kernel);
        for (auto& v : weights) v = rng.uniform(-1.0, 1.0);

        Tensor3 out(out_c, h, w);
        detail::conv2d_forward(in, weights, kernel, out);
        Tensor3 want = conv_reference(in, weights, out_c, kernel);
        REQUIRE(out.v.size() == want.v.size());
        for (std::size_t i = 0; i < out.v.size(); ++i)
            CHECK(out.v[i] == doctest::Approx(want.v[i]).epsilon(1e-12));
    }
}

TEST_CASE("conv backward matches central differences") {
    Rng rng(32);
    const int in_c = 2, out_c = 2, h = 4, w = 4, kernel = 3;
    Tensor3 in = random_tensor(in_c, h, w, rng);
    std::vector<double> weights(static_cast<std::size_t>(out_c) * in_c * kernel * kernel);
    for (auto& v : weights) v = rng.uniform(-1.0, 1.0);
    // Random linear functional of the output keeps the objective scalar.
    Tensor3 r = random_tensor(out_c, h, w, rng);

    auto objective = [&](const Tensor3& input, const std::vector<double>& wts) {
        Tensor3 out(out_c, h, w);
        detail::conv2d_forward(input, wts, kernel, out);
        double s = 0.0;
        for (std::size_t i = 0; i < out.v.size(); ++i) s += out.v[i] * r.v[i];
        return s;
    };

    std::vector<double> g_w(weights.size(), 0.0);
    Tensor3 g_in(in_c, h, w);
    detail::conv2d_backward(in, weights, kernel, r, g_w, g_in);

    const double fd_h = 1e-6;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        auto w2 = weights;
        w2[i] += fd_h;
        const double up = objective(in, w2);
        w2[i] -= 2 * fd_h;
        const double dn = objective(in, w2);
        CHECK(g_w[i] == doctest::Approx((up - dn) / (2 * fd_h)).epsilon(1e-6));
    }
    for (std::size_t i = 0; i < in.v.size(); ++i) {
        Tensor3 in2 = in;
        in2.v[i] += fd_h;
        const double up = objective(in2, weights);
        in2.v[i] -= 2 * fd_h;
        const double dn = objective(in2, weights);
        CHECK(g_in.v[i] == doctest::Approx((up - dn) / (2 * fd_h)).epsilon(1e-6));
    }
}

TEST_CASE("maxpool picks the first maximum and routes gradients back") {
    Tensor3 in(1, 2, 4);
    // Window (0..1, 0..1): tie between equal 3s; first in scan order wins.
    in.at(0, 0, 0) = 3.0;
    in.at(0, 1, 1) = 3.0;
    in.at(0, 0, 2) = -1.0;
    in.at(0, 0, 3) = -2.0;
    in.at(0, 1, 2) = -5.0;
    in.at(0, 1, 3) = -3.0;

    Tensor3 out(1, 1, 2);
    std::vector<int> argmax;
    detail::maxpool2_forward(in, out, argmax);
    CHECK(out.at(0, 0, 0) == 3.0);
    CHECK(out.at(0, 0, 1) == -1.0);
    REQUIRE(argmax.size() == 2);
    CHECK(argmax[0] == static_cast<int>(in.index(0, 0, 0)));  // first of the tied pair
    CHECK(argmax[1] == static_cast<int>(in.index(0, 0, 2)));

    Tensor3 g_out(1, 1, 2);
    g_out.at(0, 0, 0) = 0.5;
    g_out.at(0, 0, 1) = -0.25;
    Tensor3 g_in(1, 2, 4);
    detail::maxpool2_backward(argmax, g_out, g_in);
    CHECK(g_in.at(0, 0, 0) == 0.5);
    CHECK(g_in.at(0, 1, 1) == 0.0);  // loser of the tie gets nothing
    CHECK(g_in.at(0, 0, 2) == -0.25);
    double total = 0.0;
    for (double v : g_in.v) total += std::fabs(v);
    CHECK(total == 0.75);
}

TEST_CASE("odd trailing rows are dropped by the pool") {
    Tensor3 in(1, 3, 3);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) in.at(0, y, x) = y * 3 + x;
    Tensor3 out(1, 1, 1);
    std::vector<int> argmax;
    detail::maxpool2_forward(in, out, argmax);
    CHECK(out.at(0, 0, 0) == 4.0);  // max of the 2x2 corner only
}

TEST_CASE("mse loss against a one-hot target") {
    // Two timesteps, two classes.
    std::vector<std::vector<double>> voted = {{1.0, 0.0}, {0.5, 0.5}};
    // t0: (1-1)^2 + 0^2 = 0; t1: 0.25 + 0.25 = 0.5. Mean over 2*2.
    CHECK(mse_loss(voted, 0, 2) == doctest::Approx(0.125));
    // Label 1: t0 contributes 1 + 1, t1 contributes 0.25 + 0.25.
    CHECK(mse_loss(voted, 1, 2) == doctest::Approx(2.5 / 4.0));
    CHECK_THROWS(mse_loss(voted, 2, 2));
    CHECK_THROWS(mse_loss(voted, -1, 2));
}

TEST_CASE("voting averages spikes over window and time") {
    Network net = hand_net(2);
    auto& dense_layer = net.layers()[0];
    REQUIRE(dense_layer.weights.size() == 8);
    // Feature j fires iff weight row j drives x = (2, 0) above threshold:
    // H = (w_j0 * 2) / tau = w_j0. Rows 0 and 1 spike every step.
    std::vector<double> w = {
        1.0, 0.0,   // feature 0: H = 1, spikes
        2.0, 0.0,   // feature 1: H = 2, spikes
        0.5, 0.0,   // feature 2: silent at t0; accumulates
        -1.0, 0.0,  // feature 3: never
    };
    dense_layer.weights = w;

    FrameTensor sample = constant_sample(2, 2.0, 0.0);
    ForwardResult res = forward(net, sample, ForwardMode::InferHard);
    REQUIRE(res.out_rates.size() == 2);
    // Class 0 = mean(feature 0, feature 1) = 1 at both steps.
    CHECK(res.out_rates[0] == 1.0);
    // Feature 2: H(t0) = 0.5, H(t1) = 0.75, silent; class 1 stays 0.
    CHECK(res.out_rates[1] == 0.0);

    ForwardResult hard = forward(net, sample, ForwardMode::TrainSoft);
    CHECK(hard.out_rates == res.out_rates);  // no quantizers: modes agree
}

TEST_CASE("hard inference equals soft forward at high temperature") {
    NetworkSpec spec = preset_network("micro");
    Network net = build_network(spec, 5, 2);
    net.set_temperature(1e8);

    SyntheticSpec ss = preset_synthetic("micro");
    ss.samples_per_class = 2;
    auto streams = gen_synthetic(ss, 5);
    for (const auto& s : streams) {
        FrameTensor sample = events_to_frames(s, net.timesteps());
        auto hard = forward(net, sample, ForwardMode::InferHard);
        auto soft = forward(net, sample, ForwardMode::TrainSoft);
        REQUIRE(hard.out_rates.size() == soft.out_rates.size());
        for (std::size_t i = 0; i < hard.out_rates.size(); ++i)
            CHECK(hard.out_rates[i] == doctest::Approx(soft.out_rates[i]).epsilon(1e-9));
    }
}

TEST_CASE("backward rejects stale or non-training tapes") {
    Network net = build_network(preset_network("micro"), 2, 2);
    SyntheticSpec ss = preset_synthetic("micro");
    ss.samples_per_class = 1;
    auto streams = gen_synthetic(ss, 2);
    FrameTensor sample = events_to_frames(streams[0], net.timesteps());

    auto hard = forward(net, sample, ForwardMode::InferHard);
    CHECK_THROWS(backward(net, hard.tape, 0));

    auto soft = forward(net, sample, ForwardMode::TrainSoft);
    CHECK_THROWS(backward(net, soft.tape, 99));  // label out of range
    CHECK_NOTHROW(backward(net, soft.tape, 0));

    net.layers()[0].weights[0] += 0.5;  // tape no longer matches the weights
    CHECK_THROWS(backward(net, soft.tape, 0));
}

TEST_CASE("smooth-mode gradient points downhill") {
    Network net = build_network(preset_network("micro"), 3, 2);
    SyntheticSpec ss = preset_synthetic("micro");
    ss.samples_per_class = 1;
    auto streams = gen_synthetic(ss, 3);
    FrameTensor sample = events_to_frames(streams[0], net.timesteps());
    const int label = sample.label;

    auto res = forward(net, sample, ForwardMode::GradcheckSmooth);
    const double loss0 = mse_loss(res.tape.voted, label, net.n_classes());
    Gradients g = backward(net, res.tape, label);

    double norm2 = 0.0;
    for (const auto& lg : g.layers)
        for (double v : lg.w) norm2 += v * v;
    REQUIRE(norm2 > 0.0);

    const double step = 1e-3 / std::sqrt(norm2);
    for (std::size_t li = 0; li < g.layers.size(); ++li) {
        auto& w = net.layers()[li].weights;
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= step * g.layers[li].w[i];
    }
    auto res2 = forward(net, sample, ForwardMode::GradcheckSmooth);
    CHECK(mse_loss(res2.tape.voted, label, net.n_classes()) < loss0);
}

TEST_CASE("prediction breaks ties toward the lower class") {
    CHECK(argmax_class({0.3, 0.3}) == 0);
    CHECK(argmax_class({0.1, 0.4, 0.4}) == 1);
    CHECK(argmax_class({0.0, 0.0, 0.1}) == 2);
}

TEST_CASE("forward validates the sample shape") {
    Network net = build_network(preset_network("micro"), 1, 32);
    FrameTensor bad;
    bad.label = 0;
    for (int t = 0; t < net.timesteps(); ++t) bad.frames.emplace_back(2, 4, 4);  // wrong dims
    CHECK_THROWS(forward(net, bad, ForwardMode::InferHard));

    FrameTensor wrong_t;
    wrong_t.label = 0;
    for (int t = 0; t < net.timesteps() + 1; ++t) wrong_t.frames.emplace_back(2, 8, 8);
    CHECK_THROWS(forward(net, wrong_t, ForwardMode::InferHard));
}

TEST_SUITE_END();
