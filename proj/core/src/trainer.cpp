#include "snnq/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "snnq/parallel.hpp"
#include "snnq/rng.hpp"
#include "snnq/serial.hpp"

namespace snnq {

double cosine_lr(long epoch, double lr0, long t_max) {
    if (epoch < 0) throw std::invalid_argument("epoch must be non-negative");
    if (lr0 < 0.0) throw std::invalid_argument("lr0 must be non-negative");
    if (t_max < 1) throw std::invalid_argument("t_max must be positive");
    const long e = std::min(epoch, t_max);  // hold at the floor, no restarts
    return 0.5 * lr0 *
           (1.0 + std::cos(std::numbers::pi * static_cast<double>(e) / static_cast<double>(t_max)));
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr, const AdamParams& ap, const std::string& name) {
    if (params.size() != grads.size())
        throw std::invalid_argument(name + ": gradient size does not match parameters");
    if (state.m.empty()) {
        state.m.assign(params.size(), 0.0);
        state.v.assign(params.size(), 0.0);
    }
    if (state.m.size() != params.size())
        throw std::invalid_argument(name + ": optimizer state size mismatch");

    for (double g : grads) {
        if (!std::isfinite(g))
            throw std::runtime_error("non-finite gradient in " + name);
    }

    ++state.step;
    const double bc1 = 1.0 - std::pow(ap.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(ap.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = ap.beta1 * state.m[i] + (1.0 - ap.beta1) * grads[i];
        state.v[i] = ap.beta2 * state.v[i] + (1.0 - ap.beta2) * grads[i] * grads[i];
        const double m_hat = state.m[i] / bc1;
        const double v_hat = state.v[i] / bc2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + ap.eps);
    }
}

double schedule_temperature(const TrainConfig& cfg, long epoch) {
    const double t = cfg.t0 + cfg.t_rate * static_cast<double>(epoch);
    if (t > 0.0) return t;
    if (cfg.t0 == 0.0 && cfg.t_rate > 0.0) return cfg.t_rate;  // clamp the epoch-0 start
    return temperature_at(epoch, cfg.t0, cfg.t_rate);          // raises the descriptive error
}

namespace {

constexpr double kScaleFloor = 1e-6;

struct SampleGrads {
    Gradients grads;
    double loss = 0.0;
};

int correct_count(const Network& net, const std::vector<FrameTensor>& dataset, int threads) {
    std::vector<std::uint8_t> hit(dataset.size(), 0);
    parallel_for(dataset.size(), threads, [&](std::size_t i) {
        hit[i] = predict(net, dataset[i]) == dataset[i].label ? 1 : 0;
    });
    int n = 0;
    for (auto h : hit) n += h;  // ordered reduction
    return n;
}

}  // namespace

double evaluate(const Network& net, const std::vector<FrameTensor>& dataset, int threads) {
    if (dataset.empty()) throw std::invalid_argument("evaluate needs a non-empty dataset");
    return static_cast<double>(correct_count(net, dataset, resolve_threads(threads))) /
           static_cast<double>(dataset.size());
}

TrainHistory train(Network& net, const std::vector<FrameTensor>& train_set,
                   const std::vector<FrameTensor>& test_set, const TrainConfig& cfg,
                   const std::function<void(const EpochRecord&)>& on_epoch) {
    if (train_set.empty() || test_set.empty())
        throw std::invalid_argument("training needs non-empty train and test splits");
    if (cfg.epochs < 1) throw std::invalid_argument("epochs must be positive");
    if (cfg.batch_size < 1) throw std::invalid_argument("batch_size must be positive");
    if (!(cfg.lr0 >= 0.0)) throw std::invalid_argument("learning rate must be non-negative");

    const int threads = resolve_threads(cfg.threads);
    auto& layers = net.layers();

    std::vector<AdamState> w_state(layers.size());
    std::vector<AdamState> scale_state(layers.size());

    std::vector<std::size_t> order(train_set.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng shuffle_rng(cfg.seed);

    TrainHistory history;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double temperature = schedule_temperature(cfg, epoch);
        if (net.quantized()) net.set_temperature(temperature);
        const double lr = cosine_lr(epoch, cfg.lr0, cfg.t_max);

        shuffle_rng.shuffle(order);

        double loss_sum = 0.0;
        std::size_t loss_count = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end =
                std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            const std::size_t b = end - start;

            std::vector<SampleGrads> per_sample(b);
            try {
                parallel_for(b, threads, [&](std::size_t i) {
                    const FrameTensor& sample = train_set[order[start + i]];
                    auto fr = forward(net, sample, ForwardMode::TrainSoft);
                    per_sample[i].loss = mse_loss(fr.tape.voted, sample.label, net.n_classes());
                    per_sample[i].grads = backward(net, fr.tape, sample.label);
                });
            } catch (const std::exception& e) {
                throw std::runtime_error("epoch " + std::to_string(epoch) + ", batch " +
                                         std::to_string(start / cfg.batch_size) + ": " + e.what());
            }

            for (const auto& sg : per_sample) {
                if (!std::isfinite(sg.loss))
                    throw std::runtime_error("non-finite loss at epoch " + std::to_string(epoch) +
                                             ", batch " + std::to_string(start / cfg.batch_size));
                loss_sum += sg.loss;
            }
            loss_count += b;

            // mean gradient over the batch, summed in sample order so the
            // result does not depend on the thread count
            for (std::size_t li = 0; li < layers.size(); ++li) {
                Layer& layer = layers[li];
                if (!layer.synaptic()) continue;

                std::vector<double> gw(layer.weight_count(), 0.0);
                double ga = 0.0, gb = 0.0;
                for (const auto& sg : per_sample) {
                    const LayerGrads& lg = sg.grads.layers[li];
                    for (std::size_t i = 0; i < gw.size(); ++i) gw[i] += lg.w[i];
                    ga += lg.alpha;
                    gb += lg.beta;
                }
                const double inv_b = 1.0 / static_cast<double>(b);
                for (auto& v : gw) v *= inv_b;

                adam_step(layer.weights, gw, w_state[li], lr, cfg.adam, layer.name + ".weights");
                if (layer.quant) {
                    double scales[2] = {layer.qstate.alpha, layer.qstate.beta};
                    const double sg2[2] = {ga * inv_b, gb * inv_b};
                    adam_step(std::span<double>(scales, 2), std::span<const double>(sg2, 2),
                              scale_state[li], lr, cfg.adam, layer.name + ".scales");
                    layer.qstate.alpha = std::max(scales[0], kScaleFloor);
                    layer.qstate.beta = std::max(scales[1], kScaleFloor);
                }
            }
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.lr = lr;
        rec.temperature = temperature;
        rec.train_loss = loss_sum / static_cast<double>(loss_count);
        rec.train_acc = evaluate(net, train_set, threads);
        rec.test_acc = evaluate(net, test_set, threads);
        history.records.push_back(rec);
        if (on_epoch) on_epoch(rec);
    }
    return history;
}

void write_history_csv(const TrainHistory& history, const std::string& path) {
    std::string out = "epoch,lr,temperature,train_loss,train_acc,test_acc\n";
    char line[256];
    for (const auto& r : history.records) {
        std::snprintf(line, sizeof(line), "%d,%.12g,%.12g,%.12g,%.12g,%.12g\n", r.epoch, r.lr,
                      r.temperature, r.train_loss, r.train_acc, r.test_acc);
        out += line;
    }
    write_file_atomic(path, out.data(), out.size());
}

namespace {

struct FlatParams {
    // views into the network: every weight, then alpha/beta per quantized layer
    struct Coord {
        std::size_t layer;
        std::size_t index;  // weight index, or 0 = alpha / 1 = beta when scale
        bool scale;
    };
    std::vector<Coord> coords;

    static FlatParams of(const Network& net) {
        FlatParams fp;
        const auto& layers = net.layers();
        for (std::size_t li = 0; li < layers.size(); ++li) {
            for (std::size_t i = 0; i < layers[li].weight_count(); ++i)
                fp.coords.push_back({li, i, false});
            if (layers[li].quant) {
                fp.coords.push_back({li, 0, true});
                fp.coords.push_back({li, 1, true});
            }
        }
        return fp;
    }

    static double& ref(Network& net, const Coord& c) {
        Layer& l = net.layers()[c.layer];
        if (!c.scale) return l.weights[c.index];
        return c.index == 0 ? l.qstate.alpha : l.qstate.beta;
    }

    static std::string describe(const Network& net, const Coord& c) {
        const Layer& l = net.layers()[c.layer];
        if (!c.scale) return l.name + ".w[" + std::to_string(c.index) + "]";
        return l.name + (c.index == 0 ? ".alpha" : ".beta");
    }
};

double analytic_coordinate(const Gradients& g, const FlatParams::Coord& c) {
    const LayerGrads& lg = g.layers[c.layer];
    if (!c.scale) return lg.w[c.index];
    return c.index == 0 ? lg.alpha : lg.beta;
}

}  // namespace

GradcheckReport gradcheck(Network& net, const FrameTensor& sample, double h, double threshold) {
    if (h == 0.0) throw std::invalid_argument("gradcheck step h must be non-zero");

    auto run = [&](std::vector<std::uint8_t>* signature) {
        auto fr = forward(net, sample, ForwardMode::GradcheckSmooth);
        if (signature) *signature = std::move(fr.tape.signature);
        return mse_loss(fr.tape.voted, sample.label, net.n_classes());
    };

    auto base = forward(net, sample, ForwardMode::GradcheckSmooth);
    const Gradients analytic = backward(net, base.tape, sample.label);
    const auto& base_sig = base.tape.signature;
    const double base_loss = mse_loss(base.tape.voted, sample.label, net.n_classes());

    const FlatParams fp = FlatParams::of(net);
    GradcheckReport report;
    report.n_coordinates = fp.coords.size();

    // Central differences cannot resolve gradient components below the
    // cancellation noise of l_plus - l_minus; coordinates that small get the
    // noise level as denominator so roundoff is not read as a mismatch.
    const double fd_noise = 1e3 * std::numeric_limits<double>::epsilon() *
                            std::max(1.0, std::abs(base_loss)) / (2.0 * std::abs(h));
    std::vector<std::uint8_t> sig_plus, sig_minus;
    for (const auto& c : fp.coords) {
        double& p = FlatParams::ref(net, c);
        const double saved = p;
        p = saved + h;
        const double l_plus = run(&sig_plus);
        p = saved - h;
        const double l_minus = run(&sig_minus);
        p = saved;

        if (sig_plus != base_sig || sig_minus != base_sig) {
            ++report.n_flipped;
            continue;
        }
        const double fd = (l_plus - l_minus) / (2.0 * h);
        const double an = analytic_coordinate(analytic, c);
        const double denom = std::max({std::abs(fd), std::abs(an), fd_noise});
        const double rel = std::abs(fd - an) / denom;
        if (rel > report.max_rel_err) {
            report.max_rel_err = rel;
            report.worst_coordinate = FlatParams::describe(net, c);
        }
    }
    report.flip_fraction = report.n_coordinates == 0
                               ? 0.0
                               : static_cast<double>(report.n_flipped) /
                                     static_cast<double>(report.n_coordinates);
    report.passed = report.max_rel_err < threshold;
    return report;
}

}  // namespace snnq
