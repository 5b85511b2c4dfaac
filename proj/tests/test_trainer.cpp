#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "snnq/data.hpp"
#include "snnq/network.hpp"
#include "snnq/presets.hpp"
#include "snnq/trainer.hpp"

using namespace snnq;

namespace {

std::vector<FrameTensor> micro_frames(int samples_per_class, std::uint64_t seed, int timesteps) {
    SyntheticSpec ss = preset_synthetic("micro");
    ss.samples_per_class = samples_per_class;
    auto streams = gen_synthetic(ss, seed);
    std::vector<FrameTensor> frames;
    for (const auto& s : streams) frames.push_back(events_to_frames(s, timesteps));
    return frames;
}

}  // namespace

TEST_SUITE_BEGIN("trainer");

TEST_CASE("cosine schedule endpoints") {
    CHECK(cosine_lr(0, 0.1, 64) == doctest::Approx(0.1));
    CHECK(cosine_lr(64, 0.1, 64) == doctest::Approx(0.0));
    CHECK(cosine_lr(32, 0.1, 64) == doctest::Approx(0.05));
    CHECK(cosine_lr(200, 0.1, 64) == doctest::Approx(0.0));  // held at zero past t_max
    CHECK(cosine_lr(16, 1.0, 64) == doctest::Approx(0.5 * (1.0 + std::cos(M_PI * 0.25))));
    CHECK_THROWS(cosine_lr(0, -0.1, 64));
    CHECK_THROWS(cosine_lr(0, 0.1, 0));
    CHECK_THROWS(cosine_lr(-1, 0.1, 64));
}

TEST_CASE("adam with a constant gradient") {
    std::vector<double> p = {1.0};
    std::vector<double> g = {1.0};
    AdamState st;
    AdamParams ap;
    // Bias-corrected m and v are exactly 1 for a constant unit gradient, so
    // every step subtracts lr / (1 + eps).
    adam_step(p, g, st, 0.1, ap, "test");
    adam_step(p, g, st, 0.1, ap, "test");
    const double per_step = 0.1 / (1.0 + ap.eps);
    CHECK(p[0] == doctest::Approx(1.0 - 2 * per_step).epsilon(1e-12));
    CHECK(st.step == 2);

    // Flipping the sign pulls the other way.
    g[0] = -1.0;
    for (int i = 0; i < 50; ++i) adam_step(p, g, st, 0.1, ap, "test");
    CHECK(p[0] > 1.0 - 2 * per_step);
}

TEST_CASE("adam rejects bad input") {
    std::vector<double> p = {1.0, 2.0};
    AdamState st;
    AdamParams ap;
    std::vector<double> nan_g = {0.0, std::numeric_limits<double>::quiet_NaN()};
    CHECK_THROWS_WITH(adam_step(p, nan_g, st, 0.1, ap, "conv0.weights"),
                      doctest::Contains("conv0.weights"));
    std::vector<double> short_g = {0.0};
    AdamState st2;
    CHECK_THROWS(adam_step(p, short_g, st2, 0.1, ap, "x"));
}

TEST_CASE("temperature schedule with a zero start") {
    TrainConfig cfg;
    cfg.t0 = 1.0;
    cfg.t_rate = 2.0;
    CHECK(schedule_temperature(cfg, 0) == 1.0);
    CHECK(schedule_temperature(cfg, 3) == 7.0);
    cfg.t0 = 0.0;
    cfg.t_rate = 5.0;
    CHECK(schedule_temperature(cfg, 0) == 5.0);  // clamped off zero
    CHECK(schedule_temperature(cfg, 2) == 10.0);
    cfg.t_rate = 0.0;
    CHECK_THROWS(schedule_temperature(cfg, 0));
}

TEST_CASE("evaluation is thread-count independent") {
    Network net = build_network(preset_network("micro"), 4, 32);
    auto frames = micro_frames(6, 4, net.timesteps());
    const double a1 = evaluate(net, frames, 1);
    const double a3 = evaluate(net, frames, 3);
    CHECK(a1 == a3);
    CHECK(a1 >= 0.0);
    CHECK(a1 <= 1.0);
}

TEST_CASE("training runs and repeats bit for bit") {
    auto frames = micro_frames(8, 12, 4);
    auto [train_set, test_set] = split(frames, 0.25, 12);

    TrainConfig cfg;
    cfg.epochs = 3;
    cfg.t_max = 8;
    cfg.batch_size = 4;
    cfg.seed = 12;
    cfg.bits = 2;

    Network a = build_network(preset_network("micro"), 12, 2);
    Network b = build_network(preset_network("micro"), 12, 2);
    TrainHistory ha = train(a, train_set, test_set, cfg);
    TrainHistory hb = train(b, train_set, test_set, cfg);

    REQUIRE(ha.records.size() == 3);
    REQUIRE(hb.records.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(ha.records[i].lr == cosine_lr(static_cast<long>(i), cfg.lr0, cfg.t_max));
        CHECK(ha.records[i].temperature == schedule_temperature(cfg, static_cast<long>(i)));
        CHECK(std::isfinite(ha.records[i].train_loss));
        // Bitwise repeatability.
        CHECK(ha.records[i].train_loss == hb.records[i].train_loss);
        CHECK(ha.records[i].train_acc == hb.records[i].train_acc);
        CHECK(ha.records[i].test_acc == hb.records[i].test_acc);
    }
    for (std::size_t li = 0; li < a.layers().size(); ++li) {
        CHECK(a.layers()[li].weights == b.layers()[li].weights);
        CHECK(a.layers()[li].qstate.alpha == b.layers()[li].qstate.alpha);
        CHECK(a.layers()[li].qstate.beta == b.layers()[li].qstate.beta);
    }
}

TEST_CASE("thread count does not change the training result") {
    auto frames = micro_frames(6, 9, 4);
    auto [train_set, test_set] = split(frames, 0.25, 9);

    TrainConfig cfg;
    cfg.epochs = 2;
    cfg.batch_size = 4;
    cfg.seed = 9;
    cfg.bits = 2;

    Network a = build_network(preset_network("micro"), 9, 2);
    Network b = build_network(preset_network("micro"), 9, 2);
    cfg.threads = 1;
    TrainHistory ha = train(a, train_set, test_set, cfg);
    cfg.threads = 4;
    TrainHistory hb = train(b, train_set, test_set, cfg);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(ha.records[i].train_loss == hb.records[i].train_loss);
        CHECK(ha.records[i].test_acc == hb.records[i].test_acc);
    }
    for (std::size_t li = 0; li < a.layers().size(); ++li)
        CHECK(a.layers()[li].weights == b.layers()[li].weights);
}

TEST_CASE("scales stay above the floor") {
    auto frames = micro_frames(4, 3, 4);
    auto [train_set, test_set] = split(frames, 0.25, 3);
    TrainConfig cfg;
    cfg.epochs = 4;
    cfg.batch_size = 4;
    cfg.seed = 3;
    cfg.bits = 1;
    cfg.lr0 = 0.05;  // aggressive on purpose
    Network net = build_network(preset_network("micro"), 3, 1);
    train(net, train_set, test_set, cfg);
    for (const auto& l : net.layers()) {
        if (!l.quant) continue;
        CHECK(l.qstate.alpha >= 1e-6);
        CHECK(l.qstate.beta >= 1e-6);
    }
}

TEST_CASE("history csv layout") {
    TrainHistory h;
    h.records.push_back({0, 1e-3, 1.0, 0.25, 0.5, 0.375});
    h.records.push_back({1, 9.99e-4, 3.0, 0.125, 0.75, 0.625});
    const std::string path = "test_trainer_history.csv";
    write_history_csv(h, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "epoch,lr,temperature,train_loss,train_acc,test_acc");
    std::getline(in, line);
    CHECK(line == "0,0.001,1,0.25,0.5,0.375");
    std::getline(in, line);
    CHECK(line == "1,0.000999,3,0.125,0.75,0.625");
    CHECK_FALSE(std::getline(in, line));
    in.close();
    std::remove(path.c_str());
}

TEST_CASE("gradcheck validates the quantized pipeline") {
    Network net = build_network(preset_network("micro"), 17, 2);
    auto frames = micro_frames(1, 17, net.timesteps());

    GradcheckReport rep = gradcheck(net, frames.front(), 1e-5);
    CHECK(rep.n_coordinates > 1352);  // weights plus the quantizer scales
    CHECK(rep.max_rel_err < 1e-3);
    CHECK(rep.flip_fraction < 0.02);
    CHECK(rep.passed);
    CHECK_FALSE(rep.worst_coordinate.empty());

    CHECK_THROWS(gradcheck(net, frames.front(), 0.0));
}

TEST_SUITE_END();
