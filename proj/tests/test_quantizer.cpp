#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "snnq/quantizer.hpp"
#include "snnq/rng.hpp"

using namespace snnq;

namespace {

// Naive sum-of-sigmoids, no branch shortcuts. The logistic itself is safe at
// any argument: exp overflows to inf and the quotient lands on 0 exactly.
double soft_reference(double w, const QuantSpec& spec, const LayerQuantState& st) {
    double acc = 0.0;
    for (std::size_t i = 0; i < spec.steps.size(); ++i) {
        const double z = st.temperature * (st.beta * w - spec.borders[i]);
        acc += spec.steps[i] / (1.0 + std::exp(-z));
    }
    return st.alpha * (acc - spec.offset);
}

double border_distance(double w, const QuantSpec& spec, double beta) {
    double d = 1e300;
    for (double b : spec.borders) d = std::min(d, std::fabs(beta * w - b));
    return d;
}

}  // namespace

TEST_SUITE_BEGIN("quantizer");

TEST_CASE("uniform level grids") {
    CHECK(QuantLevels::uniform(1).values() == std::vector<double>{-1.0, 1.0});
    CHECK(QuantLevels::uniform(2).values() == std::vector<double>{-1.0, 0.0, 1.0});

    auto q4 = QuantLevels::uniform(4).values();
    REQUIRE(q4.size() == 15);
    CHECK(q4.front() == -7.0);
    CHECK(q4.back() == 7.0);
    for (std::size_t i = 1; i < q4.size(); ++i) CHECK(q4[i] - q4[i - 1] == 1.0);

    auto q8 = QuantLevels::uniform(8).values();
    REQUIRE(q8.size() == 255);
    CHECK(q8.front() == -127.0);
    CHECK(q8.back() == 127.0);

    CHECK_THROWS(QuantLevels::uniform(3));
    CHECK_THROWS(QuantLevels::uniform(0));
    CHECK_THROWS(QuantLevels::uniform(16));
}

TEST_CASE("level validation") {
    CHECK_THROWS(QuantLevels({1.0}));
    CHECK_THROWS(QuantLevels({1.0, 1.0}));
    CHECK_THROWS(QuantLevels({1.0, -1.0}));
    CHECK_THROWS(QuantLevels({-2.0, 0.0, 1.0}));  // not symmetric
    CHECK_NOTHROW(QuantLevels({-3.0, -1.0, 1.0, 3.0}));
}

TEST_CASE("derived steps, borders, offset") {
    QuantSpec spec = derive_spec(QuantLevels({-1.0, 0.0, 1.0}));
    CHECK(spec.steps == std::vector<double>{1.0, 1.0});
    CHECK(spec.borders == std::vector<double>{-0.5, 0.5});
    CHECK(spec.offset == 1.0);

    QuantSpec one = derive_spec(QuantLevels::uniform(1));
    CHECK(one.steps == std::vector<double>{2.0});
    CHECK(one.borders == std::vector<double>{0.0});
    CHECK(one.offset == 1.0);

    // Telescoping: q0 + sum(steps) - 2*offset lands back on q0.
    QuantSpec q8 = derive_spec(QuantLevels::uniform(8));
    double s = 0.0;
    for (double v : q8.steps) s += v;
    CHECK(q8.offset == s / 2.0);
}

TEST_CASE("hard staircase equals clamp-round oracle") {
    Rng rng(101);
    for (int bits : {1, 2, 4, 8}) {
        QuantSpec spec = derive_spec(QuantLevels::uniform(bits));
        const auto& levels = spec.levels.values();
        for (int it = 0; it < 4000; ++it) {
            LayerQuantState st;
            st.alpha = rng.uniform(0.01, 3.0);
            st.beta = rng.uniform(0.1, 3.0);
            const double w = rng.uniform(-2.0, 2.0) * spec.levels.max();
            if (border_distance(w, spec, st.beta) < 1e-9) continue;
            CHECK(quantize_step(w, spec, st) ==
                  oracle::clamp_round_quant(w, st.alpha, st.beta, levels));
        }
    }
}

TEST_CASE("border ties take the upper level") {
    QuantSpec spec = derive_spec(QuantLevels::uniform(2));
    LayerQuantState st;  // alpha = beta = 1
    CHECK(quantize_step(0.5, spec, st) == 1.0);
    CHECK(quantize_step(-0.5, spec, st) == 0.0);
    CHECK(quantize_index(0.5, spec, st) == 2);
    CHECK(quantize_index(-0.5, spec, st) == 1);

    QuantSpec one = derive_spec(QuantLevels::uniform(1));
    CHECK(quantize_step(0.0, one, st) == 1.0);
}

TEST_CASE("index agrees with the staircase value") {
    Rng rng(555);
    for (int bits : {1, 2, 4, 8}) {
        QuantSpec spec = derive_spec(QuantLevels::uniform(bits));
        for (int it = 0; it < 1000; ++it) {
            LayerQuantState st;
            st.alpha = rng.uniform(0.01, 2.0);
            st.beta = rng.uniform(0.1, 2.0);
            const double w = rng.uniform(-10.0, 10.0);
            const int k = quantize_index(w, spec, st);
            REQUIRE(k >= 0);
            REQUIRE(k < spec.levels.count());
            CHECK(quantize_step(w, spec, st) == st.alpha * spec.levels.values()[k]);
        }
    }
}

TEST_CASE("soft matches a naive sigmoid sum") {
    Rng rng(77);
    for (int bits : {1, 2, 4, 8}) {
        QuantSpec spec = derive_spec(QuantLevels::uniform(bits));
        for (int it = 0; it < 500; ++it) {
            LayerQuantState st;
            st.alpha = rng.uniform(0.01, 2.0);
            st.beta = rng.uniform(0.1, 2.0);
            st.temperature = rng.uniform(0.1, 200.0);
            const double w = rng.uniform(-1.5, 1.5) * spec.levels.max();
            const double got = quantize_soft(w, spec, st);
            const double want = soft_reference(w, spec, st);
            CHECK(got == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("soft approaches the staircase as temperature grows") {
    Rng rng(303);
    QuantSpec spec = derive_spec(QuantLevels::uniform(4));
    LayerQuantState st;
    st.alpha = 0.7;
    st.beta = 1.3;
    int checked = 0;
    for (int it = 0; it < 2000; ++it) {
        const double w = rng.uniform(-8.0, 8.0);
        if (border_distance(w, spec, st.beta) < 0.05) continue;
        ++checked;
        st.temperature = 1e5;
        CHECK(std::fabs(quantize_soft(w, spec, st) - quantize_step(w, spec, st)) < 1e-8);
    }
    CHECK(checked > 1000);
}

TEST_CASE("soft is monotone in w") {
    QuantSpec spec = derive_spec(QuantLevels::uniform(2));
    LayerQuantState st;
    st.temperature = 3.0;
    double prev = -1e300;
    for (double w = -2.0; w <= 2.0; w += 1e-3) {
        const double v = quantize_soft(w, spec, st);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("soft gradients match central differences") {
    Rng rng(909);
    const double h = 1e-6;
    for (int bits : {1, 2, 4, 8}) {
        QuantSpec spec = derive_spec(QuantLevels::uniform(bits));
        for (int it = 0; it < 300; ++it) {
            LayerQuantState st;
            st.alpha = rng.uniform(0.2, 2.0);
            st.beta = rng.uniform(0.5, 1.5);
            st.temperature = rng.uniform(0.5, 4.0);
            double w = rng.uniform(0.05, 1.2);
            if (rng.uniform01() < 0.5) w = -w;

            const QuantGrads g = quantize_soft_grads(w, spec, st);

            auto in_w = [&](double x) { return quantize_soft(x, spec, st); };
            auto in_a = [&](double a) {
                LayerQuantState s2 = st;
                s2.alpha = a;
                return quantize_soft(w, spec, s2);
            };
            auto in_b = [&](double b) {
                LayerQuantState s2 = st;
                s2.beta = b;
                return quantize_soft(w, spec, s2);
            };

            const double fd_w = oracle::central_diff(in_w, w, h);
            const double fd_a = oracle::central_diff(in_a, st.alpha, h);
            const double fd_b = oracle::central_diff(in_b, st.beta, h);

            CHECK(g.d_w == doctest::Approx(fd_w).epsilon(1e-6));
            CHECK(g.d_alpha == doctest::Approx(fd_a).epsilon(1e-6));
            CHECK(g.d_beta == doctest::Approx(fd_b).epsilon(1e-6));
        }
    }
}

TEST_CASE("alpha gradient is the forward through alpha") {
    Rng rng(4242);
    QuantSpec spec = derive_spec(QuantLevels::uniform(8));
    for (int it = 0; it < 200; ++it) {
        LayerQuantState st;
        st.alpha = rng.uniform(0.05, 3.0);
        st.beta = rng.uniform(0.1, 2.0);
        st.temperature = rng.uniform(0.5, 50.0);
        const double w = rng.uniform(-150.0, 150.0);
        const QuantGrads g = quantize_soft_grads(w, spec, st);
        const double v = quantize_soft(w, spec, st);
        CHECK(st.alpha * g.d_alpha == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("temperature schedule") {
    CHECK(temperature_at(0, 1.0, 2.0) == 1.0);
    CHECK(temperature_at(3, 1.0, 2.0) == 7.0);
    CHECK(temperature_at(10, 0.5, 0.0) == 0.5);
    CHECK_THROWS(temperature_at(0, 0.0, 2.0));   // starts at zero
    CHECK_THROWS(temperature_at(2, 1.0, -1.0));  // decays through zero
}

TEST_CASE("scale initialization") {
    Rng rng(21);
    for (int bits : {1, 2, 4, 8}) {
        QuantLevels levels = QuantLevels::uniform(bits);
        std::vector<double> w(64);
        for (auto& x : w) x = rng.uniform(-0.9, 0.9);
        w[17] = 1.25;  // known extreme
        const ScaleInit si = init_scales(w, levels);
        CHECK(si.beta == doctest::Approx(levels.max() / 1.25).epsilon(1e-12));
        CHECK(si.alpha * si.beta == doctest::Approx(1.0).epsilon(1e-12));
        // The largest weight maps exactly onto the top level.
        CHECK(si.beta * 1.25 == doctest::Approx(levels.max()).epsilon(1e-12));
    }

    std::vector<double> zeros(8, 0.0);
    const ScaleInit si = init_scales(zeros, QuantLevels::uniform(2));
    CHECK(si.alpha == 1.0);
    CHECK(si.beta == 1.0);
}

TEST_SUITE_END();
