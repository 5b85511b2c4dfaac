#include "snnq/neuron.hpp"

#include <cmath>
#include <stdexcept>

namespace snnq {

void validate(const LifParams& p) {
    if (!(p.tau >= 1.0)) throw std::invalid_argument("lif tau must be >= 1");
    if (!(p.v_threshold > p.v_reset))
        throw std::invalid_argument("lif threshold must exceed reset potential");
}

void validate(const SurrogateParams& p) {
    if (!(p.half_width > 0.0)) throw std::invalid_argument("surrogate half_width must be positive");
    if (p.leak < 0.0) throw std::invalid_argument("surrogate leak must be non-negative");
}

static void check_same_size(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("lif state and input sizes differ");
}

double lif_charge(double v_prev, double x, const LifParams& p) {
    return v_prev + (x - (v_prev - p.v_reset)) / p.tau;
}

std::vector<double> lif_charge(const std::vector<double>& v_prev, const std::vector<double>& x,
                               const LifParams& p) {
    check_same_size(v_prev.size(), x.size());
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = lif_charge(v_prev[i], x[i], p);
    return out;
}

double fire(double h, const LifParams& p) { return h >= p.v_threshold ? 1.0 : 0.0; }

std::vector<double> fire(const std::vector<double>& h, const LifParams& p) {
    std::vector<double> out(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) out[i] = fire(h[i], p);
    return out;
}

double reset(double h, double s, const LifParams& p) {
    return h * (1.0 - s) + p.v_reset * s;
}

std::vector<double> reset(const std::vector<double>& h, const std::vector<double>& s,
                          const LifParams& p) {
    check_same_size(h.size(), s.size());
    std::vector<double> out(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) out[i] = reset(h[i], s[i], p);
    return out;
}

double surrogate_grad(double u, const SurrogateParams& p) {
    return std::abs(u) <= p.half_width ? 1.0 / (2.0 * p.half_width) : p.leak;
}

std::vector<double> surrogate_grad(const std::vector<double>& u, const SurrogateParams& p) {
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = surrogate_grad(u[i], p);
    return out;
}

double surrogate_transfer(double u, const SurrogateParams& p) {
    if (u < -p.half_width) return p.leak * (u + p.half_width);
    if (u > p.half_width) return 1.0 + p.leak * (u - p.half_width);
    return 0.5 + u / (2.0 * p.half_width);
}

int surrogate_region(double u, const SurrogateParams& p) {
    if (u < -p.half_width) return 0;
    if (u > p.half_width) return 2;
    return 1;
}

std::pair<std::vector<std::vector<double>>, LifTape> lif_sequence(
    const std::vector<std::vector<double>>& x_seq, const LifParams& p,
    const std::vector<double>* v0) {
    validate(p);
    if (x_seq.empty()) throw std::invalid_argument("lif_sequence needs at least one timestep");
    const std::size_t n = x_seq.front().size();
    std::vector<double> v = v0 ? *v0 : std::vector<double>(n, p.v_reset);
    check_same_size(v.size(), n);

    LifTape tape;
    std::vector<std::vector<double>> spikes;
    for (const auto& x : x_seq) {
        check_same_size(x.size(), n);
        auto h = lif_charge(v, x, p);
        auto s = fire(h, p);
        v = reset(h, s, p);
        tape.h.push_back(h);
        tape.s.push_back(s);
        tape.v.push_back(v);
        spikes.push_back(std::move(s));
    }
    return {std::move(spikes), std::move(tape)};
}

}  // namespace snnq
