#pragma once

#include <utility>
#include <vector>

namespace snnq {

// Leaky integrate-and-fire with hard reset. tau >= 1 (the membrane keeps a
// fraction 1 - 1/tau of its distance from rest each step).
struct LifParams {
    double tau = 2.0;
    double v_threshold = 1.0;
    double v_reset = 0.0;
};

void validate(const LifParams& p);

// Piecewise-constant stand-in for the spike derivative: 1/(2*half_width)
// inside |u| <= half_width, `leak` outside. leak > 0 keeps a faint gradient
// path for silent neurons.
struct SurrogateParams {
    double half_width = 1.0;
    double leak = 0.01;
};

void validate(const SurrogateParams& p);

// Membrane charge: H = v_prev + (x - (v_prev - v_reset)) / tau.
// dH/dx = 1/tau, dH/dv_prev = 1 - 1/tau.
double lif_charge(double v_prev, double x, const LifParams& p);
std::vector<double> lif_charge(const std::vector<double>& v_prev, const std::vector<double>& x,
                               const LifParams& p);

// Spike S = heaviside(H - v_threshold) with heaviside(0) = 1.
double fire(double h, const LifParams& p);
std::vector<double> fire(const std::vector<double>& h, const LifParams& p);

// Hard reset V = H * (1 - S) + v_reset * S. Also valid for fractional S as
// used by the smoothed gradient-check forward.
double reset(double h, double s, const LifParams& p);
std::vector<double> reset(const std::vector<double>& h, const std::vector<double>& s,
                          const LifParams& p);

double surrogate_grad(double u, const SurrogateParams& p);
std::vector<double> surrogate_grad(const std::vector<double>& u, const SurrogateParams& p);

// Continuous primitive of surrogate_grad with value 1/2 at u = 0. Replaces the
// heaviside when a differentiable forward is required (finite-difference
// validation); not used in training or inference paths.
double surrogate_transfer(double u, const SurrogateParams& p);

// Region of u relative to the surrogate window: 0 below, 1 inside, 2 above.
// A perturbation that changes the region crosses a kink of the transfer.
int surrogate_region(double u, const SurrogateParams& p);

struct LifTape {
    std::vector<std::vector<double>> h;  // charge per step
    std::vector<std::vector<double>> s;  // spikes per step
    std::vector<std::vector<double>> v;  // membrane after reset per step
};

// Unrolls charge/fire/reset over a sequence. v0 defaults to v_reset
// everywhere; samples do not share membrane state.
std::pair<std::vector<std::vector<double>>, LifTape> lif_sequence(
    const std::vector<std::vector<double>>& x_seq, const LifParams& p,
    const std::vector<double>* v0 = nullptr);

}  // namespace snnq
