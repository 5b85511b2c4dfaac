#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "snnq/data.hpp"
#include "snnq/network.hpp"

namespace snnq {

// Half-cosine decay from lr0 to 0 over t_max epochs, held at 0 afterwards.
double cosine_lr(long epoch, double lr0, long t_max);

struct AdamParams {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// First/second moment estimates for one parameter block.
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    long step = 0;
};

// Bias-corrected Adam update, in place. Rejects non-finite gradients with the
// owning parameter block named in the error.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr, const AdamParams& ap, const std::string& name);

struct TrainConfig {
    int epochs = 500;
    double lr0 = 1e-3;
    int t_max = 64;      // cosine horizon
    int batch_size = 16;
    std::uint64_t seed = 0;
    int bits = 32;       // kept with the run for bookkeeping
    double t0 = 1.0;     // temperature schedule intercept
    double t_rate = 2.0; // temperature added per epoch
    AdamParams adam{};
    int threads = 0;     // 0 = hardware concurrency (capped by SNNQ_THREADS)
};

// Temperature for an epoch: t0 + t_rate * epoch, except that a schedule
// starting at zero (t0 = 0) clamps up to t_rate so the soft quantizer always
// sees a positive temperature.
double schedule_temperature(const TrainConfig& cfg, long epoch);

struct EpochRecord {
    int epoch = 0;
    double lr = 0.0;
    double temperature = 0.0;
    double train_loss = 0.0;
    double train_acc = 0.0;
    double test_acc = 0.0;
};

struct TrainHistory {
    std::vector<EpochRecord> records;
};

// Quantization-aware training: per epoch, fix the temperature and learning
// rate, sweep seeded-shuffled mini-batches (soft forward -> MSE -> backward ->
// Adam on weights and scales), then evaluate both splits with hard inference.
// Scale factors are clamped to stay >= 1e-6.
TrainHistory train(Network& net, const std::vector<FrameTensor>& train_set,
                   const std::vector<FrameTensor>& test_set, const TrainConfig& cfg,
                   const std::function<void(const EpochRecord&)>& on_epoch = {});

// Fraction of samples whose hard-inference prediction matches the label.
double evaluate(const Network& net, const std::vector<FrameTensor>& dataset, int threads = 0);

// epoch,lr,temperature,train_loss,train_acc,test_acc
void write_history_csv(const TrainHistory& history, const std::string& path);

struct GradcheckReport {
    double max_rel_err = 0.0;
    std::string worst_coordinate;
    double flip_fraction = 0.0;
    std::size_t n_coordinates = 0;
    std::size_t n_flipped = 0;
    bool passed = false;
};

// Central finite differences of the smoothed forward against the analytic
// backward, coordinate by coordinate over every weight and scale. Coordinates
// whose +-h evaluations cross a discrete kink (surrogate window edge or pool
// argmax change) are counted in flip_fraction and excluded from the error.
GradcheckReport gradcheck(Network& net, const FrameTensor& sample, double h,
                          double threshold = 1e-3);

}  // namespace snnq
