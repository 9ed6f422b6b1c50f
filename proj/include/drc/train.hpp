#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "drc/bounds.hpp"
#include "drc/data.hpp"
#include "drc/masks.hpp"
#include "drc/network.hpp"

namespace drc {

struct TrainConfig {
    int epochs = 50;
    double learning_rate = 0.05;
    LossSpec loss;
    int train_size = 64;
    int test_size = 10000;        // held-out Monte Carlo sample count
    DropoutType dropout_type = DropoutType::I;
    double rho = 0.5;

    void validate() const;
};

struct TrainResult {
    WeightAssignment weights;
    std::vector<double> risk_trajectory;  // empirical dropout risk after each epoch
};

// Thrown when the loss becomes non-finite; carries the trajectory up to the
// failing epoch.
struct TrainingDiverged : std::runtime_error {
    explicit TrainingDiverged(const std::string& what, std::vector<double> trajectory)
        : std::runtime_error(what), risk_trajectory(std::move(trajectory)) {}
    std::vector<double> risk_trajectory;
};

// Feasible starting weights shared by trainers that should agree step for
// step under the same seed.
WeightAssignment initial_weights(const NetworkSpec& spec, std::uint64_t seed);

// Per-example SGD with a fresh mask bundle per example per step; gradients
// flow only through unmasked paths, and weights are projected onto the
// feasible balls at the end of every epoch.
TrainResult train_with_dropout(const NetworkSpec& spec, const std::vector<Vec>& xs,
                               const std::vector<double>& ys, const TrainConfig& cfg,
                               std::uint64_t seed);

struct GapTrial {
    double empirical_risk = 0.0;
    double heldout_risk = 0.0;
    double rhs = 0.0;        // right-hand side of the expected-variant bound
    bool pass = false;
};

struct GapReport {
    int n_trials = 0;
    int passes = 0;
    double pass_fraction = 0.0;
    double delta = 0.0;
    std::vector<GapTrial> trials;
};

// Seeded trials of: train on fresh synthetic regression data from a feasible
// teacher, evaluate the empirical dropout risk on the drawn (S_n, RS_n),
// estimate the expected risk on fresh (x, y, mask) samples, and compare with
// the assembled generalization bound using the theoretical complexity bound.
GapReport gap_experiment(const NetworkSpec& spec, const TrainConfig& cfg, double delta,
                         int n_trials, DataDistribution dist, std::uint64_t seed, int jobs = 1);

}  // namespace drc
