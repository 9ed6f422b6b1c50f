#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "drc/masks.hpp"
#include "drc/network.hpp"
#include "drc/rng.hpp"

namespace drc {

// Knobs for the Monte Carlo / projected-gradient-ascent estimator. The inner
// maximization is non-concave for networks with hidden layers; the estimator
// reports a lower-bound estimate of the supremum.
struct EstimatorConfig {
    int n_epsilon_draws = 8;      // Rademacher vector samples per empirical estimate
    int n_restarts = 10;          // ascent restarts per draw
    int ascent_steps = 500;
    double step_size = 0.1;       // displacement per (normalized) gradient step
    double step_decay = 0.99;
    int n_outer_replicates = 4;   // fresh (S_n, RS_n) draws for the expected variant
    bool use_absconv_reduction = true;   // replace the L1 top ball by its +-B_k vertices
    bool force_gradient_ascent = false;  // bypass the exact closed form when k = 0
    std::uint64_t rng_seed = 0;

    void validate() const;
};

struct ComplexityEstimate {
    double point = 0.0;      // mean of per-replicate values
    double std_error = 0.0;  // sample standard deviation / sqrt(n_replicates)
    int n_replicates = 0;
    std::vector<double> replicate_values;
    // optimizer diagnostics: best objective per restart, draw-major order
    std::vector<double> restart_best;
};

// Exact supremum of (1/n) sum_i eps_i <w, x_i ⊙ r_i> over the L2 ball
// ||w|| <= b1, attained at (b1/n) * ||sum_i eps_i x_i ⊙ r_i||. For Type III
// pass the entrywise product of the two masks as the effective mask.
double closed_form_linear_sup(const std::vector<Vec>& xs, const std::vector<Vec>& effective_masks,
                              const std::vector<int>& eps, double b1);

// The Rademacher vector used for draw t of an estimate seeded with `seed`.
// Public so oracle tests can reproduce the exact draws the estimator consumed.
std::vector<int> epsilon_draw(std::uint64_t seed, int draw_index, int n);

// Single-draw inner supremum sup_w (1/n) sum_i eps_i f(w, x_i, r_i) over the
// feasible balls. Routes to the closed form when the network has no hidden
// layers (unless cfg.force_gradient_ascent); otherwise runs normalized
// projected-gradient ascent with cfg.n_restarts restarts keyed off seed_key.
double sup_correlation(const NetworkSpec& spec, DropoutType type, const std::vector<Vec>& xs,
                       const std::vector<MaskBundle>& masks, const std::vector<int>& eps,
                       const EstimatorConfig& cfg, std::uint64_t seed_key,
                       std::vector<double>* restart_best = nullptr);

// Empirical generalized Rademacher complexity of the dropout class on a fixed
// sample: averages the inner supremum over cfg.n_epsilon_draws draws.
ComplexityEstimate estimate_empirical_rademacher(const NetworkSpec& spec, DropoutType type,
                                                 const std::vector<Vec>& xs,
                                                 const std::vector<MaskBundle>& masks,
                                                 const EstimatorConfig& cfg);

using DataSampler = std::function<Vec(rng::Stream&)>;

// Expected complexity: averages the empirical estimate over
// cfg.n_outer_replicates fresh (S_n, RS_n) draws.
ComplexityEstimate estimate_expected_rademacher(const NetworkSpec& spec, DropoutType type,
                                                const DataSampler& sampler, double rho, int n,
                                                const EstimatorConfig& cfg);

}  // namespace drc
