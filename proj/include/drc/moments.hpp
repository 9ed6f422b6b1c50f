#pragma once

#include <cstdint>

#include "drc/vec.hpp"

namespace drc {

// Query for the squared-norm mask moments E<x ⊙ masks, x ⊙ masks> where each
// coordinate of x is multiplied by `power` independent Bern(rho) factors.
// The factors split into `vector_masks` coordinate-wise mask vectors (1 or 2)
// and power - vector_masks scalar masks shared across coordinates, matching
// the four identities: (p=1, v=1), (p=2, v=2), (p=k+1, v=1), (p=k+2, v=2).
struct MomentQuery {
    Vec x;
    int power = 1;        // p
    double rho = 1.0;
    int vector_masks = 0; // 0 selects the default min(power, 2)

    int effective_vector_masks() const;
    int scalar_masks() const { return power - effective_vector_masks(); }
    void validate() const;
};

// Exact value rho^p * ||x||^2.
double moment_analytic(const MomentQuery& q);

// Independent oracle: exhaustive enumeration over every mask-bit
// configuration, weighted by its Bernoulli probability. Requires
// vector_masks * d + scalar_masks <= 30 bits.
double moment_enumerate(const MomentQuery& q);

struct MonteCarloMoment {
    double mean = 0.0;
    double std_error = 0.0;
};

// Samples the literal mask structure of the query and averages the quoted
// inner product over `trials` draws.
MonteCarloMoment moment_monte_carlo(const MomentQuery& q, long trials, std::uint64_t seed);

}  // namespace drc
