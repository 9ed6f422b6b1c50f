#pragma once

#include <string>

#include "drc/estimator.hpp"
#include "drc/rng.hpp"

namespace drc {

// unit_sphere keeps ||x|| = Bhat exactly; scaled_gaussian_projected samples
// N(0, (Bhat^2/d) I) and radially clamps into the Bhat ball.
enum class DataDistribution { UnitSphere, ScaledGaussianProjected };

std::string to_string(DataDistribution d);
DataDistribution data_distribution_from_string(const std::string& s);

Vec sample_input(DataDistribution dist, rng::Stream& stream, int dim, double bound);

DataSampler make_data_sampler(DataDistribution dist, int dim, double bound);

}  // namespace drc
