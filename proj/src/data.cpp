#include "drc/data.hpp"

#include <cmath>
#include <stdexcept>

namespace drc {

std::string to_string(DataDistribution d) {
    return d == DataDistribution::UnitSphere ? "unit_sphere" : "scaled_gaussian_projected";
}

DataDistribution data_distribution_from_string(const std::string& s) {
    if (s == "unit_sphere") return DataDistribution::UnitSphere;
    if (s == "scaled_gaussian_projected") return DataDistribution::ScaledGaussianProjected;
    throw std::invalid_argument("unknown data distribution '" + s + "'");
}

Vec sample_input(DataDistribution dist, rng::Stream& stream, int dim, double bound) {
    if (dist == DataDistribution::UnitSphere) return rng::sphere_point(stream, dim, bound);
    Vec x(static_cast<std::size_t>(dim));
    double sigma = bound / std::sqrt(static_cast<double>(dim));
    for (double& e : x) e = sigma * stream.next_normal();
    return project_l2_ball(x, bound);
}

DataSampler make_data_sampler(DataDistribution dist, int dim, double bound) {
    return [dist, dim, bound](rng::Stream& stream) {
        return sample_input(dist, stream, dim, bound);
    };
}

}  // namespace drc
