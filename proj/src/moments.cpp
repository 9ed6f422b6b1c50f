#include "drc/moments.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "drc/rng.hpp"

namespace drc {

int MomentQuery::effective_vector_masks() const {
    if (vector_masks == 0) return power < 2 ? power : 2;
    return vector_masks;
}

void MomentQuery::validate() const {
    if (x.empty()) throw std::invalid_argument("moment query needs a nonempty x");
    if (power < 1) throw std::invalid_argument("power must be >= 1");
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
    int v = effective_vector_masks();
    if (v < 1 || v > 2 || v > power)
        throw std::invalid_argument("vector_masks must be 1 or 2 and at most power");
}

double moment_analytic(const MomentQuery& q) {
    q.validate();
    return std::pow(q.rho, q.power) * dot(q.x, q.x);
}

double moment_enumerate(const MomentQuery& q) {
    q.validate();
    const int d = static_cast<int>(q.x.size());
    const int v = q.effective_vector_masks();
    const int s = q.scalar_masks();
    const int bits = v * d + s;
    if (bits > 30) throw std::invalid_argument("enumeration limited to 30 mask bits, got " +
                                               std::to_string(bits));
    const double rho = q.rho;
    double total = 0.0;
    const std::uint64_t configs = 1ull << bits;
    for (std::uint64_t cfg = 0; cfg < configs; ++cfg) {
        double weight = 1.0;
        for (int b = 0; b < bits; ++b) weight *= (cfg >> b & 1u) ? rho : 1.0 - rho;
        if (weight == 0.0) continue;
        // scalar masks occupy the low s bits and gate every coordinate
        bool scalars_on = true;
        for (int b = 0; b < s; ++b) scalars_on = scalars_on && (cfg >> b & 1u);
        if (!scalars_on) continue;
        double value = 0.0;
        for (int j = 0; j < d; ++j) {
            bool keep = true;
            for (int m = 0; m < v; ++m) keep = keep && (cfg >> (s + m * d + j) & 1u);
            if (keep) value += q.x[static_cast<std::size_t>(j)] * q.x[static_cast<std::size_t>(j)];
        }
        total += weight * value;
    }
    return total;
}

MonteCarloMoment moment_monte_carlo(const MomentQuery& q, long trials, std::uint64_t seed) {
    q.validate();
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    const int d = static_cast<int>(q.x.size());
    const int v = q.effective_vector_masks();
    const int s = q.scalar_masks();
    rng::Stream stream(seed, 0);
    double sum = 0.0, sum_sq = 0.0;
    Vec masked(static_cast<std::size_t>(d));
    for (long t = 0; t < trials; ++t) {
        masked = q.x;
        for (int m = 0; m < v; ++m)
            for (int j = 0; j < d; ++j)
                if (!stream.bernoulli(q.rho)) masked[static_cast<std::size_t>(j)] = 0.0;
        double scalar = 1.0;
        for (int m = 0; m < s; ++m)
            if (!stream.bernoulli(q.rho)) scalar = 0.0;
        scale(masked, scalar);
        double value = dot(masked, masked);
        sum += value;
        sum_sq += value * value;
    }
    MonteCarloMoment out;
    const double n = static_cast<double>(trials);
    out.mean = sum / n;
    if (trials > 1) {
        double var = (sum_sq - sum * sum / n) / (n - 1.0);
        if (var < 0.0) var = 0.0;
        out.std_error = std::sqrt(var / n);
    }
    return out;
}

}  // namespace drc
