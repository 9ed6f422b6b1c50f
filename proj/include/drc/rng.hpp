#pragma once

#include <cmath>
#include <cstdint>

#include "drc/vec.hpp"

namespace drc::rng {

// splitmix64 finalizer; also used as a general 64-bit mixer for deriving
// stream keys from (seed, id) pairs.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive(std::uint64_t key, std::uint64_t v) {
    return mix64(key ^ mix64(v + 0x632BE59BD9B4E019ull));
}

// Composite stream ids: fold parts into one key so every (tag, index...)
// combination names an independent stream.
inline std::uint64_t stream_key(std::uint64_t tag, std::uint64_t a = 0, std::uint64_t b = 0,
                                std::uint64_t c = 0) {
    return derive(derive(derive(mix64(tag), a), b), c);
}

// Counter-based generator keyed by (seed, stream_id): replicates own their
// stream and results do not depend on the order streams are consumed in.
class Stream {
  public:
    Stream(std::uint64_t seed, std::uint64_t stream_id)
        : state_(derive(mix64(seed), stream_id)) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform on [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    int next_sign() { return (next_u64() & 1ull) ? 1 : -1; }

    // Box-Muller; spare value cached so consumption stays deterministic.
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - next_double();  // (0, 1]
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // uniform exponential with unit rate
    double next_exponential() { return -std::log(1.0 - next_double()); }

  private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Uniform point on the L2 sphere of given radius.
inline Vec sphere_point(Stream& s, int dim, double radius) {
    Vec v(static_cast<std::size_t>(dim));
    double n = 0.0;
    do {
        for (double& x : v) x = s.next_normal();
        n = norm2(v);
    } while (n < 1e-12);
    scale(v, radius / n);
    return v;
}

// Uniform point on the boundary of the L1 ball (random signs on a
// Dirichlet(1,...,1) draw).
inline Vec l1_sphere_point(Stream& s, int dim, double radius) {
    Vec v(static_cast<std::size_t>(dim));
    double total = 0.0;
    do {
        total = 0.0;
        for (double& x : v) {
            x = s.next_exponential();
            total += x;
        }
    } while (total < 1e-12);
    for (double& x : v) x = x / total * radius * s.next_sign();
    return v;
}

}  // namespace drc::rng
