#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace drc {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

inline double norm1(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += std::fabs(x);
    return s;
}

inline Vec hadamard(const Vec& a, const Vec& b) {
    Vec c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] * b[i];
    return c;
}

inline void axpy(double a, const Vec& x, Vec& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline void scale(Vec& v, double a) {
    for (double& x : v) x *= a;
}

// Rounding in a projection can leave the result's norm a few ulps above the
// radius; the grace factor keeps repeated projection exactly idempotent.
inline constexpr double kProjectionGrace = 1.0 + 1e-13;

// Euclidean projection onto the closed L2 ball of given radius.
// Feasible inputs are returned unchanged.
inline Vec project_l2_ball(const Vec& v, double radius) {
    double n = norm2(v);
    if (n <= radius * kProjectionGrace) return v;
    Vec w = v;
    scale(w, radius / n);
    return w;
}

// Euclidean projection onto the closed L1 ball by sort-and-threshold
// (simplex projection applied to |v|), O(m log m).
inline Vec project_l1_ball(const Vec& v, double radius) {
    if (norm1(v) <= radius * kProjectionGrace) return v;
    Vec u(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) u[i] = std::fabs(v[i]);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, theta = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        cum += u[j];
        double t = (cum - radius) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0) theta = t;
    }
    Vec w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double m = std::fabs(v[i]) - theta;
        w[i] = m > 0.0 ? (v[i] < 0.0 ? -m : m) : 0.0;
    }
    return w;
}

}  // namespace drc
