#pragma once

// Test-only helpers: random metric spaces and an extended-precision spread
// that shares no code with the engine.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "spreaddim/metric.hpp"

namespace testing {

inline spreaddim::PointCloud random_cloud(std::size_t n, std::size_t m, std::uint64_t seed,
                                          double scale = 1.0) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> v(n * m);
    for (double& x : v) x = u(gen);
    return spreaddim::PointCloud(n, m, std::move(v));
}

/// Euclidean distances of random points: always a valid metric.
inline spreaddim::DistanceMatrix random_metric(std::size_t n, std::uint64_t seed,
                                               std::size_t m = 3) {
    return spreaddim::euclidean_distances(random_cloud(n, m, seed));
}

inline long double spread_ld(const spreaddim::DistanceMatrix& d, long double t) {
    long double total = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        long double s = 0;
        for (std::size_t j = 0; j < d.size(); ++j) s += std::exp(-t * (long double)d(i, j));
        total += 1 / s;
    }
    return total;
}

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace testing
