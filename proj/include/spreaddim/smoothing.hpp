#pragma once

#include <cstddef>
#include <vector>

#include "spreaddim/metric.hpp"

namespace spreaddim {

struct KnnSpec {
    std::size_t k = 1;
    bool include_self = true;
};

/// k = ceil(percent/100 * n) clamped to [1, n].
std::size_t k_from_percent(double percent, std::size_t n);

/// Indices of the k nearest points to `center` under Euclidean distance,
/// nearest first, ties broken by ascending index. With include_self false
/// the centre itself is skipped.
std::vector<std::size_t> nearest_neighbours(const PointCloud& cloud, std::size_t center,
                                            std::size_t k, bool include_self = true);

/// Replaces every point by the coordinate-wise mean of its k nearest
/// neighbours. Neighbour search is exact brute force.
PointCloud knn_smooth(const PointCloud& cloud, const KnnSpec& spec);

/// The `size` points nearest to `center_index` (the centre included), in order
/// of distance, with their original coordinates.
PointCloud local_sample(const PointCloud& cloud, std::size_t center_index, std::size_t size);

}  // namespace spreaddim
