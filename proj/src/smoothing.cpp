#include "spreaddim/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "spreaddim/errors.hpp"

namespace spreaddim {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        s += diff * diff;
    }
    return s;
}

using Candidate = std::pair<double, std::size_t>;  // (squared distance, index)

// Fills `order` with the k best candidates around `center`, sorted.
void select_nearest(const PointCloud& cloud, std::size_t center, std::size_t k,
                    bool include_self, std::vector<Candidate>& order) {
    const std::size_t n = cloud.size();
    order.clear();
    const auto c = cloud.row(center);
    for (std::size_t j = 0; j < n; ++j) {
        if (!include_self && j == center) continue;
        order.emplace_back(squared_distance(c, cloud.row(j)), j);
    }
    // pair ordering gives the ascending-index tie break
    if (k < order.size()) {
        std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                         order.end());
        order.resize(k);
    }
    std::sort(order.begin(), order.end());
}

void check_k(const PointCloud& cloud, const KnnSpec& spec) {
    const std::size_t available = spec.include_self ? cloud.size() : cloud.size() - 1;
    if (spec.k < 1) throw ValidationError("k must be >= 1");
    if (spec.k > available)
        throw ValidationError("k = " + std::to_string(spec.k) + " exceeds the " +
                              std::to_string(available) + " available neighbours");
}

}  // namespace

std::size_t k_from_percent(double percent, std::size_t n) {
    if (!(percent > 0.0) || !(percent <= 100.0))
        throw ValidationError("k percent must lie in (0, 100]");
    const auto k = static_cast<std::size_t>(std::ceil(percent / 100.0 * static_cast<double>(n) - 1e-9));
    return std::clamp<std::size_t>(k, 1, n);
}

std::vector<std::size_t> nearest_neighbours(const PointCloud& cloud, std::size_t center,
                                            std::size_t k, bool include_self) {
    if (center >= cloud.size())
        throw ValidationError("centre index " + std::to_string(center) + " is out of range");
    check_k(cloud, {k, include_self});
    std::vector<Candidate> order;
    select_nearest(cloud, center, k, include_self, order);
    std::vector<std::size_t> idx(order.size());
    for (std::size_t r = 0; r < order.size(); ++r) idx[r] = order[r].second;
    return idx;
}

PointCloud knn_smooth(const PointCloud& cloud, const KnnSpec& spec) {
    check_k(cloud, spec);
    const std::size_t n = cloud.size(), m = cloud.dim();
    std::vector<double> out(n * m, 0.0);
    std::vector<Candidate> order;
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
        select_nearest(cloud, i, spec.k, spec.include_self, order);
        // Sum members in index order so the mean does not depend on distance ties.
        members.clear();
        for (const auto& c : order) members.push_back(c.second);
        std::sort(members.begin(), members.end());
        double* row = out.data() + i * m;
        for (auto j : members) {
            const auto p = cloud.row(j);
            for (std::size_t k = 0; k < m; ++k) row[k] += p[k];
        }
        for (std::size_t k = 0; k < m; ++k) row[k] /= static_cast<double>(spec.k);
    }
    return PointCloud(n, m, std::move(out));
}

PointCloud local_sample(const PointCloud& cloud, std::size_t center_index, std::size_t size) {
    if (center_index >= cloud.size())
        throw ValidationError("centre index " + std::to_string(center_index) +
                              " is out of range for " + std::to_string(cloud.size()) + " points");
    if (size < 1 || size > cloud.size())
        throw ValidationError("local sample size must lie in [1, " +
                              std::to_string(cloud.size()) + "]");
    const auto idx = nearest_neighbours(cloud, center_index, size, true);
    const std::size_t m = cloud.dim();
    std::vector<double> out;
    out.reserve(size * m);
    for (auto j : idx) {
        const auto p = cloud.row(j);
        out.insert(out.end(), p.begin(), p.end());
    }
    return PointCloud(size, m, std::move(out));
}

}  // namespace spreaddim
