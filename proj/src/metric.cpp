#include "spreaddim/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spreaddim/errors.hpp"

namespace spreaddim {

PointCloud::PointCloud(std::size_t rows, std::size_t cols, std::vector<double> coords)
    : rows_(rows), cols_(cols), coords_(std::move(coords)) {
    if (rows_ == 0 || cols_ == 0)
        throw ValidationError("point cloud needs at least one point and one coordinate");
    if (coords_.size() != rows_ * cols_)
        throw ValidationError("point cloud storage does not match " + std::to_string(rows_) +
                              " x " + std::to_string(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k)
            if (!std::isfinite(coords_[i * cols_ + k]))
                throw ValidationError("non-finite coordinate in row " + std::to_string(i) +
                                      ", column " + std::to_string(k));
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw ValidationError("point cloud needs at least one point");
    const std::size_t m = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * m);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m)
            throw ValidationError("row " + std::to_string(i) + " has " +
                                  std::to_string(rows[i].size()) + " coordinates, expected " +
                                  std::to_string(m));
        flat.insert(flat.end(), rows[i].begin(), rows[i].end());
    }
    return PointCloud(rows.size(), m, std::move(flat));
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> values)
    : n_(n), d_(std::move(values)) {
    if (n_ == 0) throw ValidationError("distance matrix must have at least one point");
    auto report = validate(n_, d_, false);
    if (!report.ok()) throw ValidationError(report.violations.front().message);
}

DistanceMatrix DistanceMatrix::scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor))
        throw DomainError("scale factor must be finite and > 0");
    std::vector<double> v(d_);
    for (double& x : v) x *= factor;
    return DistanceMatrix(Unchecked{}, n_, std::move(v));
}

DistanceMatrix DistanceMatrix::permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != n_) throw ValidationError("permutation length does not match matrix");
    std::vector<bool> seen(n_, false);
    for (auto p : perm) {
        if (p >= n_ || seen[p]) throw ValidationError("not a permutation");
        seen[p] = true;
    }
    std::vector<double> v(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) v[i * n_ + j] = d_[perm[i] * n_ + perm[j]];
    return DistanceMatrix(Unchecked{}, n_, std::move(v));
}

std::span<const double> MatrixRows::rows(std::size_t first, std::size_t count,
                                         std::vector<double>&) const {
    const std::size_t n = m_->size();
    return m_->data().subspan(first * n, count * n);
}

std::span<const double> EuclideanRows::rows(std::size_t first, std::size_t count,
                                            std::vector<double>& scratch) const {
    const std::size_t n = cloud_->size();
    scratch.resize(count * n);
    for (std::size_t r = 0; r < count; ++r) {
        const std::size_t i = first + r;
        double* out = scratch.data() + r * n;
        // Entry (i, j) is always evaluated with the smaller index first so the
        // generated rows are exactly symmetric.
        for (std::size_t j = 0; j < n; ++j)
            out[j] = j == i ? 0.0
                            : (i < j ? euclidean_distance(*cloud_, i, j)
                                     : euclidean_distance(*cloud_, j, i));
    }
    return {scratch.data(), count * n};
}

double euclidean_distance(const PointCloud& cloud, std::size_t i, std::size_t j) {
    const auto a = cloud.row(i);
    const auto b = cloud.row(j);
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        s += diff * diff;
    }
    return std::sqrt(s);
}

DistanceMatrix euclidean_distances(const PointCloud& cloud) {
    return DistanceMatrix::from_upper(
        cloud.size(), [&](std::size_t i, std::size_t j) { return euclidean_distance(cloud, i, j); });
}

DistanceMatrix geodesic_circle_distances(std::span<const double> angles) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < angles.size(); ++i)
        if (!(angles[i] >= 0.0 && angles[i] < two_pi))
            throw ValidationError("angle " + std::to_string(i) + " is outside [0, 2*pi)");
    return DistanceMatrix::from_upper(angles.size(), [&](std::size_t i, std::size_t j) {
        const double gap = std::abs(angles[i] - angles[j]);
        return std::min(gap, two_pi - gap);
    });
}

DistanceMatrix product_distances(const DistanceMatrix& x, const DistanceMatrix& y) {
    const std::size_t nx = x.size(), ny = y.size();
    const std::size_t n = nx * ny;
    std::vector<double> v(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            v[a * n + b] = x(a / ny, b / ny) + y(a % ny, b % ny);
    return DistanceMatrix(n, std::move(v));
}

std::string to_string(Violation::Kind kind) {
    switch (kind) {
        case Violation::Kind::NonFinite: return "non_finite";
        case Violation::Kind::Negative: return "negative";
        case Violation::Kind::NonzeroDiagonal: return "nonzero_diagonal";
        case Violation::Kind::Asymmetric: return "asymmetric";
        case Violation::Kind::Triangle: return "triangle";
        case Violation::Kind::Shape: return "shape";
    }
    return "unknown";
}

namespace {

std::string describe(const char* what, std::initializer_list<std::size_t> idx) {
    std::ostringstream os;
    os << what << " at (";
    bool first = true;
    for (auto i : idx) {
        os << (first ? "" : ",") << i;
        first = false;
    }
    os << ")";
    return os.str();
}

}  // namespace

ValidationReport validate(std::size_t n, std::span<const double> d, bool check_triangle) {
    using K = Violation::Kind;
    ValidationReport report;
    auto add = [&](K kind, std::initializer_list<std::size_t> idx, const char* what) {
        report.violations.push_back({kind, idx, describe(what, idx)});
    };

    if (d.size() != n * n) {
        report.violations.push_back({K::Shape, {n}, "matrix storage is not " +
                                                        std::to_string(n) + " x " +
                                                        std::to_string(n)});
        return report;
    }

    double max_entry = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = d[i * n + j];
            if (!std::isfinite(v)) {
                add(K::NonFinite, {i, j}, "non-finite entry");
                continue;
            }
            if (v < 0.0) add(K::Negative, {i, j}, "negative entry");
            if (i == j && v != 0.0) add(K::NonzeroDiagonal, {i, i}, "nonzero diagonal");
            if (i < j && std::isfinite(d[j * n + i]) && v != d[j * n + i])
                add(K::Asymmetric, {i, j}, "symmetry violation");
            max_entry = std::max(max_entry, v);
        }
    }

    if (check_triangle && report.ok()) {
        const double tol = 1e-9 * max_entry;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == i || k == j) continue;
                    if (d[i * n + j] > d[i * n + k] + d[k * n + j] + tol) {
                        std::size_t t[3] = {i, j, k};
                        std::sort(t, t + 3);
                        add(K::Triangle, {t[0], t[1], t[2]}, "triangle violation");
                    }
                }
    }
    return report;
}

}  // namespace spreaddim
