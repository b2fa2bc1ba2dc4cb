#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace spreaddim {

/// n points in m ambient coordinates, stored row-major. Every coordinate is
/// finite; construction throws ValidationError naming the first bad row.
class PointCloud {
public:
    PointCloud(std::size_t rows, std::size_t cols, std::vector<double> coords);

    /// Builds from nested rows; all rows must have the same length.
    static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const noexcept { return rows_; }
    std::size_t dim() const noexcept { return cols_; }

    std::span<const double> row(std::size_t i) const {
        return {coords_.data() + i * cols_, cols_};
    }
    double operator()(std::size_t i, std::size_t k) const { return coords_[i * cols_ + k]; }
    std::span<const double> data() const noexcept { return coords_; }

    friend bool operator==(const PointCloud&, const PointCloud&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> coords_;
};

/// Symmetric, nonnegative n x n matrix with zero diagonal, stored row-major.
class DistanceMatrix {
public:
    /// Takes ownership of n*n row-major values. Throws ValidationError if the
    /// values break any invariant other than the triangle inequality.
    DistanceMatrix(std::size_t n, std::vector<double> values);

    /// Builds an n x n matrix from the upper triangle f(i, j), i < j, mirrored.
    template <typename F>
    static DistanceMatrix from_upper(std::size_t n, F&& f) {
        std::vector<double> v(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) v[i * n + j] = v[j * n + i] = f(i, j);
        return DistanceMatrix(n, std::move(v));
    }

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
    std::span<const double> row(std::size_t i) const { return {d_.data() + i * n_, n_}; }
    std::span<const double> data() const noexcept { return d_; }

    /// Every entry multiplied by factor (> 0).
    DistanceMatrix scaled(double factor) const;

    /// Rows and columns reordered so that result(i, j) = this(perm[i], perm[j]).
    DistanceMatrix permuted(std::span<const std::size_t> perm) const;

    friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
    struct Unchecked {};
    DistanceMatrix(Unchecked, std::size_t n, std::vector<double> values)
        : n_(n), d_(std::move(values)) {}

    std::size_t n_;
    std::vector<double> d_;
};

/// Produces blocks of full distance rows on demand, so callers never need the
/// whole n x n matrix in memory.
class RowBlockSource {
public:
    virtual ~RowBlockSource() = default;

    virtual std::size_t size() const = 0;

    /// Rows [first, first + count) as a count x size() row-major block. The
    /// returned span may point into `scratch` or into storage owned by the source.
    virtual std::span<const double> rows(std::size_t first, std::size_t count,
                                         std::vector<double>& scratch) const = 0;

    /// The full matrix if the source holds one, else nullptr.
    virtual const DistanceMatrix* matrix() const { return nullptr; }
};

/// Serves rows straight out of an existing matrix (no copies).
class MatrixRows final : public RowBlockSource {
public:
    explicit MatrixRows(const DistanceMatrix& m) : m_(&m) {}
    std::size_t size() const override { return m_->size(); }
    std::span<const double> rows(std::size_t first, std::size_t count,
                                 std::vector<double>& scratch) const override;
    const DistanceMatrix* matrix() const override { return m_; }

private:
    const DistanceMatrix* m_;
};

/// Euclidean distances of a point cloud, computed block by block.
class EuclideanRows final : public RowBlockSource {
public:
    explicit EuclideanRows(const PointCloud& cloud) : cloud_(&cloud) {}
    std::size_t size() const override { return cloud_->size(); }
    std::span<const double> rows(std::size_t first, std::size_t count,
                                 std::vector<double>& scratch) const override;

private:
    const PointCloud* cloud_;
};

/// Euclidean distance between rows i and j, summed in ascending coordinate order.
double euclidean_distance(const PointCloud& cloud, std::size_t i, std::size_t j);

DistanceMatrix euclidean_distances(const PointCloud& cloud);

/// Arc-length metric on the unit circle. Angles must lie in [0, 2*pi).
DistanceMatrix geodesic_circle_distances(std::span<const double> angles);

/// Sum metric on the product X x Y; point (i, j) has index i * |Y| + j.
DistanceMatrix product_distances(const DistanceMatrix& x, const DistanceMatrix& y);

struct Violation {
    enum class Kind { NonFinite, Negative, NonzeroDiagonal, Asymmetric, Triangle, Shape };
    Kind kind;
    std::vector<std::size_t> indices;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const noexcept { return violations.empty(); }
};

/// Checks raw n x n values against the distance-matrix invariants. The
/// triangle check is O(n^3) and runs only when requested; its tolerance is
/// 1e-9 times the largest entry.
ValidationReport validate(std::size_t n, std::span<const double> values, bool check_triangle);

inline ValidationReport validate(const DistanceMatrix& m, bool check_triangle) {
    return validate(m.size(), m.data(), check_triangle);
}

std::string to_string(Violation::Kind kind);

}  // namespace spreaddim
