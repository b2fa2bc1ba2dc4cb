#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "spreaddim/metric.hpp"

namespace spreaddim {

/// Strictly increasing, nonnegative scale factors. t = 0 is allowed and
/// evaluates the sigma = 1, G = 0 limit; F values are produced only for t > 1.
class ScaleGrid {
public:
    explicit ScaleGrid(std::vector<double> scales);

    /// count points from lo to hi inclusive, equally spaced in ln t (lo > 0).
    static ScaleGrid log_spaced(double lo, double hi, std::size_t count);
    static ScaleGrid linear(double lo, double hi, std::size_t count);

    std::span<const double> scales() const noexcept { return scales_; }
    std::size_t size() const noexcept { return scales_.size(); }
    double operator[](std::size_t i) const { return scales_[i]; }
    double front() const { return scales_.front(); }
    double back() const { return scales_.back(); }

    /// Every scale multiplied by factor > 0.
    ScaleGrid scaled(double factor) const;

private:
    std::vector<double> scales_;
};

struct SpreadPoint {
    double t;
    double sigma;
    double dsigma_dt;
    double g_dim;
    std::optional<double> f_dim;  // only for t > 1
};

struct SpreadCurve {
    std::size_t n = 0;  // point count of the source space; 0 if unknown
    std::vector<SpreadPoint> points;

    bool empty() const noexcept { return points.empty(); }
    std::size_t size() const noexcept { return points.size(); }
};

struct EngineOptions {
    std::size_t block_size = 512;  // rows of distances held at once
    unsigned threads = 1;          // workers across grid points; 0 = hardware concurrency
};

/// Sigma and its t-derivative at one scale.
struct SpreadValue {
    double sigma;
    double dsigma_dt;
};

// Reference implementations: plain double loops over full rows with std::exp.
double spread_naive(const DistanceMatrix& d, double t);
double spread_derivative_naive(const DistanceMatrix& d, double t);

/// Sigma and dsigma/dt from one blocked pass: per row block, e^{-t d} row sums
/// and (d e^{-t d}) row sums are reduced, then sigma = sum 1/s_i and
/// dsigma/dt = sum w_i / s_i^2. Only the upper triangle is exponentiated.
SpreadValue spread_at(const RowBlockSource& src, double t, const EngineOptions& opts = {});

double spread_vectorised(const RowBlockSource& src, double t, const EngineOptions& opts = {});
double spread_vectorised(const DistanceMatrix& d, double t);

double spread_derivative(const RowBlockSource& src, double t, const EngineOptions& opts = {});
double spread_derivative(const DistanceMatrix& d, double t);

/// G = t * sigma'(t) / sigma(t); 0 at t = 0.
double instantaneous_dimension(const RowBlockSource& src, double t,
                               const EngineOptions& opts = {});
double instantaneous_dimension(const DistanceMatrix& d, double t);

/// F = ln sigma / ln t from a precomputed sigma. Throws DomainError for t <= 1.
double f_dimension_from_spread(double sigma, double t);

double f_dimension(const RowBlockSource& src, double t, const EngineOptions& opts = {});
double f_dimension(const DistanceMatrix& d, double t);

/// One SpreadCurve row per grid scale. Every block of distance rows is
/// produced once and reused for all scales.
SpreadCurve sweep(const RowBlockSource& src, const ScaleGrid& grid,
                  const EngineOptions& opts = {});
SpreadCurve sweep(const DistanceMatrix& d, const ScaleGrid& grid,
                  const EngineOptions& opts = {});

/// Median off-diagonal distance (pairs i < j). Above 2^24 pairs, and when the
/// source does not hold a matrix, it is taken over a deterministic Bernoulli
/// subsample of about 2^24 pairs.
double median_distance(const RowBlockSource& src, const EngineOptions& opts = {});

/// Data-adaptive default grid: `count` log-spaced scales from 0.01/m to 100/m,
/// m the median pairwise distance (median of positive distances if that is 0;
/// [0.01, 100] if every distance is 0 or there is a single point).
ScaleGrid auto_grid(const RowBlockSource& src, std::size_t count = 200,
                    const EngineOptions& opts = {});

}  // namespace spreaddim
