#include "spreaddim/estimator.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "spreaddim/errors.hpp"

namespace spreaddim {

namespace {

double log_span(double lo, double hi) {
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return std::log(hi) - std::log(lo);
}

std::optional<Plateau> find_plateau(const SpreadCurve& curve, double peak, double delta) {
    const auto& pts = curve.points;
    const double floor = peak - delta;

    std::optional<Plateau> best;
    double best_span = -1.0;
    std::size_t best_count = 0;
    std::size_t i = 0;
    while (i < pts.size()) {
        if (!(pts[i].g_dim >= floor && pts[i].g_dim <= peak)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        double sum = 0.0;
        while (j < pts.size() && pts[j].g_dim >= floor && pts[j].g_dim <= peak) sum += pts[j++].g_dim;
        const double span = log_span(pts[i].t, pts[j - 1].t);
        const std::size_t count = j - i;
        if (span > best_span || (span == best_span && count > best_count)) {
            best_span = span;
            best_count = count;
            best = Plateau{pts[i].t, pts[j - 1].t, sum / static_cast<double>(count), delta};
        }
        i = j;
    }
    return best;
}

}  // namespace

std::optional<std::size_t> chord_knee(std::span<const double> x, std::span<const double> y,
                                      std::size_t min_points) {
    if (x.size() != y.size()) throw ValidationError("knee inputs differ in length");
    if (x.size() < std::max<std::size_t>(min_points, 2)) return std::nullopt;
    const double x0 = x.front(), y0 = y.front(), x1 = x.back(), y1 = y.back();
    const double dx = x1 - x0, dy = y1 - y0;
    const double norm = std::hypot(dx, dy);
    if (norm == 0.0) return std::nullopt;

    std::size_t best = 0;
    double best_dist = -1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dist = std::abs(dy * (x[i] - x0) - dx * (y[i] - y0)) / norm;
        if (dist > best_dist) {
            best_dist = dist;
            best = i;
        }
    }
    return best;
}

DimensionEstimate estimate(const SpreadCurve& curve, double plateau_delta) {
    if (curve.empty()) throw ValidationError("cannot estimate a dimension from an empty curve");
    if (!(plateau_delta >= 0.0) || !std::isfinite(plateau_delta))
        throw ValidationError("plateau delta must be finite and >= 0");

    DimensionEstimate est;
    est.peak_g = curve.points.front().g_dim;
    est.peak_t = curve.points.front().t;
    for (const auto& p : curve.points) {
        if (p.g_dim > est.peak_g) {
            est.peak_g = p.g_dim;
            est.peak_t = p.t;
        }
    }
    est.rounded_dimension = std::lround(est.peak_g);
    est.plateau = find_plateau(curve, est.peak_g, plateau_delta);

    std::vector<double> log_t, f;
    std::vector<std::size_t> source;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        const auto& p = curve.points[i];
        if (p.t > 1.0 && p.f_dim && std::isfinite(*p.f_dim)) {
            log_t.push_back(std::log(p.t));
            f.push_back(*p.f_dim);
            source.push_back(i);
        }
    }
    if (auto k = chord_knee(log_t, f)) est.knee = Knee{curve.points[source[*k]].t, f[*k]};
    return est;
}

}  // namespace spreaddim
