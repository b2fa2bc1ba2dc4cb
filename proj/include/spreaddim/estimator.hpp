#pragma once

#include <optional>
#include <span>

#include "spreaddim/spread.hpp"

namespace spreaddim {

struct Plateau {
    double t_lo;
    double t_hi;
    double mean_g;
    double delta;
};

struct Knee {
    double t;
    double f;
};

/// Dimension read off a spread curve.
///
/// The G reading takes the peak of the instantaneous dimension (first
/// occurrence, so the smallest t on ties) and the longest contiguous run,
/// measured in ln t, where G stays within `delta` of that peak. The F reading
/// looks at (ln t, F) for t > 1 and picks the point farthest from the chord
/// joining the first and last points; it needs at least four such points and
/// depends on the grid the curve was sampled on.
struct DimensionEstimate {
    double peak_g = 0.0;
    double peak_t = 0.0;
    long rounded_dimension = 0;
    std::optional<Plateau> plateau;
    std::optional<Knee> knee;
};

inline constexpr double default_plateau_delta = 0.1;

DimensionEstimate estimate(const SpreadCurve& curve, double plateau_delta = default_plateau_delta);

/// Chord (maximum perpendicular distance) knee of y against x. Returns the
/// index of the knee, or nullopt for fewer than `min_points` points.
std::optional<std::size_t> chord_knee(std::span<const double> x, std::span<const double> y,
                                      std::size_t min_points = 4);

}  // namespace spreaddim
