#pragma once

namespace spreaddim::oracle {

/// Closed-form spread of [0, 1] with |x - y|. Returns 1 near t = 0.
double interval_spread(double t);
double interval_spread_derivative(double t);

/// Round unit sphere S^n with the arc-length metric.
struct SphereSpec {
    int n = 1;
};

double sphere_spread(SphereSpec spec, double t);

/// d/dt ln sigma for the sphere, from the log-derivative of each factor.
double sphere_log_derivative(SphereSpec spec, double t);

double sphere_spread_derivative(SphereSpec spec, double t);

/// G and F of the unit circle with its arc-length metric.
double circle_g_dimension(double t);
double circle_f_dimension(double t);

}  // namespace spreaddim::oracle
