#include "spreaddim/oracles.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spreaddim/errors.hpp"

namespace spreaddim::oracle {

namespace {

constexpr double pi = std::numbers::pi;

void require_positive(double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw DomainError("oracle scale t must be finite and > 0, got " + std::to_string(t));
}

void require_sphere(SphereSpec spec) {
    if (spec.n < 1) throw DomainError("sphere dimension must be >= 1");
}

// pi t / (1 - e^{-pi t}); tends to 1 as t -> 0.
double circle_factor(double t) {
    const double x = pi * t;
    return x / -std::expm1(-x);
}

}  // namespace

double interval_spread(double t) {
    require_positive(t);
    const double u2 = -std::expm1(-t);  // 1 - e^{-t}
    if (u2 < 1e-12) return 1.0;
    if (u2 < 1e-2) {
        // arctanh(u)/u = sum_k u^{2k} / (2k + 1)
        double sum = 0.0, term = 1.0;
        for (int k = 0; k < 8; ++k, term *= u2) sum += term / (2 * k + 1);
        return sum;
    }
    const double u = std::sqrt(u2);
    // arctanh(u) = log1p(u) + t/2, since 1 - u = e^{-t} / (1 + u).
    return (std::log1p(u) + 0.5 * t) / u;
}

double interval_spread_derivative(double t) {
    require_positive(t);
    const double u2 = -std::expm1(-t);
    const double du2_dt = std::exp(-t);
    if (u2 < 1e-2) {
        double sum = 0.0, term = 1.0;
        for (int k = 1; k < 9; ++k, term *= u2) sum += k * term / (2 * k + 1);
        return sum * du2_dt;
    }
    const double u = std::sqrt(u2);
    const double atanh_u = std::log1p(u) + 0.5 * t;
    // d/du [atanh(u)/u] = 1/(u(1-u^2)) - atanh(u)/u^2 and du/dt = e^{-t}/(2u).
    return 1.0 / (2.0 * u2) - atanh_u * du2_dt / (2.0 * u2 * u);
}

double sphere_spread(SphereSpec spec, double t) {
    require_positive(t);
    require_sphere(spec);
    const int n = spec.n;
    const bool even = n % 2 == 0;
    const int factors = even ? n / 2 : (n - 1) / 2;
    auto denom = [even](int i) { return even ? 2.0 * i - 1.0 : 2.0 * i; };

    if (n > 20) {
        double log_sigma = even ? std::log(2.0) - std::log1p(std::exp(-pi * t))
                                : std::log(circle_factor(t));
        for (int i = 1; i <= factors; ++i) log_sigma += std::log1p(std::pow(t / denom(i), 2));
        return std::exp(log_sigma);
    }
    double sigma = even ? 2.0 / (1.0 + std::exp(-pi * t)) : circle_factor(t);
    for (int i = 1; i <= factors; ++i) {
        const double r = t / denom(i);
        sigma *= r * r + 1.0;
    }
    return sigma;
}

double sphere_log_derivative(SphereSpec spec, double t) {
    require_positive(t);
    require_sphere(spec);
    const int n = spec.n;
    const bool even = n % 2 == 0;
    const int factors = even ? n / 2 : (n - 1) / 2;
    // ln(2/(1+e^{-pi t}))' = pi/(e^{pi t}+1); ln(pi t/(1-e^{-pi t}))' = 1/t - pi/(e^{pi t}-1)
    double g = even ? pi / (std::exp(pi * t) + 1.0) : 1.0 / t - pi / std::expm1(pi * t);
    for (int i = 1; i <= factors; ++i) {
        const double a = even ? 2.0 * i - 1.0 : 2.0 * i;
        g += 2.0 * t / (t * t + a * a);
    }
    return g;
}

double sphere_spread_derivative(SphereSpec spec, double t) {
    return sphere_spread(spec, t) * sphere_log_derivative(spec, t);
}

double circle_g_dimension(double t) {
    require_positive(t);
    const double x = pi * t;
    return 1.0 - x / std::expm1(x);
}

double circle_f_dimension(double t) {
    if (!(t > 1.0) || !std::isfinite(t))
        throw DomainError("circle F needs t > 1, got " + std::to_string(t));
    return 1.0 + (std::log(pi) - std::log(-std::expm1(-t * pi))) / std::log(t);
}

}  // namespace spreaddim::oracle
