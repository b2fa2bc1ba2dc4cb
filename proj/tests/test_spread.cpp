#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "spreaddim/detail/fast_exp.hpp"
#include "spreaddim/errors.hpp"
#include "spreaddim/spread.hpp"
#include "spreaddim/synth.hpp"
#include "support.hpp"

using namespace spreaddim;

namespace {

DistanceMatrix two_points(double r) { return DistanceMatrix(2, {0, r, r, 0}); }

double two_point_sigma(double r, double t) { return 2.0 / (1.0 + std::exp(-t * r)); }

double two_point_dsigma(double r, double t) {
    const double e = std::exp(-t * r);
    return 2.0 * r * e / ((1.0 + e) * (1.0 + e));
}

}  // namespace

TEST_CASE("exp kernel tracks std::exp on the nonpositive axis") {
    double worst = 0.0;
    for (double x = -707.0; x <= 0.0; x += 0.01337) {
        const double ref = std::exp(x);
        worst = std::max(worst, std::abs(detail::exp_nonpositive(x) - ref) / ref);
    }
    CHECK(worst < 1e-15);
    CHECK(detail::exp_nonpositive(0.0) == 1.0);
    CHECK(detail::exp_nonpositive(-1e6) < 1e-300);
}

TEST_CASE("two-point space matches the closed form") {
    for (double r : {0.3, 1.0, 4.0})
        for (double t : {0.1, 1.0, 2.0, 4.0, 25.0}) {
            CHECK(testing::rel_diff(spread_naive(two_points(r), t), two_point_sigma(r, t)) < 1e-15);
            CHECK(testing::rel_diff(spread_vectorised(two_points(r), t), two_point_sigma(r, t)) <
                  1e-15);
            CHECK(testing::rel_diff(spread_derivative(two_points(r), t), two_point_dsigma(r, t)) <
                  1e-14);
        }
    CHECK(spread_vectorised(two_points(1.0), std::log(3.0)) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("t = 0 gives sigma 1 and G 0") {
    const auto d = testing::random_metric(17, 2);
    CHECK(spread_naive(d, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(spread_vectorised(d, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(instantaneous_dimension(d, 0.0) == 0.0);

    const auto curve = sweep(d, ScaleGrid({0.0}));
    REQUIRE(curve.size() == 1);
    CHECK(curve.points[0].sigma == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(curve.points[0].g_dim == 0.0);
    CHECK_FALSE(curve.points[0].f_dim.has_value());
}

TEST_CASE("all-zero distances have zero derivative") {
    const DistanceMatrix z(4, std::vector<double>(16, 0.0));
    CHECK(spread_derivative(z, 3.0) == 0.0);
    CHECK(spread_vectorised(z, 3.0) == doctest::Approx(1.0));
}

TEST_CASE("vectorised sigma agrees with the naive loop and an extended-precision oracle") {
    const auto d = testing::random_metric(50, 99);
    const double naive = spread_naive(d, 2.0);
    const double vec = spread_vectorised(d, 2.0);
    CHECK(testing::rel_diff(vec, naive) <= 1e-12);
    CHECK(testing::rel_diff(vec, static_cast<double>(testing::spread_ld(d, 2.0L))) <= 1e-13);
}

TEST_CASE("derivative matches central differences") {
    const auto d = testing::random_metric(50, 4);
    const double t = 1.0, h = 1e-5;
    const double fd = (spread_naive(d, t + h) - spread_naive(d, t - h)) / (2 * h);
    CHECK(testing::rel_diff(spread_derivative(d, t), fd) <= 1e-6);
    CHECK(testing::rel_diff(spread_derivative(d, t), spread_derivative_naive(d, t)) <= 1e-12);
}

TEST_CASE("F dimension domain and values") {
    CHECK_THROWS_AS(f_dimension(two_points(1.0), 1.0), DomainError);
    CHECK_THROWS_AS(f_dimension(two_points(1.0), 0.5), DomainError);
    CHECK_THROWS_AS(f_dimension_from_spread(2.0, 1.0), DomainError);
    // sigma = t^k gives F = k
    CHECK(f_dimension_from_spread(std::pow(7.0, 2.5), 7.0) == doctest::Approx(2.5).epsilon(1e-14));
    const double e = std::exp(1.0);
    CHECK(f_dimension(two_points(1.0), e) ==
          doctest::Approx(std::log(2.0 / (1.0 + std::exp(-e)))).epsilon(1e-14));
}

TEST_CASE("negative and non-finite scales are domain errors") {
    const auto d = two_points(1.0);
    CHECK_THROWS_AS(spread_naive(d, -0.1), DomainError);
    CHECK_THROWS_AS(spread_vectorised(d, -0.1), DomainError);
    CHECK_THROWS_AS(spread_derivative(d, NAN), DomainError);
    CHECK_THROWS_AS(ScaleGrid({0.5, -1.0}), DomainError);
    CHECK_THROWS_AS(ScaleGrid({1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(ScaleGrid({}), ValidationError);
}

TEST_CASE("sweep over a two-point space") {
    const auto curve = sweep(two_points(1.0), ScaleGrid({1.0, 2.0, 4.0}));
    REQUIRE(curve.size() == 3);
    CHECK(curve.n == 2);
    for (const auto& p : curve.points) {
        CHECK(testing::rel_diff(p.sigma, two_point_sigma(1.0, p.t)) < 1e-15);
        CHECK(testing::rel_diff(p.dsigma_dt, two_point_dsigma(1.0, p.t)) < 1e-14);
        CHECK(p.g_dim == p.t * p.dsigma_dt / p.sigma);
        CHECK(p.f_dim.has_value() == (p.t > 1.0));
    }
    CHECK(*curve.points[1].f_dim == doctest::Approx(std::log(two_point_sigma(1, 2)) / std::log(2.0)));
}

TEST_CASE("two-point G decays at large t") {
    CHECK(instantaneous_dimension(two_points(1.0), 60.0) < 1e-20);
}

TEST_CASE("sweep is independent of block size and thread count") {
    const auto cloud = testing::random_cloud(157, 3, 8);
    const auto d = euclidean_distances(cloud);
    const auto grid = ScaleGrid::log_spaced(0.05, 40.0, 23);
    const auto ref = sweep(d, grid, {512, 1});
    for (std::size_t block : {1u, 7u, 64u, 157u, 1000u})
        for (unsigned threads : {1u, 3u}) {
            const auto c = sweep(EuclideanRows(cloud), grid, {block, threads});
            for (std::size_t k = 0; k < grid.size(); ++k) {
                CHECK(c.points[k].sigma == ref.points[k].sigma);
                CHECK(c.points[k].dsigma_dt == ref.points[k].dsigma_dt);
            }
        }
}

TEST_CASE("sigma bounds, monotonicity and permutation invariance") {
    std::mt19937_64 gen(21);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t n = 5 + gen() % 60;
        const auto d = testing::random_metric(n, gen());
        const auto grid = ScaleGrid::log_spaced(1e-3, 1e3, 40);
        const auto curve = sweep(d, grid);
        double prev = 0.0;
        for (const auto& p : curve.points) {
            CHECK(p.sigma >= 1.0 - 1e-15);
            CHECK(p.sigma <= static_cast<double>(n) + 1e-12);
            CHECK(p.dsigma_dt >= 0.0);
            CHECK(p.sigma >= prev);
            prev = p.sigma;
        }
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), gen);
        const auto pd = d.permuted(perm);
        for (double t : {0.3, 3.0})
            CHECK(spread_naive(pd, t) == doctest::Approx(spread_naive(d, t)).epsilon(1e-14));
    }
}

TEST_CASE("product of spaces multiplies sigma and adds G") {
    const auto x = testing::random_metric(7, 1, 2);
    const auto y = testing::random_metric(9, 2, 1);
    const auto xy = product_distances(x, y);
    for (double t : {0.2, 1.0, 5.0}) {
        const double sx = spread_vectorised(x, t), sy = spread_vectorised(y, t);
        CHECK(testing::rel_diff(spread_vectorised(xy, t), sx * sy) <= 1e-10);
        CHECK(std::abs(instantaneous_dimension(xy, t) -
                       (instantaneous_dimension(x, t) + instantaneous_dimension(y, t))) <= 1e-8);
    }
}

TEST_CASE("G is equivariant under scaling the metric") {
    const auto d = testing::random_metric(60, 12);
    for (double a : {0.01, 3.0, 100.0})
        for (double t : {0.1, 1.0, 10.0})
            CHECK(testing::rel_diff(instantaneous_dimension(d.scaled(a), t),
                                    instantaneous_dimension(d, a * t)) <= 1e-12);
}

TEST_CASE("median distance and the auto grid") {
    // pairs: 1, 2, 3 -> median 2
    const DistanceMatrix d(3, {0, 1, 2, 1, 0, 3, 2, 3, 0});
    CHECK(median_distance(MatrixRows(d)) == 2.0);
    const auto g = auto_grid(MatrixRows(d));
    CHECK(g.size() == 200);
    CHECK(g.front() == doctest::Approx(0.005));
    CHECK(g.back() == doctest::Approx(50.0));

    // even number of pairs: mean of the middle two
    const auto four = euclidean_distances(PointCloud::from_rows({{0}, {1}, {3}, {7}}));
    // pairs 1,3,7,2,6,4 -> sorted 1,2,3,4,6,7 -> 3.5
    CHECK(median_distance(MatrixRows(four)) == 3.5);

    // all zero distances fall back to the unit window
    const DistanceMatrix z(3, std::vector<double>(9, 0.0));
    CHECK(auto_grid(MatrixRows(z), 5).front() == doctest::Approx(0.01));
    const DistanceMatrix single(1, {0.0});
    CHECK(auto_grid(MatrixRows(single), 5).back() == doctest::Approx(100.0));

    // mostly duplicates: median of the positive distances
    const auto dup = euclidean_distances(PointCloud::from_rows({{0}, {0}, {0}, {0}, {2}}));
    CHECK(median_distance(MatrixRows(dup)) == 2.0);
}

TEST_CASE("median from generated rows matches the matrix route") {
    const auto cloud = testing::random_cloud(301, 2, 77);
    const auto d = euclidean_distances(cloud);
    CHECK(median_distance(EuclideanRows(cloud), {16, 1}) == median_distance(MatrixRows(d)));
}

TEST_CASE("log-spaced grid endpoints are exact") {
    const auto g = ScaleGrid::log_spaced(0.5, 10.0, 100);
    CHECK(g.front() == 0.5);
    CHECK(g.back() == 10.0);
    for (std::size_t i = 1; i < g.size(); ++i)
        CHECK(g[i] / g[i - 1] == doctest::Approx(std::pow(20.0, 1.0 / 99)).epsilon(1e-12));
    const auto lin = ScaleGrid::linear(0.0, 1.0, 5);
    CHECK(lin[2] == 0.5);
}
