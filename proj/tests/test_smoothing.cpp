#include <doctest.h>

#include <cmath>

#include "spreaddim/errors.hpp"
#include "spreaddim/smoothing.hpp"
#include "support.hpp"

using namespace spreaddim;

namespace {

double total_variance(const PointCloud& c) {
    double total = 0;
    for (std::size_t k = 0; k < c.dim(); ++k) {
        double mean = 0;
        for (std::size_t i = 0; i < c.size(); ++i) mean += c(i, k);
        mean /= c.size();
        for (std::size_t i = 0; i < c.size(); ++i) total += (c(i, k) - mean) * (c(i, k) - mean);
    }
    return total / c.size();
}

}  // namespace

TEST_CASE("k = 1 with self is the identity") {
    const auto c = testing::random_cloud(30, 3, 1);
    CHECK(knn_smooth(c, {1, true}) == c);
}

TEST_CASE("k = n maps every point to the centroid") {
    const auto c = testing::random_cloud(25, 2, 2);
    const auto s = knn_smooth(c, {25, true});
    double cx = 0, cy = 0;
    for (std::size_t i = 0; i < 25; ++i) {
        cx += c(i, 0);
        cy += c(i, 1);
    }
    for (std::size_t i = 0; i < 25; ++i) {
        CHECK(s(i, 0) == doctest::Approx(cx / 25).epsilon(1e-14));
        CHECK(s(i, 1) == doctest::Approx(cy / 25).epsilon(1e-14));
    }
}

TEST_CASE("collinear example") {
    const auto c = PointCloud::from_rows({{0}, {1}, {10}});
    const auto s = knn_smooth(c, {2, true});
    CHECK(s(0, 0) == 0.5);
    CHECK(s(1, 0) == 0.5);
    CHECK(s(2, 0) == 5.5);

    const auto x = knn_smooth(c, {1, false});
    CHECK(x(0, 0) == 1.0);
    CHECK(x(1, 0) == 0.0);
    CHECK(x(2, 0) == 1.0);
}

TEST_CASE("distance ties go to the lower index") {
    const auto c = PointCloud::from_rows({{0}, {-1}, {1}});
    CHECK(nearest_neighbours(c, 0, 2) == std::vector<std::size_t>{0, 1});
    CHECK(nearest_neighbours(c, 0, 1, false) == std::vector<std::size_t>{1});
}

TEST_CASE("invalid k") {
    const auto c = testing::random_cloud(5, 2, 3);
    CHECK_THROWS_AS(knn_smooth(c, {6, true}), ValidationError);
    CHECK_THROWS_AS(knn_smooth(c, {5, false}), ValidationError);
    CHECK_THROWS_AS(knn_smooth(c, {0, true}), ValidationError);
}

TEST_CASE("k from percent") {
    CHECK(k_from_percent(15, 16000) == 2400);
    CHECK(k_from_percent(15, 2000) == 300);
    CHECK(k_from_percent(0.001, 10) == 1);
    CHECK(k_from_percent(100, 10) == 10);
    CHECK_THROWS_AS(k_from_percent(0, 10), ValidationError);
    CHECK_THROWS_AS(k_from_percent(101, 10), ValidationError);
}

TEST_CASE("smoothing commutes with rigid motions") {
    const auto c = testing::random_cloud(120, 2, 4);
    const double th = 0.7, ct = std::cos(th), st = std::sin(th);
    std::vector<double> moved;
    for (std::size_t i = 0; i < c.size(); ++i) {
        moved.push_back(ct * c(i, 0) - st * c(i, 1) + 3.0);
        moved.push_back(st * c(i, 0) + ct * c(i, 1) - 1.5);
    }
    const auto a = knn_smooth(PointCloud(120, 2, moved), {9, true});
    const auto b = knn_smooth(c, {9, true});
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(std::abs(a(i, 0) - (ct * b(i, 0) - st * b(i, 1) + 3.0)) <= 1e-10);
        CHECK(std::abs(a(i, 1) - (st * b(i, 0) + ct * b(i, 1) - 1.5)) <= 1e-10);
    }
}

TEST_CASE("smoothing contracts total variance") {
    const auto c = testing::random_cloud(200, 3, 6);
    for (std::size_t k : {2u, 10u, 60u}) CHECK(total_variance(knn_smooth(c, {k, true})) <= total_variance(c));
}

TEST_CASE("local samples") {
    const auto c = PointCloud::from_rows({{0}, {1}, {2}, {10}});
    const auto s = local_sample(c, 0, 3);
    REQUIRE(s.size() == 3);
    CHECK(s(0, 0) == 0);
    CHECK(s(1, 0) == 1);
    CHECK(s(2, 0) == 2);

    CHECK(local_sample(c, 3, 1) == PointCloud::from_rows({{10}}));
    const auto all = local_sample(c, 2, 4);
    CHECK(all == PointCloud::from_rows({{2}, {1}, {0}, {10}}));

    CHECK_THROWS_AS(local_sample(c, 4, 1), ValidationError);
    CHECK_THROWS_AS(local_sample(c, 0, 5), ValidationError);
    CHECK_THROWS_AS(local_sample(c, 0, 0), ValidationError);
}
