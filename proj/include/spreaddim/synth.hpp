#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "spreaddim/metric.hpp"

namespace spreaddim::synth {

struct Circle {};

/// Unit sphere S^n in R^{n+1}.
struct Sphere {
    int n = 2;
};

/// Unit cube [0, 1]^n.
struct Cube {
    int n = 2;
};

/// Uniform patch [0, 1]^d x {0}^{m-d} with isotropic N(0, noise^2) added to
/// every one of the m coordinates.
struct NoisyPlane {
    int intrinsic = 1;
    int ambient = 2;
    double noise = 0.05;
};

struct Product;

using Shape = std::variant<Circle, Sphere, Cube, NoisyPlane, Product>;

/// Row i concatenates point i of an independent left sample with point i of
/// an independent right sample.
struct Product {
    std::shared_ptr<const Shape> left;
    std::shared_ptr<const Shape> right;
};

struct SampleSpec {
    Shape shape;
    std::size_t count = 1000;
    std::uint64_t seed = 0;
};

struct Sample {
    PointCloud cloud;
    std::vector<double> angles;  // circle only, in [0, 2*pi)
};

/// Deterministic for a fixed spec: coordinate k of point i depends only on
/// (seed, i, k). Throws ValidationError for an invalid spec.
Sample sample(const SampleSpec& spec);

/// Ambient dimension of the points a shape produces.
int ambient_dim(const Shape& shape);

void validate(const Shape& shape);

/// Parses "circle", "sphere:N", "cube:N", "noisy-plane:D:M[:NOISE]" and
/// "product(A,B)" with A and B themselves shape expressions.
Shape parse_shape(const std::string& expr);

std::string describe(const Shape& shape);

}  // namespace spreaddim::synth
