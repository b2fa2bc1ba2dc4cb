#include "spreaddim/synth.hpp"

#include <cmath>
#include <charconv>
#include <numbers>

#include "spreaddim/errors.hpp"
#include "spreaddim/rng.hpp"

namespace spreaddim::synth {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr std::uint64_t noise_tag = 0x6e6f697365ULL;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double circle_angle(const CounterRng& rng, std::size_t i) {
    const double theta = two_pi * rng.uniform(i, 0);
    return theta < two_pi ? theta : 0.0;
}

// Writes point i of `shape` into out (ambient_dim(shape) values).
void draw(const Shape& shape, const CounterRng& rng, std::size_t i, double* out) {
    std::visit(overloaded{
                   [&](const Circle&) {
                       const double theta = circle_angle(rng, i);
                       out[0] = std::cos(theta);
                       out[1] = std::sin(theta);
                   },
                   [&](const Sphere& s) {
                       double norm2 = 0.0;
                       for (int k = 0; k <= s.n; ++k) {
                           out[k] = rng.normal(i, k);
                           norm2 += out[k] * out[k];
                       }
                       const double norm = std::sqrt(norm2);
                       for (int k = 0; k <= s.n; ++k) out[k] /= norm;
                   },
                   [&](const Cube& c) {
                       for (int k = 0; k < c.n; ++k) out[k] = rng.uniform(i, k);
                   },
                   [&](const NoisyPlane& p) {
                       const auto noise = rng.split(noise_tag);
                       for (int k = 0; k < p.ambient; ++k) {
                           const double base = k < p.intrinsic ? rng.uniform(i, k) : 0.0;
                           out[k] = base + p.noise * noise.normal(i, k);
                       }
                   },
                   [&](const Product& p) {
                       draw(*p.left, rng.split(1), i, out);
                       draw(*p.right, rng.split(2), i, out + ambient_dim(*p.left));
                   },
               },
               shape);
}

int parse_int(const std::string& s, const std::string& expr) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ValidationError("bad integer '" + s + "' in shape '" + expr + "'");
    return v;
}

double parse_double(const std::string& s, const std::string& expr) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ValidationError("bad number '" + s + "' in shape '" + expr + "'");
    return v;
}

std::vector<std::string> split_colon(const std::string& s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(':', start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

}  // namespace

int ambient_dim(const Shape& shape) {
    return std::visit(overloaded{
                          [](const Circle&) { return 2; },
                          [](const Sphere& s) { return s.n + 1; },
                          [](const Cube& c) { return c.n; },
                          [](const NoisyPlane& p) { return p.ambient; },
                          [](const Product& p) {
                              return ambient_dim(*p.left) + ambient_dim(*p.right);
                          },
                      },
                      shape);
}

void validate(const Shape& shape) {
    std::visit(overloaded{
                   [](const Circle&) {},
                   [](const Sphere& s) {
                       if (s.n < 1) throw ValidationError("sphere dimension must be >= 1");
                   },
                   [](const Cube& c) {
                       if (c.n < 1) throw ValidationError("cube dimension must be >= 1");
                   },
                   [](const NoisyPlane& p) {
                       if (p.intrinsic < 1 || p.ambient <= p.intrinsic)
                           throw ValidationError("noisy plane needs 1 <= d < m");
                       if (!(p.noise >= 0.0) || !std::isfinite(p.noise))
                           throw ValidationError("noise scale must be finite and >= 0");
                   },
                   [](const Product& p) {
                       if (!p.left || !p.right)
                           throw ValidationError("product needs two factor shapes");
                       validate(*p.left);
                       validate(*p.right);
                   },
               },
               shape);
}

Sample sample(const SampleSpec& spec) {
    validate(spec.shape);
    if (spec.count < 1) throw ValidationError("sample count must be >= 1");
    const auto m = static_cast<std::size_t>(ambient_dim(spec.shape));
    const CounterRng rng(spec.seed);

    std::vector<double> coords(spec.count * m);
    for (std::size_t i = 0; i < spec.count; ++i) draw(spec.shape, rng, i, coords.data() + i * m);

    Sample out{PointCloud(spec.count, m, std::move(coords)), {}};
    if (std::holds_alternative<Circle>(spec.shape)) {
        out.angles.resize(spec.count);
        for (std::size_t i = 0; i < spec.count; ++i) out.angles[i] = circle_angle(rng, i);
    }
    return out;
}

Shape parse_shape(const std::string& expr) {
    if (expr.rfind("product(", 0) == 0 && expr.back() == ')') {
        const std::string inner = expr.substr(8, expr.size() - 9);
        int depth = 0;
        for (std::size_t i = 0; i < inner.size(); ++i) {
            if (inner[i] == '(') ++depth;
            if (inner[i] == ')') --depth;
            if (inner[i] == ',' && depth == 0) {
                Product p{std::make_shared<const Shape>(parse_shape(inner.substr(0, i))),
                          std::make_shared<const Shape>(parse_shape(inner.substr(i + 1)))};
                return p;
            }
        }
        throw ValidationError("product shape needs two comma-separated factors: '" + expr + "'");
    }

    const auto parts = split_colon(expr);
    const std::string& name = parts.front();
    Shape shape;
    if (name == "circle" && parts.size() == 1) {
        shape = Circle{};
    } else if (name == "sphere" && parts.size() == 2) {
        shape = Sphere{parse_int(parts[1], expr)};
    } else if (name == "cube" && parts.size() == 2) {
        shape = Cube{parse_int(parts[1], expr)};
    } else if ((name == "noisy-plane" || name == "noisy_plane") &&
               (parts.size() == 3 || parts.size() == 4)) {
        NoisyPlane p{parse_int(parts[1], expr), parse_int(parts[2], expr), 0.05};
        if (parts.size() == 4) p.noise = parse_double(parts[3], expr);
        shape = p;
    } else {
        throw ValidationError("unknown shape expression '" + expr + "'");
    }
    validate(shape);
    return shape;
}

std::string describe(const Shape& shape) {
    return std::visit(
        overloaded{
            [](const Circle&) { return std::string("circle"); },
            [](const Sphere& s) { return "sphere:" + std::to_string(s.n); },
            [](const Cube& c) { return "cube:" + std::to_string(c.n); },
            [](const NoisyPlane& p) {
                char buf[32];
                auto res = std::to_chars(buf, buf + sizeof buf, p.noise);
                return "noisy-plane:" + std::to_string(p.intrinsic) + ":" +
                       std::to_string(p.ambient) + ":" + std::string(buf, res.ptr);
            },
            [](const Product& p) {
                return "product(" + describe(*p.left) + "," + describe(*p.right) + ")";
            },
        },
        shape);
}

}  // namespace spreaddim::synth
