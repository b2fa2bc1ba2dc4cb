#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace spreaddim {

/// Stateless counter-based generator: every draw is a pure function of
/// (seed, stream, slot), so samples can be produced in any order or in
/// parallel and still be bit-identical. The mixing function is the SplitMix64
/// finaliser applied to the key in three rounds.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    constexpr std::uint64_t bits(std::uint64_t stream, std::uint64_t slot) const noexcept {
        std::uint64_t z = mix(seed_);
        z = mix(z ^ (stream * 0xd1b54a32d192ed03ULL));
        return mix(z ^ (slot * 0x8cb92ba72f3d8dd7ULL));
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform(std::uint64_t stream, std::uint64_t slot) const noexcept {
        return static_cast<double>(bits(stream, slot) >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller on slots (2*slot, 2*slot + 1).
    double normal(std::uint64_t stream, std::uint64_t slot) const noexcept {
        const double u1 = 1.0 - uniform(stream, 2 * slot);  // (0, 1]
        const double u2 = uniform(stream, 2 * slot + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Independent generator for a sub-experiment.
    constexpr CounterRng split(std::uint64_t tag) const noexcept {
        return CounterRng(mix(seed_ ^ mix(tag + 0x5851f42d4c957f2dULL)));
    }

    constexpr std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
};

}  // namespace spreaddim
