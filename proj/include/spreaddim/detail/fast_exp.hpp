#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>

namespace spreaddim::detail {

// exp(x) for x <= 0, branch-free so loops over it vectorise. Arguments below
// -708 are clamped (the result is then ~3e-308, which the spread sums treat as
// zero). Max relative error against std::exp is a few units in the last place.
inline double exp_nonpositive(double x) noexcept {
    x = std::max(x, -708.0);
    constexpr double shifter = 0x1.8p52;
    constexpr double log2e = 0x1.71547652b82fep0;
    constexpr double ln2_hi = 0x1.62e42fefa3800p-1;
    constexpr double ln2_lo = 0x1.ef35793c76730p-45;

    double kd = x * log2e + shifter;
    const std::uint64_t kbits = std::bit_cast<std::uint64_t>(kd);
    kd -= shifter;
    const double r = (x - kd * ln2_hi) - kd * ln2_lo;

    // Taylor series to r^12; |r| <= ln(2)/2 keeps the truncation below 2e-16.
    double p = 1.0 / 479001600.0;
    p = p * r + 1.0 / 39916800.0;
    p = p * r + 1.0 / 3628800.0;
    p = p * r + 1.0 / 362880.0;
    p = p * r + 1.0 / 40320.0;
    p = p * r + 1.0 / 5040.0;
    p = p * r + 1.0 / 720.0;
    p = p * r + 1.0 / 120.0;
    p = p * r + 1.0 / 24.0;
    p = p * r + 1.0 / 6.0;
    p = p * r + 0.5;
    p = p * r + 1.0;
    p = p * r + 1.0;

    // The low bits of kbits hold k in two's complement; shifting them into the
    // exponent field builds 2^k directly.
    const double scale = std::bit_cast<double>((kbits + 1023) << 52);
    return p * scale;
}

}  // namespace spreaddim::detail
