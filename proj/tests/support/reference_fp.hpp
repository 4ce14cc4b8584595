#pragma once

// Reference IEEE binary16 conversion working directly on the bit pattern of
// the double, so there is no intermediate rounding through float.

#include <bit>
#include <cmath>
#include <cstdint>

namespace testref {

inline std::uint16_t double_to_half_bits(double x)
{
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    const std::uint16_t sign = static_cast<std::uint16_t>((bits >> 48) & 0x8000u);
    const int biased = static_cast<int>((bits >> 52) & 0x7ff);
    const std::uint64_t frac = bits & ((std::uint64_t{1} << 52) - 1);

    if (biased == 0x7ff) return sign | (frac ? 0x7e00u : 0x7c00u);
    if (biased == 0) return sign; // double zeros and subnormals are far below 2^-25

    const int e = biased - 1023;
    const std::uint64_t sig = frac | (std::uint64_t{1} << 52);
    // Keep 10 fraction bits for normals; subnormals share the 2^-24 grid.
    const int shift = e >= -14 ? 42 : 42 + (-14 - e);
    if (shift > 63) return sign;

    std::uint64_t q = sig >> shift;
    const std::uint64_t rem = sig & ((std::uint64_t{1} << shift) - 1);
    const std::uint64_t half = std::uint64_t{1} << (shift - 1);
    if (rem > half || (rem == half && (q & 1))) ++q;

    if (e < -14) return sign | static_cast<std::uint16_t>(q); // q == 1024 is the min normal
    int exp_field = e + 15;
    if (q == 2048) {
        q = 1024;
        ++exp_field;
    }
    if (exp_field >= 31) return sign | 0x7c00u;
    return sign | static_cast<std::uint16_t>((exp_field << 10) | (q & 0x3ff));
}

inline double half_bits_to_double(std::uint16_t h)
{
    const double s = (h & 0x8000u) ? -1.0 : 1.0;
    const int exp_field = (h >> 10) & 0x1f;
    const int frac = h & 0x3ff;
    if (exp_field == 0x1f) return frac ? std::nan("") : s * INFINITY;
    if (exp_field == 0) return s * std::ldexp(static_cast<double>(frac), -24);
    return s * std::ldexp(static_cast<double>(frac | 0x400), exp_field - 25);
}

inline double to_half(double x) { return half_bits_to_double(double_to_half_bits(x)); }

inline double to_single(double x) { return static_cast<double>(static_cast<float>(x)); }

} // namespace testref
