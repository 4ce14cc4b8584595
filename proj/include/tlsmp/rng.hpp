#pragma once

#include <cstdint>

namespace tlsmp {

// xoshiro256** seeded through splitmix64. A given seed yields the same
// stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t draws() const { return draws_; }

    std::uint64_t next_u64();
    // Uniform on [0, 1) with 53 random bits.
    double uniform01();
    // Uniform on [lo, hi).
    double uniform(double lo, double hi);
    // Standard normal through the Box-Muller transform; one value per call.
    double normal();

private:
    std::uint64_t s_[4];
    std::uint64_t seed_;
    std::uint64_t draws_ = 0;
};

} // namespace tlsmp
