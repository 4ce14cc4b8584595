#pragma once

#include <cstdint>
#include <vector>

namespace tlsmp {

// Relative cost of one operation in the working, PCGTLS and factorization
// precisions.
struct CostConstants {
    double c = 1.0;
    double c_p = 0.5;
    double c_q = 0.25;

    static CostConstants uniform() { return {1.0, 1.0, 1.0}; }
    static CostConstants mixed() { return {1.0, 0.5, 0.25}; }
    void validate() const;
};

// Exact operation counts of the three terms, before weighting.
struct OpCounts {
    std::int64_t working = 0; // 2mn + 3m + 4n + 2n^2 - 2 + r (4mn + 5m + 11n - 5)
    std::int64_t pcg = 0;     // 2r (n^2 + 2n - 1) + (r^2 + 3r)(2n^2 + 14n - 3)
    // 2mn^2 - 2n^3/3 is not an integer unless 3 divides n; kept as thirds.
    std::int64_t factor_thirds = 0; // 6mn^2 - 2n^3

    double factor() const { return static_cast<double>(factor_thirds) / 3.0; }
};

// Throws std::invalid_argument unless m >= n >= 1 and r >= 0, or if a count
// does not fit in 64 bits.
OpCounts op_counts(std::int64_t m, std::int64_t n, std::int64_t r);

struct CostResult {
    double total = 0.0;
    double term_c = 0.0;
    double term_cp = 0.0;
    double term_cq = 0.0;
};

CostResult cost(std::int64_t m, std::int64_t n, std::int64_t r,
                const CostConstants& k = CostConstants::uniform());

// cost(uniform) / cost(mixed), so that values above 1 mean the mixed
// precision variant is cheaper.
double speedup(std::int64_t m, std::int64_t n, std::int64_t r,
               const CostConstants& mixed = CostConstants::mixed(),
               const CostConstants& uniform = CostConstants::uniform());

struct GridCell {
    std::int64_t m = 0;
    std::int64_t n = 0;
    std::int64_t r = 0;
    double speedup = 0.0;
};

// Cells with n > m are skipped.
std::vector<GridCell> speedup_grid(const std::vector<std::int64_t>& ms,
                                   const std::vector<std::int64_t>& ns, std::int64_t r,
                                   const CostConstants& mixed = CostConstants::mixed(),
                                   const CostConstants& uniform = CostConstants::uniform());

// `count` integers spaced logarithmically from lo to hi inclusive, rounded
// to the nearest integer with duplicates removed.
std::vector<std::int64_t> log_space(std::int64_t lo, std::int64_t hi, int count);

} // namespace tlsmp
