#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "tlsmp/precision.hpp"

namespace tlsmp {

enum class Kernel {
    matvec,         // 2mn - m for an m x n operator
    dot,            // 2n - 1
    vec_update,     // lambda*x + y, 2n
    vec_scale_add,  // alpha*x + beta*y, 3n
    vec_add,        // x + y, n
    tri_solve,      // n^2
    householder_qr, // 2mn^2 - 2n^3/3
    gram,
    cholesky,
    diag_scale,
    sqrt,
};

std::string_view kernel_name(Kernel k);

// Operation tallies keyed by kernel kind and format name. Counts follow the
// kernel cost table rather than the number of host instructions; scalar
// bookkeeping between kernels is not charged.
class FlopCounter {
public:
    void add(Kernel kernel, std::string_view format, double ops);

    double total() const;
    double total_for_format(std::string_view format) const;
    double total_for_kernel(Kernel kernel) const;
    double get(Kernel kernel, std::string_view format) const;

    const std::map<std::pair<Kernel, std::string>, double>& entries() const { return tallies_; }
    void reset() { tallies_.clear(); }

private:
    std::map<std::pair<Kernel, std::string>, double> tallies_;
};

// Mutable state owned by one solver run. Not safe for concurrent writers.
struct SolverContext {
    FlopCounter flops;
    RoundingEvents events;
};

// Arithmetic in one simulated format. Every operation rounds its result;
// kernels additionally charge their cost to the attached context, if any.
class Arith {
public:
    explicit Arith(const FpFormat& fmt, SolverContext* ctx = nullptr) : fmt_(fmt), ctx_(ctx) {}

    const FpFormat& format() const { return fmt_; }
    SolverContext* context() const { return ctx_; }

    // Same format, but nothing is charged to the flop counter.
    Arith uncounted() const;

    double round(double x) const;
    double add(double a, double b) const { return round(a + b); }
    double sub(double a, double b) const { return round(a - b); }
    double mul(double a, double b) const { return round(a * b); }
    double div(double a, double b) const;
    double sqrt(double a) const;

    void charge(Kernel kernel, double ops) const;

private:
    FpFormat fmt_;
    SolverContext* ctx_ = nullptr;
    bool counting_ = true;
};

} // namespace tlsmp
