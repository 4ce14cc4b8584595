#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tlsmp {

class Matrix;

// A binary floating-point format simulated on top of host doubles.
//
// `t` counts significand bits including the implicit leading bit, so the
// spacing of representable numbers in [1, 2) is 2^(1-t) and the unit roundoff
// is half of that.
struct FpFormat {
    std::string name;
    int t = 53;
    int e_min = -1022;
    int e_max = 1023;
    bool supports_subnormals = true;

    double unit_roundoff() const;
    double max_finite() const;
    double min_normal() const;
    double min_subnormal() const;

    // True when the format coincides with the host double, so rounding is the
    // identity.
    bool is_substrate() const { return t >= 53 && e_min <= -1022 && e_max >= 1023; }

    friend bool operator==(const FpFormat& a, const FpFormat& b)
    {
        return a.t == b.t && a.e_min == b.e_min && a.e_max == b.e_max &&
               a.supports_subnormals == b.supports_subnormals;
    }
};

const FpFormat& fp16();
const FpFormat& fp32();
const FpFormat& fp64();

// Resolves "fp16", "fp32" or "fp64"; throws std::invalid_argument otherwise.
const FpFormat& format_by_name(std::string_view name);

std::vector<FpFormat> preset_formats();

// Working precision u, PCGTLS precision u_p and factorization precision u_q.
// The working precision must be the most accurate of the three.
struct PrecisionConfig {
    FpFormat u = fp64();
    FpFormat up = fp64();
    FpFormat uq = fp64();

    static PrecisionConfig uniform(const FpFormat& fmt) { return {fmt, fmt, fmt}; }

    // Throws std::invalid_argument unless
    // unit_roundoff(u) <= unit_roundoff(up) <= unit_roundoff(uq).
    void validate() const;
};

// Saturation diagnostics collected while rounding.
struct RoundingEvents {
    std::uint64_t overflow = 0;
    std::uint64_t underflow = 0;
    std::uint64_t division_by_zero = 0;

    std::uint64_t total() const { return overflow + underflow + division_by_zero; }
};

// Round to nearest, ties to even. Magnitudes beyond the largest finite value
// become +-infinity; nonzero values that round to zero keep their sign.
double round_scalar(double x, const FpFormat& fmt);
double round_scalar(double x, const FpFormat& fmt, RoundingEvents& events);

enum class ArithOp { add, sub, mul, div };

// a op b evaluated in the host double and rounded to fmt. Inputs are expected
// to be representable in fmt already.
double simulated_op(double a, double b, ArithOp op, const FpFormat& fmt);
double simulated_op(double a, double b, ArithOp op, const FpFormat& fmt, RoundingEvents& events);

Matrix round_matrix(const Matrix& m, const FpFormat& fmt);
std::vector<double> round_vector(const std::vector<double>& v, const FpFormat& fmt);

} // namespace tlsmp
