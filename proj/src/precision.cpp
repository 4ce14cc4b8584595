#include "tlsmp/precision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tlsmp/matrix.hpp"

namespace tlsmp {

double FpFormat::unit_roundoff() const { return std::ldexp(1.0, -t); }

double FpFormat::max_finite() const
{
    return std::ldexp(2.0 - std::ldexp(1.0, 1 - t), e_max);
}

double FpFormat::min_normal() const { return std::ldexp(1.0, e_min); }

double FpFormat::min_subnormal() const
{
    return supports_subnormals ? std::ldexp(1.0, e_min - t + 1) : min_normal();
}

const FpFormat& fp16()
{
    static const FpFormat f{"fp16", 11, -14, 15, true};
    return f;
}

const FpFormat& fp32()
{
    static const FpFormat f{"fp32", 24, -126, 127, true};
    return f;
}

const FpFormat& fp64()
{
    static const FpFormat f{"fp64", 53, -1022, 1023, true};
    return f;
}

const FpFormat& format_by_name(std::string_view name)
{
    if (name == "fp16") return fp16();
    if (name == "fp32") return fp32();
    if (name == "fp64") return fp64();
    throw std::invalid_argument("unknown floating-point format '" + std::string(name) + "'");
}

std::vector<FpFormat> preset_formats() { return {fp16(), fp32(), fp64()}; }

void PrecisionConfig::validate() const
{
    if (!(u.unit_roundoff() <= up.unit_roundoff() && up.unit_roundoff() <= uq.unit_roundoff())) {
        throw std::invalid_argument("precision configuration (" + u.name + ", " + up.name + ", " +
                                    uq.name + ") must satisfy u <= u_p <= u_q in unit roundoff");
    }
}

namespace {

double round_impl(double x, const FpFormat& fmt, RoundingEvents* events)
{
    if (fmt.is_substrate() || x == 0.0 || !std::isfinite(x)) return x;

    int e = 0;
    std::frexp(x, &e); // |x| = f * 2^e with f in [0.5, 1)
    const int lead = std::max(e - 1, fmt.e_min);
    const int shift = fmt.t - 1 - lead;

    // Scaling by a power of two is exact, so the only rounding is nearbyint,
    // which honours the default round-to-nearest-even mode.
    double r = std::ldexp(std::nearbyint(std::ldexp(x, shift)), -shift);

    if (std::fabs(r) > fmt.max_finite()) {
        if (events) ++events->overflow;
        return std::copysign(std::numeric_limits<double>::infinity(), x);
    }
    if (!fmt.supports_subnormals && r != 0.0 && std::fabs(r) < fmt.min_normal()) {
        r = std::copysign(0.0, x);
    }
    if (r == 0.0) {
        if (events) ++events->underflow;
        return std::copysign(0.0, x);
    }
    return r;
}

} // namespace

double round_scalar(double x, const FpFormat& fmt) { return round_impl(x, fmt, nullptr); }

double round_scalar(double x, const FpFormat& fmt, RoundingEvents& events)
{
    return round_impl(x, fmt, &events);
}

namespace {

double op_impl(double a, double b, ArithOp op, const FpFormat& fmt, RoundingEvents* events)
{
    double r = 0.0;
    switch (op) {
    case ArithOp::add: r = a + b; break;
    case ArithOp::sub: r = a - b; break;
    case ArithOp::mul: r = a * b; break;
    case ArithOp::div:
        if (b == 0.0 && events) ++events->division_by_zero;
        r = a / b;
        break;
    }
    return round_impl(r, fmt, events);
}

} // namespace

double simulated_op(double a, double b, ArithOp op, const FpFormat& fmt)
{
    return op_impl(a, b, op, fmt, nullptr);
}

double simulated_op(double a, double b, ArithOp op, const FpFormat& fmt, RoundingEvents& events)
{
    return op_impl(a, b, op, fmt, &events);
}

Matrix round_matrix(const Matrix& m, const FpFormat& fmt)
{
    Matrix out = m;
    for (double& v : out.values()) v = round_scalar(v, fmt);
    return out;
}

std::vector<double> round_vector(const std::vector<double>& v, const FpFormat& fmt)
{
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [&](double x) { return round_scalar(x, fmt); });
    return out;
}

} // namespace tlsmp
