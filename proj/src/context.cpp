#include "tlsmp/context.hpp"

#include <cmath>

namespace tlsmp {

std::string_view kernel_name(Kernel k)
{
    switch (k) {
    case Kernel::matvec: return "matvec";
    case Kernel::dot: return "dot";
    case Kernel::vec_update: return "vec_update";
    case Kernel::vec_scale_add: return "vec_scale_add";
    case Kernel::vec_add: return "vec_add";
    case Kernel::tri_solve: return "tri_solve";
    case Kernel::householder_qr: return "householder_qr";
    case Kernel::gram: return "gram";
    case Kernel::cholesky: return "cholesky";
    case Kernel::diag_scale: return "diag_scale";
    case Kernel::sqrt: return "sqrt";
    }
    return "unknown";
}

void FlopCounter::add(Kernel kernel, std::string_view format, double ops)
{
    tallies_[{kernel, std::string(format)}] += ops;
}

double FlopCounter::total() const
{
    double s = 0.0;
    for (const auto& [key, v] : tallies_) s += v;
    return s;
}

double FlopCounter::total_for_format(std::string_view format) const
{
    double s = 0.0;
    for (const auto& [key, v] : tallies_)
        if (key.second == format) s += v;
    return s;
}

double FlopCounter::total_for_kernel(Kernel kernel) const
{
    double s = 0.0;
    for (const auto& [key, v] : tallies_)
        if (key.first == kernel) s += v;
    return s;
}

double FlopCounter::get(Kernel kernel, std::string_view format) const
{
    const auto it = tallies_.find({kernel, std::string(format)});
    return it == tallies_.end() ? 0.0 : it->second;
}

Arith Arith::uncounted() const
{
    Arith a = *this;
    a.counting_ = false;
    return a;
}

double Arith::round(double x) const
{
    return ctx_ ? round_scalar(x, fmt_, ctx_->events) : round_scalar(x, fmt_);
}

double Arith::div(double a, double b) const
{
    if (b == 0.0 && ctx_) ++ctx_->events.division_by_zero;
    return round(a / b);
}

double Arith::sqrt(double a) const { return round(std::sqrt(a)); }

void Arith::charge(Kernel kernel, double ops) const
{
    if (ctx_ && counting_) ctx_->flops.add(kernel, fmt_.name, ops);
}

} // namespace tlsmp
