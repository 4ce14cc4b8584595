#include "tlsmp/perfmodel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tlsmp {

namespace {

using Wide = __int128;

std::int64_t narrow(Wide v)
{
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw std::invalid_argument("op_counts: count exceeds 64 bits");
    return static_cast<std::int64_t>(v);
}

} // namespace

void CostConstants::validate() const
{
    if (!(c > 0.0) || !(c_p >= 0.0) || !(c_q >= 0.0))
        throw std::invalid_argument("cost constants must satisfy c > 0, c_p >= 0, c_q >= 0");
}

OpCounts op_counts(std::int64_t m_in, std::int64_t n_in, std::int64_t r_in)
{
    if (n_in < 1 || m_in < n_in || r_in < 0)
        throw std::invalid_argument("op_counts: requires m >= n >= 1 and r >= 0");
    const Wide m = m_in, n = n_in, r = r_in;
    OpCounts k;
    k.working = narrow(2 * m * n + 3 * m + 4 * n + 2 * n * n - 2 + r * (4 * m * n + 5 * m + 11 * n - 5));
    k.pcg = narrow(2 * r * (n * n + 2 * n - 1) + (r * r + 3 * r) * (2 * n * n + 14 * n - 3));
    k.factor_thirds = narrow(6 * m * n * n - 2 * n * n * n);
    return k;
}

CostResult cost(std::int64_t m, std::int64_t n, std::int64_t r, const CostConstants& k)
{
    k.validate();
    const OpCounts ops = op_counts(m, n, r);
    CostResult res;
    res.term_c = k.c * static_cast<double>(ops.working);
    res.term_cp = k.c_p * static_cast<double>(ops.pcg);
    res.term_cq = k.c_q * ops.factor();
    res.total = res.term_c + res.term_cp + res.term_cq;
    return res;
}

double speedup(std::int64_t m, std::int64_t n, std::int64_t r, const CostConstants& mixed,
               const CostConstants& uniform)
{
    const double mp = cost(m, n, r, mixed).total;
    if (!(mp > 0.0)) throw std::invalid_argument("speedup: mixed precision cost is zero");
    return cost(m, n, r, uniform).total / mp;
}

std::vector<GridCell> speedup_grid(const std::vector<std::int64_t>& ms,
                                   const std::vector<std::int64_t>& ns, std::int64_t r,
                                   const CostConstants& mixed, const CostConstants& uniform)
{
    if (ms.empty() || ns.empty()) throw std::invalid_argument("speedup_grid: empty range");
    std::vector<GridCell> cells;
    for (std::int64_t m : ms)
        for (std::int64_t n : ns)
            if (n <= m) cells.push_back({m, n, r, speedup(m, n, r, mixed, uniform)});
    return cells;
}

std::vector<std::int64_t> log_space(std::int64_t lo, std::int64_t hi, int count)
{
    if (lo < 1 || hi < lo || count < 1) throw std::invalid_argument("log_space: invalid range");
    std::vector<std::int64_t> out;
    const double a = std::log10(static_cast<double>(lo)), b = std::log10(static_cast<double>(hi));
    for (int i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        const auto v = static_cast<std::int64_t>(std::llround(std::pow(10.0, a + t * (b - a))));
        if (out.empty() || v != out.back()) out.push_back(v);
    }
    out.back() = hi;
    return out;
}

} // namespace tlsmp
