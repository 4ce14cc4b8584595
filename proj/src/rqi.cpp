#include "tlsmp/rqi.hpp"

#include <cmath>
#include <algorithm>
#include <limits>

#include "tlsmp/errors.hpp"
#include "tlsmp/linalg.hpp"

namespace tlsmp {

std::string_view termination_name(Termination t)
{
    switch (t) {
    case Termination::psi_increase: return "psi_increase";
    case Termination::max_outer: return "max_outer";
    case Termination::pcg_breakdown: return "pcg_breakdown";
    case Termination::consistent_system: return "consistent_system";
    }
    return "unknown";
}

double psi(std::span<const double> f, double g, std::span<const double> x, const Arith& ar_in)
{
    const Arith ar = ar_in.uncounted();
    const double num = ar.add(dot(f, f, ar), ar.mul(g, g));
    const double den = ar.add(dot(x, x, ar), 1.0);
    return ar.sqrt(ar.div(num, den));
}

NewtonResidual newton_residual(const Matrix& a, std::span<const double> b,
                               std::span<const double> x, double sigma2, const Arith& ar)
{
    if (a.rows() != b.size() || a.cols() != x.size())
        throw DimensionError("newton_residual: dimensions do not conform");
    NewtonResidual nr;
    nr.r = axpy(-1.0, matvec(a, x, ar), b, ar);                           // 2mn + m
    nr.f = scale_add(-sigma2, x, -1.0, matvec_transposed(a, nr.r, ar), ar); // 2mn + 2n
    nr.g = ar.add(-dot(b, nr.r, ar), sigma2);                              // 2m - 1
    return nr;
}

namespace {

// r^T r / (x^T x + 1); two dot products.
double rayleigh_quotient(std::span<const double> r, std::span<const double> x, const Arith& ar)
{
    const double rr = dot(r, r, ar);
    const double xx = dot(x, x, ar);
    return ar.div(rr, ar.add(xx, 1.0));
}

// S^-1 S^-T rhs, i.e. (A^T A)^-1 rhs through the triangular factor.
Vector normal_solve(const Preconditioner& s, std::span<const double> rhs, const Arith& ar)
{
    return s.solve(s.solve_transposed(rhs, ar), ar);
}

// Runs PCGTLS on 2^-e rhs with e chosen so that max |rhs| lands near
// 2^target, then scales omega back. Powers of two are exact in every format,
// so by linearity only the range of the low precision data changes.
PcgtlsResult scaled_pcgtls(const Preconditioner& s, double sigma2, std::span<const double> rhs,
                           int steps, const Arith& up, std::optional<int> target)
{
    double amax = 0.0;
    for (double v : rhs) amax = std::max(amax, std::fabs(v));
    int shift = 0;
    if (target && amax > 0.0 && std::isfinite(amax)) shift = std::ilogb(amax) - *target;
    Vector scaled(rhs.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) scaled[i] = up.round(std::ldexp(rhs[i], -shift));
    PcgtlsResult res = pcgtls_solve(s, sigma2, scaled, steps, up);
    for (double& w : res.omega) w = std::ldexp(w, shift);
    return res;
}

double relative_error(std::span<const double> x, std::span<const double> ref)
{
    Vector d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - ref[i];
    const double den = accurate_norm2(ref);
    const double num = accurate_norm2(d);
    return den > 0.0 ? num / den : num;
}

double sigma_error(double sigma2, double sigma_ref)
{
    const double s = std::sqrt(std::fabs(sigma2));
    const double err = std::fabs(s - sigma_ref);
    return sigma_ref > 0.0 ? err / sigma_ref : err;
}

} // namespace

BootstrapResult bootstrap(const Matrix& a, std::span<const double> b, const Preconditioner& s,
                          const Arith& u)
{
    BootstrapResult bs;
    bs.x0 = normal_solve(s, matvec_transposed(a, b, u), u);
    bs.r0 = axpy(-1.0, matvec(a, bs.x0, u), b, u);
    bs.sigma2_0 = rayleigh_quotient(bs.r0, bs.x0, u);
    bs.u0 = normal_solve(s, bs.x0, u);
    bs.x1 = axpy(bs.sigma2_0, bs.u0, bs.x0, u);

    // Residual at the level of backward error for the LS solve: the data are
    // consistent to working accuracy and x0 already solves the TLS problem.
    const double m = static_cast<double>(a.rows()), n = static_cast<double>(a.cols());
    const double tol = m * n * u.format().unit_roundoff() *
                       (a.frobenius_norm() * accurate_norm2(bs.x0) + accurate_norm2(b));
    bs.consistent = accurate_norm2(bs.r0) <= tol;
    return bs;
}

RqiResult rqi_pcgtls_mp(const TlsProblem& problem, const RqiOptions& opts,
                        const OracleResult& oracle)
{
    opts.precisions.validate();
    if (opts.max_outer < 1) throw std::invalid_argument("rqi: max_outer must be at least 1");
    if (!oracle.unique) throw NonUniqueSolutionError("rqi: oracle reports a non-unique solution");
    if (problem.a.rows() != problem.b.size())
        throw DimensionError("rqi: b has wrong length");

    SolverContext ctx;
    const Arith u(opts.precisions.u, &ctx);
    const Arith up(opts.precisions.up, &ctx);
    const Arith uq(opts.precisions.uq, &ctx);

    const Matrix a = round_matrix(problem.a, u.format());
    const Vector b = round_vector(problem.b, u.format());

    const Preconditioner s =
        opts.preconditioner == Preconditioning::qr
            ? Preconditioner::from_qr(householder_qr(a, uq))
            : Preconditioner::from_cholesky(cholesky_scaled(a, uq));
    auto entry_for = [&](int k, const Vector& x, double sigma2, double psi_k) {
        TraceEntry e;
        e.k = k;
        e.sigma2 = sigma2;
        e.psi = psi_k;
        e.rerrx = relative_error(x, oracle.x_tls);
        e.rerrs = sigma_error(sigma2, oracle.sigma_min());
        return e;
    };

    RqiResult res;
    auto finish = [&](Vector x, double sigma2, int k, Termination why) {
        res.x = std::move(x);
        res.sigma2 = sigma2;
        res.returned_k = k;
        res.reason = why;
        res.outer_iterations = static_cast<int>(res.trace.size()) - 1;
        res.flops = ctx.flops;
        res.events = ctx.events;
        return res;
    };

    const BootstrapResult bs = bootstrap(a, b, s, u);
    {
        // Diagnostic row for x0; not part of the operation count.
        const Arith quiet = u.uncounted();
        const NewtonResidual nr0 = newton_residual(a, b, bs.x0, bs.sigma2_0, quiet);
        res.trace.push_back(entry_for(0, bs.x0, bs.sigma2_0, psi(nr0.f, nr0.g, bs.x0, quiet)));
    }
    if (bs.consistent) return finish(bs.x0, bs.sigma2_0, 0, Termination::consistent_system);

    const int last = opts.exact_outer ? *opts.exact_outer : opts.max_outer;
    if (last < 0) throw std::invalid_argument("rqi: exact_outer must be nonnegative");
    Vector x = bs.x1;
    Vector prev_x = bs.x0;
    double prev_sigma2 = bs.sigma2_0;
    double prev_psi = std::numeric_limits<double>::infinity();

    auto finish_exact = [&](int k) {
        // The model charges nothing after the last update; this row is diagnostic.
        const Arith quiet = u.uncounted();
        const NewtonResidual nr = newton_residual(a, b, x, 0.0, quiet);
        const double s2 = rayleigh_quotient(nr.r, x, quiet);
        const NewtonResidual nr2 = newton_residual(a, b, x, s2, quiet);
        res.trace.push_back(entry_for(k, x, s2, psi(nr2.f, nr2.g, x, quiet)));
        return finish(x, s2, k, Termination::max_outer);
    };
    if (opts.exact_outer && last == 0) return finish_exact(1);

    for (int k = 1;; ++k) {
        // r_k, sigma_k^2, f_k, g_k in precision u.
        const Vector r = axpy(-1.0, matvec(a, x, u), b, u);
        const double sigma2 = rayleigh_quotient(r, x, u);
        const Vector f = scale_add(-sigma2, x, -1.0, matvec_transposed(a, r, u), u);
        const double g = u.add(-dot(b, r, u), sigma2);
        const double psi_k = psi(f, g, x, u);

        TraceEntry entry = entry_for(k, x, sigma2, psi_k);

        if (!opts.exact_outer && k >= 2) {
            const bool worse = !std::isfinite(psi_k) ||
                               (opts.stop_rule == StopRule::strict ? psi_k > prev_psi
                                                                   : psi_k >= prev_psi);
            if (worse) {
                res.trace.push_back(entry);
                return finish(prev_x, prev_sigma2, k - 1, Termination::psi_increase);
            }
        }
        if (!opts.exact_outer && k > opts.max_outer) {
            res.trace.push_back(entry);
            return finish(x, sigma2, k, Termination::max_outer);
        }

        const int budget = opts.inner_budget(k);
        Vector neg_f(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) neg_f[i] = -f[i];
        const PcgtlsResult w = scaled_pcgtls(s, sigma2, neg_f, budget, up, opts.rhs_scale_exponent);
        entry.inner1 = w.iterations;
        if (w.breakdown != PcgBreakdown::none) {
            res.trace.push_back(entry);
            res.breakdown = BreakdownInfo{k, 1, w.breakdown, w.delta};
            return finish(x, sigma2, k, Termination::pcg_breakdown);
        }
        const PcgtlsResult v = scaled_pcgtls(s, sigma2, x, budget, up, opts.rhs_scale_exponent);
        entry.inner2 = v.iterations;
        res.trace.push_back(entry);
        if (v.breakdown != PcgBreakdown::none) {
            res.breakdown = BreakdownInfo{k, 2, v.breakdown, v.delta};
            return finish(x, sigma2, k, Termination::pcg_breakdown);
        }

        // Promotion from u_p to u is exact since u is at least as accurate.
        const Vector z = add(x, w.omega, u);
        const double num = u.sub(dot(z, f, u), g);
        const double den = u.add(dot(z, x, u), 1.0);
        const double beta = u.div(num, den);

        prev_x = x;
        prev_sigma2 = sigma2;
        prev_psi = psi_k;
        x = axpy(beta, v.omega, z, u);

        if (opts.exact_outer && k == last) return finish_exact(k + 1);
    }
}

TauPair tau_recurrence_check(const Matrix& a, std::span<const double> b,
                             std::span<const double> x, double rho)
{
    const std::size_t n = a.cols();
    if (a.rows() != b.size() || x.size() != n)
        throw DimensionError("tau_recurrence_check: dimensions do not conform");

    Matrix j = multiply(a.transposed(), a);
    for (std::size_t i = 0; i < n; ++i) j(i, i) -= rho;

    const Vector atb = multiply(a.transposed(), b);
    TauPair out;

    // Block elimination: J z = A^T b, tau = b^T (b - A z) - rho.
    {
        const Vector z = solve_dense(j, atb);
        const Vector az = multiply(a, z);
        Vector res(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) res[i] = b[i] - az[i];
        out.via_elimination = accurate_dot(b, res) - rho;
    }
    // Newton form: z = x + J^-1 (-f), tau = z^T f - g.
    {
        const Vector ax = multiply(a, x);
        Vector r(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) r[i] = b[i] - ax[i];
        const Vector atr = multiply(a.transposed(), r);
        Vector f(n), neg_f(n);
        for (std::size_t i = 0; i < n; ++i) {
            f[i] = -atr[i] - rho * x[i];
            neg_f[i] = -f[i];
        }
        const double g = -accurate_dot(b, r) + rho;
        const Vector w = solve_dense(j, neg_f);
        Vector z(n);
        for (std::size_t i = 0; i < n; ++i) z[i] = x[i] + w[i];
        out.via_newton = accurate_dot(z, f) - g;
    }
    return out;
}

} // namespace tlsmp
