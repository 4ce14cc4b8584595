#include "tlsmp/pcgtls.hpp"

#include "tlsmp/errors.hpp"

namespace tlsmp {

Preconditioner Preconditioner::from_qr(const QrFactors& qr)
{
    Preconditioner p;
    p.r_ = qr.r;
    return p;
}

Preconditioner Preconditioner::from_cholesky(const ScaledCholeskyFactors& chol)
{
    Preconditioner p;
    p.r_ = chol.r;
    p.d_ = chol.d;
    return p;
}

Vector Preconditioner::solve(std::span<const double> rhs, const Arith& ar) const
{
    Vector y = tri_solve(r_, rhs, Transpose::no, ar);
    if (scaled()) {
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = ar.div(y[i], ar.round(d_[i]));
        ar.charge(Kernel::diag_scale, static_cast<double>(y.size()));
    }
    return y;
}

Vector Preconditioner::solve_transposed(std::span<const double> rhs, const Arith& ar) const
{
    if (!scaled()) return tri_solve(r_, rhs, Transpose::yes, ar);
    Vector t(rhs.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = ar.div(rhs[i], ar.round(d_[i]));
    ar.charge(Kernel::diag_scale, static_cast<double>(t.size()));
    return tri_solve(r_, t, Transpose::yes, ar);
}

PcgtlsResult pcgtls_solve(const Preconditioner& s, double sigma2_in, std::span<const double> f_in,
                          int steps, const Arith& ar)
{
    const std::size_t n = s.size();
    if (f_in.size() != n) throw DimensionError("pcgtls_solve: right-hand side has wrong length");

    Vector f(f_in.size());
    for (std::size_t i = 0; i < n; ++i) f[i] = ar.round(f_in[i]);
    const double sigma2 = ar.round(sigma2_in);

    PcgtlsResult res;
    res.omega.assign(n, 0.0);

    Vector sres = s.solve_transposed(f, ar);
    Vector p = sres;
    double eta = dot(sres, sres, ar);

    for (int j = 0; j < steps; ++j) {
        if (eta == 0.0) break;

        Vector q = s.solve(p, ar);
        const double pp = dot(p, p, ar);
        const double qq = dot(q, q, ar);
        const double delta = ar.sub(pp, ar.mul(sigma2, qq));
        if (!(delta > 0.0)) {
            res.breakdown = delta == 0.0 ? PcgBreakdown::zero_delta : PcgBreakdown::nonpositive_delta;
            res.delta = delta;
            break;
        }
        const double alpha = ar.div(eta, delta);
        res.omega = axpy(alpha, q, res.omega, ar);

        q = s.solve_transposed(q, ar);
        const Vector t = axpy(-sigma2, q, p, ar); // p - sigma2 S^-T S^-1 p
        sres = axpy(-alpha, t, sres, ar);
        const double eta_next = dot(sres, sres, ar);
        const double beta = ar.div(eta_next, eta);
        p = axpy(beta, p, sres, ar);
        eta = eta_next;
        ++res.iterations;
    }
    return res;
}

} // namespace tlsmp
