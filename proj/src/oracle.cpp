#include "tlsmp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tlsmp/errors.hpp"
#include "tlsmp/linalg.hpp"

namespace tlsmp {

SvdResult jacobi_svd(const Matrix& m_in, int max_sweeps)
{
    const std::size_t m = m_in.rows(), n = m_in.cols();
    if (m < n) throw DimensionError("jacobi_svd: requires rows >= cols");

    Matrix w = m_in;
    Matrix v = Matrix::identity(n);
    const double tol = std::max(std::sqrt(static_cast<double>(m)), 2.0) *
                       std::numeric_limits<double>::epsilon();

    int sweep = 0;
    bool rotated = true;
    while (rotated) {
        if (sweep == max_sweeps)
            throw ConvergenceError("jacobi_svd: no convergence after " +
                                   std::to_string(max_sweeps) + " sweeps");
        ++sweep;
        rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double alpha = accurate_dot(w.col(p), w.col(p));
                const double beta = accurate_dot(w.col(q), w.col(q));
                const double gamma = accurate_dot(w.col(p), w.col(q));
                if (alpha == 0.0 || beta == 0.0) continue;
                if (std::fabs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;
                rotated = true;

                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::fabs(zeta) + std::hypot(1.0, zeta));
                const double cs = 1.0 / std::hypot(1.0, t);
                const double sn = cs * t;
                auto rotate = [cs, sn](std::span<double> a, std::span<double> b) {
                    for (std::size_t i = 0; i < a.size(); ++i) {
                        const double x = a[i], y = b[i];
                        a[i] = cs * x - sn * y;
                        b[i] = sn * x + cs * y;
                    }
                };
                rotate(w.col(p), w.col(q));
                rotate(v.col(p), v.col(q));
            }
        }
    }

    Vector norms(n);
    for (std::size_t j = 0; j < n; ++j) norms[j] = accurate_norm2(w.col(j));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return norms[a] > norms[b]; });

    SvdResult out{Vector(n), Matrix(n, n), sweep};
    for (std::size_t j = 0; j < n; ++j) {
        out.sigma[j] = norms[order[j]];
        const auto src = v.col(order[j]);
        std::copy(src.begin(), src.end(), out.v.col(j).begin());
    }
    return out;
}

double OracleResult::gap_ratio_sq() const
{
    const double r = sigma_min() / sigma_prime_n();
    return r * r;
}

OracleResult tls_solve_exact(const Matrix& a, std::span<const double> b)
{
    const std::size_t m = a.rows(), n = a.cols();
    if (b.size() != m) throw DimensionError("tls_solve_exact: b has wrong length");
    if (m < n) throw DimensionError("tls_solve_exact: requires rows >= cols");

    // Zero rows do not change singular values; they keep [A, b] tall.
    Matrix ab(std::max(m, n + 1), n + 1);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) ab(i, j) = a(i, j);
    for (std::size_t i = 0; i < m; ++i) ab(i, n) = b[i];

    const SvdResult full = jacobi_svd(ab);
    const SvdResult part = jacobi_svd(a);

    OracleResult r;
    r.sigma = full.sigma;
    r.sigma_a = part.sigma;
    r.frobenius_a = a.frobenius_norm();

    const double s1p = r.sigma_a.front();
    const double snp = r.sigma_prime_n();
    const double sn1 = r.sigma_min();
    if (s1p == 0.0) throw DimensionError("tls_solve_exact: A is zero");

    r.kappa_a = snp > 0.0 ? s1p / snp : std::numeric_limits<double>::infinity();
    r.kappa_f = snp > 0.0 ? r.frobenius_a / snp : std::numeric_limits<double>::infinity();

    if (snp - sn1 <= kUniquenessTolerance * s1p)
        throw NonUniqueSolutionError("TLS solution is not unique: sigma'_n = " +
                                     std::to_string(snp) + ", sigma_{n+1} = " +
                                     std::to_string(sn1));
    r.unique = true;
    r.consistent = sn1 <= kUniquenessTolerance * r.sigma.front();
    r.kappa_tls = s1p / (snp - sn1);
    r.kappa_tls_alt = r.kappa_a * snp / (snp - sn1);

    const auto vlast = full.v.col(n);
    const double vnn = vlast[n];
    if (vnn == 0.0)
        throw NongenericProblemError("TLS problem is nongeneric: v_{n+1,n+1} = 0");
    r.x_tls.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.x_tls[i] = -vlast[i] / vnn;
    for (double xi : r.x_tls)
        if (!std::isfinite(xi)) throw NongenericProblemError("TLS solution is not finite");
    return r;
}

namespace {

EigenInterval interval_for(double ratio_sq, double delta)
{
    return {1.0 - ratio_sq - delta, 1.0 + delta};
}

double lambda_min_equilibrated(const Matrix& a)
{
    Matrix s = a;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        const double d = accurate_norm2(a.col(j));
        if (d == 0.0) return 0.0;
        for (double& x : s.col(j)) x /= d;
    }
    const double smin = jacobi_svd(s).sigma.back();
    return smin * smin;
}

} // namespace

PrecisionConstraintReport evaluate_uq_constraints(const Matrix& a, const OracleResult& oracle,
                                                  double c, const std::vector<FpFormat>& formats)
{
    PrecisionConstraintReport rep;
    rep.c = c;
    rep.m = a.rows();
    rep.n = a.cols();
    const double m = static_cast<double>(rep.m), n = static_cast<double>(rep.n);

    rep.kappa_a = oracle.kappa_a;
    rep.kappa_f = oracle.kappa_f;
    rep.gap_ratio_sq = oracle.gap_ratio_sq();
    rep.lambda_min_h = lambda_min_equilibrated(a);

    rep.bound_qr_det = 1.0 / (c * m * std::pow(n, 1.5) * rep.kappa_a);
    rep.bound_qr_prob = 1.0 / (c * std::sqrt(m) * std::pow(n, 0.75) * rep.kappa_a);
    rep.bound_heuristic = 1.0 / rep.kappa_a;
    rep.bound_rhs = (1.0 - rep.gap_ratio_sq) / rep.kappa_f;
    rep.bound_chol = 1.0 / (20.0 * std::pow(n, 1.5) * rep.kappa_a * rep.kappa_a);
    rep.bound_chol_scaled =
        rep.lambda_min_h / ((2.0 * rep.lambda_min_h + n) * (n + 1.0));

    double best_u = -1.0;
    for (const FpFormat& f : formats) {
        FormatAssessment fa;
        fa.format = f.name;
        fa.unit_roundoff = f.unit_roundoff();
        const double cmnu = c * m * n * fa.unit_roundoff;
        fa.gamma = cmnu < 1.0 ? cmnu / (1.0 - cmnu) : std::numeric_limits<double>::infinity();
        fa.delta_bound = std::sqrt(m) * fa.gamma * rep.kappa_f;
        fa.delta_heuristic = fa.unit_roundoff * rep.kappa_f;
        fa.interval = interval_for(rep.gap_ratio_sq, fa.delta_bound);
        fa.interval_heuristic = interval_for(rep.gap_ratio_sq, fa.delta_heuristic);
        fa.satisfies_heuristic = fa.unit_roundoff <= rep.bound_heuristic;
        fa.satisfies_rhs = fa.unit_roundoff <= rep.bound_rhs;
        if (fa.satisfies_heuristic && fa.satisfies_rhs && fa.unit_roundoff > best_u) {
            best_u = fa.unit_roundoff;
            rep.recommended = f.name;
        }
        rep.formats.push_back(std::move(fa));
    }
    return rep;
}

PrecisionConstraintReport evaluate_uq_constraints(const Matrix& a, std::span<const double> b,
                                                  double c, const std::vector<FpFormat>& formats)
{
    return evaluate_uq_constraints(a, tls_solve_exact(a, b), c, formats);
}

EigenInterval preconditioner_eigen_interval(const Matrix& a, std::span<const double> b,
                                            const FpFormat& uq, double c, DeltaEstimate estimate)
{
    const auto rep = evaluate_uq_constraints(a, b, c, {uq});
    const auto& fa = rep.formats.front();
    return estimate == DeltaEstimate::bound ? fa.interval : fa.interval_heuristic;
}

} // namespace tlsmp
