#include "tlsmp/linalg.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "tlsmp/errors.hpp"

namespace tlsmp {

namespace {

void require_same_length(std::span<const double> x, std::span<const double> y, const char* what)
{
    if (x.size() != y.size())
        throw DimensionError(std::string(what) + ": vector lengths " + std::to_string(x.size()) +
                             " and " + std::to_string(y.size()) + " differ");
}

double as_double(std::size_t v) { return static_cast<double>(v); }

} // namespace

Vector matvec(const Matrix& a, std::span<const double> x, const Arith& ar)
{
    const std::size_t m = a.rows(), n = a.cols();
    if (n != x.size()) throw DimensionError("matvec: operand has wrong length");
    Vector y(m, 0.0);
    if (n == 0) return y;
    for (std::size_t i = 0; i < m; ++i) y[i] = ar.mul(a(i, 0), x[0]);
    for (std::size_t j = 1; j < n; ++j) {
        const auto col = a.col(j);
        for (std::size_t i = 0; i < m; ++i) y[i] = ar.add(y[i], ar.mul(col[i], x[j]));
    }
    ar.charge(Kernel::matvec, 2.0 * as_double(m) * as_double(n) - as_double(m));
    return y;
}

Vector matvec_transposed(const Matrix& a, std::span<const double> x, const Arith& ar)
{
    const std::size_t m = a.rows(), n = a.cols();
    if (m != x.size()) throw DimensionError("matvec_transposed: operand has wrong length");
    Vector y(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const auto col = a.col(j);
        double s = m ? ar.mul(col[0], x[0]) : 0.0;
        for (std::size_t i = 1; i < m; ++i) s = ar.add(s, ar.mul(col[i], x[i]));
        y[j] = s;
    }
    ar.charge(Kernel::matvec, 2.0 * as_double(m) * as_double(n) - as_double(n));
    return y;
}

double dot(std::span<const double> x, std::span<const double> y, const Arith& ar)
{
    require_same_length(x, y, "dot");
    if (x.empty()) return 0.0;
    double s = ar.mul(x[0], y[0]);
    for (std::size_t i = 1; i < x.size(); ++i) s = ar.add(s, ar.mul(x[i], y[i]));
    ar.charge(Kernel::dot, 2.0 * as_double(x.size()) - 1.0);
    return s;
}

Vector axpy(double lambda, std::span<const double> x, std::span<const double> y, const Arith& ar)
{
    require_same_length(x, y, "axpy");
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = ar.add(ar.mul(lambda, x[i]), y[i]);
    ar.charge(Kernel::vec_update, 2.0 * as_double(x.size()));
    return out;
}

Vector scale_add(double alpha, std::span<const double> x, double beta, std::span<const double> y,
                 const Arith& ar)
{
    require_same_length(x, y, "scale_add");
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = ar.add(ar.mul(alpha, x[i]), ar.mul(beta, y[i]));
    ar.charge(Kernel::vec_scale_add, 3.0 * as_double(x.size()));
    return out;
}

Vector add(std::span<const double> x, std::span<const double> y, const Arith& ar)
{
    require_same_length(x, y, "add");
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = ar.add(x[i], y[i]);
    ar.charge(Kernel::vec_add, as_double(x.size()));
    return out;
}

double norm2(std::span<const double> x, const Arith& ar)
{
    const double s = dot(x, x, ar);
    ar.charge(Kernel::sqrt, 1.0);
    return ar.sqrt(s);
}

Vector tri_solve(const Matrix& r, std::span<const double> rhs, Transpose trans, const Arith& ar)
{
    const std::size_t n = r.rows();
    if (r.cols() != n) throw DimensionError("tri_solve: matrix is not square");
    if (rhs.size() != n) throw DimensionError("tri_solve: right-hand side has wrong length");
    for (std::size_t i = 0; i < n; ++i)
        if (r(i, i) == 0.0)
            throw SingularMatrixError("tri_solve: zero diagonal entry at " + std::to_string(i));

    Vector x(n);
    if (trans == Transpose::no) {
        for (std::size_t ii = n; ii-- > 0;) {
            double s = rhs[ii];
            for (std::size_t j = ii + 1; j < n; ++j) s = ar.sub(s, ar.mul(r(ii, j), x[j]));
            x[ii] = ar.div(s, r(ii, ii));
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            double s = rhs[i];
            for (std::size_t j = 0; j < i; ++j) s = ar.sub(s, ar.mul(r(j, i), x[j]));
            x[i] = ar.div(s, r(i, i));
        }
    }
    ar.charge(Kernel::tri_solve, as_double(n) * as_double(n));
    return x;
}

QrFactors householder_qr(const Matrix& a_in, const Arith& ar)
{
    const std::size_t m = a_in.rows(), n = a_in.cols();
    if (m < n) throw DimensionError("householder_qr: requires rows >= cols");

    Matrix w(m, n);
    for (std::size_t idx = 0; idx < a_in.values().size(); ++idx)
        w.values()[idx] = ar.round(a_in.values()[idx]);

    QrFactors f{Matrix(n, n), Matrix(m, n), Vector(n, 0.0)};

    for (std::size_t k = 0; k < n; ++k) {
        const double x0 = w(k, k);
        double tail = 0.0; // sum of squares below the diagonal
        for (std::size_t i = k + 1; i < m; ++i) tail = ar.add(tail, ar.mul(w(i, k), w(i, k)));
        const double alpha = ar.sqrt(ar.add(ar.mul(x0, x0), tail));
        if (alpha == 0.0)
            throw RankDeficientError(k, "householder_qr: column " + std::to_string(k) +
                                            " is linearly dependent (zero pivot)");

        // Reflector mapping x to +alpha e_1 (Parlett's choice avoids cancellation).
        double tau = 0.0;
        double v0 = 1.0;
        if (!(tail == 0.0 && x0 >= 0.0)) {
            v0 = x0 <= 0.0 ? ar.sub(x0, alpha) : ar.div(-tail, ar.add(x0, alpha));
            const double v0sq = ar.mul(v0, v0);
            tau = ar.div(ar.mul(2.0, v0sq), ar.add(tail, v0sq));
        }
        f.reflectors(k, k) = 1.0;
        for (std::size_t i = k + 1; i < m; ++i)
            f.reflectors(i, k) = tau == 0.0 ? 0.0 : ar.div(w(i, k), v0);
        f.tau[k] = tau;

        w(k, k) = alpha;
        for (std::size_t i = k + 1; i < m; ++i) w(i, k) = 0.0;

        if (tau != 0.0) {
            for (std::size_t j = k + 1; j < n; ++j) {
                double s = w(k, j);
                for (std::size_t i = k + 1; i < m; ++i)
                    s = ar.add(s, ar.mul(f.reflectors(i, k), w(i, j)));
                const double ts = ar.mul(tau, s);
                w(k, j) = ar.sub(w(k, j), ts);
                for (std::size_t i = k + 1; i < m; ++i)
                    w(i, j) = ar.sub(w(i, j), ar.mul(ts, f.reflectors(i, k)));
            }
        }
    }

    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i <= j; ++i) f.r(i, j) = w(i, j);

    const double dm = as_double(m), dn = as_double(n);
    ar.charge(Kernel::householder_qr, 2.0 * dm * dn * dn - 2.0 * dn * dn * dn / 3.0);
    return f;
}

Vector apply_qt(const QrFactors& qr, std::span<const double> b, const Arith& ar)
{
    const std::size_t m = qr.reflectors.rows(), n = qr.reflectors.cols();
    if (b.size() != m) throw DimensionError("apply_qt: right-hand side has wrong length");
    Vector y(b.begin(), b.end());
    for (std::size_t k = 0; k < n; ++k) {
        if (qr.tau[k] == 0.0) continue;
        double s = y[k];
        for (std::size_t i = k + 1; i < m; ++i) s = ar.add(s, ar.mul(qr.reflectors(i, k), y[i]));
        const double ts = ar.mul(qr.tau[k], s);
        y[k] = ar.sub(y[k], ts);
        for (std::size_t i = k + 1; i < m; ++i) y[i] = ar.sub(y[i], ar.mul(ts, qr.reflectors(i, k)));
    }
    return y;
}

Matrix form_q1(const QrFactors& qr)
{
    const std::size_t m = qr.reflectors.rows(), n = qr.reflectors.cols();
    Matrix q(m, n);
    for (std::size_t j = 0; j < n; ++j) q(j, j) = 1.0;
    for (std::size_t k = n; k-- > 0;) {
        const double tau = qr.tau[k];
        if (tau == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            double s = q(k, j);
            for (std::size_t i = k + 1; i < m; ++i) s += qr.reflectors(i, k) * q(i, j);
            q(k, j) -= tau * s;
            for (std::size_t i = k + 1; i < m; ++i) q(i, j) -= tau * s * qr.reflectors(i, k);
        }
    }
    return q;
}

Matrix gram(const Matrix& a, const Arith& ar)
{
    const std::size_t m = a.rows(), n = a.cols();
    Matrix g(n, n);
    const Arith quiet = ar.uncounted();
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i <= j; ++i) {
            const double v = dot(a.col(i), a.col(j), quiet);
            g(i, j) = v;
            g(j, i) = v;
        }
    ar.charge(Kernel::gram, as_double(n) * as_double(n + 1) / 2.0 * (2.0 * as_double(m) - 1.0));
    return g;
}

ScaledCholeskyFactors cholesky_scaled(const Matrix& a, const Arith& ar, bool equilibrate)
{
    const std::size_t m = a.rows(), n = a.cols();
    ScaledCholeskyFactors f{Matrix(n, n), Vector(n, 1.0)};

    Matrix scaled(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        if (equilibrate) {
            f.d[j] = accurate_norm2(a.col(j));
            if (f.d[j] == 0.0)
                throw CholeskyBreakdown(j, 0.0,
                                        "cholesky_scaled: zero column " + std::to_string(j));
        }
        for (std::size_t i = 0; i < m; ++i) scaled(i, j) = ar.round(a(i, j) / f.d[j]);
    }
    if (equilibrate) ar.charge(Kernel::diag_scale, as_double(m) * as_double(n));

    const Matrix h = gram(scaled, ar);

    double ops = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = h(j, j);
        for (std::size_t k = 0; k < j; ++k) s = ar.sub(s, ar.mul(f.r(k, j), f.r(k, j)));
        ops += 2.0 * as_double(j) + 1.0;
        if (!(s > 0.0) || !std::isfinite(s))
            throw CholeskyBreakdown(j, s,
                                    "cholesky_scaled: nonpositive pivot " + std::to_string(s) +
                                        " at index " + std::to_string(j) + " in " +
                                        ar.format().name);
        const double rjj = ar.sqrt(s);
        f.r(j, j) = rjj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double t = h(j, i);
            for (std::size_t k = 0; k < j; ++k) t = ar.sub(t, ar.mul(f.r(k, j), f.r(k, i)));
            f.r(j, i) = ar.div(t, rjj);
            ops += 2.0 * as_double(j) + 1.0;
        }
    }
    ar.charge(Kernel::cholesky, ops);
    return f;
}

Vector solve_dense(Matrix a, Vector b)
{
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw DimensionError("solve_dense: shape mismatch");
    std::vector<std::size_t> perm(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(a(i, k)) > std::fabs(a(p, k))) p = i;
        if (a(p, k) == 0.0) throw SingularMatrixError("solve_dense: matrix is singular");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            std::swap(b[k], b[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = a(i, k) / a(k, k);
            a(i, k) = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
            b[i] -= l * b[k];
        }
    }
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x[j];
        x[ii] = s / a(ii, ii);
    }
    return x;
}

double accurate_dot(std::span<const double> x, std::span<const double> y)
{
    require_same_length(x, y, "accurate_dot");
    // Ogita-Rump-Oishi Dot2.
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double p = x[i] * y[i];
        const double pe = std::fma(x[i], y[i], -p);
        const double t = s + p;
        const double z = t - s;
        const double se = (s - (t - z)) + (p - z);
        s = t;
        c += pe + se;
    }
    return s + c;
}

double accurate_norm2(std::span<const double> x)
{
    double amax = 0.0;
    for (double v : x) amax = std::fmax(amax, std::fabs(v));
    if (amax == 0.0 || !std::isfinite(amax)) return amax;
    // Power-of-two scaling keeps the scaled entries exact.
    int e = 0;
    std::frexp(amax, &e);
    Vector scaled(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) scaled[i] = std::ldexp(x[i], -e);
    return std::ldexp(std::sqrt(accurate_dot(scaled, scaled)), e);
}

} // namespace tlsmp
