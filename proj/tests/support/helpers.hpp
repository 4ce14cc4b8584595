#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "tlsmp/matrix.hpp"
#include "tlsmp/rng.hpp"

namespace testutil {

using tlsmp::Matrix;
using tlsmp::Vector;

inline Matrix random_matrix(std::size_t m, std::size_t n, tlsmp::Rng& rng, double lo = -1.0,
                            double hi = 1.0)
{
    Matrix a(m, n);
    for (double& x : a.values()) x = rng.uniform(lo, hi);
    return a;
}

inline Vector random_vector(std::size_t n, tlsmp::Rng& rng, double lo = -1.0, double hi = 1.0)
{
    Vector v(n);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

inline double norm(const Vector& v)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double rel_diff(const Vector& a, const Vector& b)
{
    Vector d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return norm(d) / norm(b);
}

inline double frob_diff(const Matrix& a, const Matrix& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) {
        const double d = a.values()[i] - b.values()[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// Eigenpairs of a symmetric matrix by the classical two-sided cyclic Jacobi
// method. Independent of the one-sided SVD used by the library.
struct SymEig {
    Vector values; // ascending
    Matrix vectors;
};

inline SymEig symmetric_eigen(Matrix s)
{
    const std::size_t n = s.rows();
    Matrix v = Matrix::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0, total = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                total += s(i, j) * s(i, j);
                if (i != j) off += s(i, j) * s(i, j);
            }
        if (off <= 1e-32 * total) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (s(p, q) == 0.0) continue;
                const double theta = (s(q, q) - s(p, p)) / (2.0 * s(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double skp = s(k, p), skq = s(k, q);
                    s(k, p) = c * skp - sn * skq;
                    s(k, q) = sn * skp + c * skq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double spk = s(p, k), sqk = s(q, k);
                    s(p, k) = c * spk - sn * sqk;
                    s(q, k) = sn * spk + c * sqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s(a, a) < s(b, b); });
    SymEig out{Vector(n), Matrix(n, n)};
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = s(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

// x_TLS and sigma_{n+1} from the smallest eigenpair of [A,b]^T [A,b].
struct BruteTls {
    Vector x;
    double sigma_min = 0.0;
};

inline BruteTls brute_force_tls(const Matrix& a, const Vector& b)
{
    const Matrix c = tlsmp::append_column(a, b);
    const SymEig e = symmetric_eigen(tlsmp::multiply(c.transposed(), c));
    const std::size_t n = a.cols();
    BruteTls out;
    out.sigma_min = std::sqrt(std::max(e.values[0], 0.0));
    out.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.x[i] = -e.vectors(i, 0) / e.vectors(n, 0);
    return out;
}

// A = [diag(s); 0] and b = s_n e_n + gamma e_{n+1}, with gamma chosen so
// that the trailing 2 x 2 block of [A, b] has smallest singular value
// rho * s_n. With s descending this makes sigma_{n+1} / sigma'_n = rho.
inline std::pair<Matrix, Vector> synthetic_gap_problem(const Vector& s, double rho)
{
    const std::size_t n = s.size();
    Matrix a(n + 1, n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) = s[i];
    Vector b(n + 1, 0.0);
    const double sn = s[n - 1];
    b[n - 1] = sn;
    b[n] = std::sqrt(rho * rho * sn * sn * (2.0 - rho * rho) / (1.0 - rho * rho));
    return {a, b};
}

} // namespace testutil
