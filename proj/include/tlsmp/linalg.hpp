#pragma once

#include <span>

#include "tlsmp/context.hpp"
#include "tlsmp/matrix.hpp"

namespace tlsmp {

// ---------------------------------------------------------------------------
// Vector and matrix-vector kernels. Each elementary operation is rounded in
// the format of `ar`, and the kernel charges its table cost to the context.
// ---------------------------------------------------------------------------

Vector matvec(const Matrix& a, std::span<const double> x, const Arith& ar);
// A^T x; charged as a matvec with the n x m operator A^T, i.e. 2mn - n.
Vector matvec_transposed(const Matrix& a, std::span<const double> x, const Arith& ar);

double dot(std::span<const double> x, std::span<const double> y, const Arith& ar);
// lambda * x + y
Vector axpy(double lambda, std::span<const double> x, std::span<const double> y, const Arith& ar);
// alpha * x + beta * y
Vector scale_add(double alpha, std::span<const double> x, double beta, std::span<const double> y,
                 const Arith& ar);
Vector add(std::span<const double> x, std::span<const double> y, const Arith& ar);
double norm2(std::span<const double> x, const Arith& ar);

enum class Transpose { no, yes };

// Solves R x = rhs (Transpose::no) or R^T x = rhs (Transpose::yes) for upper
// triangular R. Charges n^2.
Vector tri_solve(const Matrix& r, std::span<const double> rhs, Transpose trans, const Arith& ar);

// ---------------------------------------------------------------------------
// Householder QR
// ---------------------------------------------------------------------------

// A = Q1 R with diag(R) >= 0. Q1 is kept as Householder reflectors
// H_k = I - tau_k v_k v_k^T with v_k(k) = 1; reflector k lives in rows k..m-1
// of column k of `reflectors`.
struct QrFactors {
    Matrix r;
    Matrix reflectors;
    Vector tau;
};

// Throws RankDeficientError if a diagonal entry of R is exactly zero.
QrFactors householder_qr(const Matrix& a, const Arith& ar);

// Q^T b (length m); the first n entries are Q1^T b.
Vector apply_qt(const QrFactors& qr, std::span<const double> b, const Arith& ar);

// Explicit Q1 in host doubles, for diagnostics and tests only.
Matrix form_q1(const QrFactors& qr);

// ---------------------------------------------------------------------------
// Cholesky of the Gram matrix with two-sided diagonal scaling
// ---------------------------------------------------------------------------

// A^T A ~= D R^T R D with d_i = ||A e_i||_2. With `equilibrate == false`,
// D = I and R is the plain Cholesky factor of fl(A^T A).
struct ScaledCholeskyFactors {
    Matrix r;
    Vector d;
};

// The scaling D is computed in host doubles and applied before A is rounded
// into the factorization format, so the scaled Gram matrix H = D^-1 A^T A D^-1
// cannot overflow. H is then formed and factored with every operation rounded
// in `ar`. Throws CholeskyBreakdown on a nonpositive pivot.
ScaledCholeskyFactors cholesky_scaled(const Matrix& a, const Arith& ar, bool equilibrate = true);

// fl(A^T A) in the format of `ar`.
Matrix gram(const Matrix& a, const Arith& ar);

// Dense solve with partial pivoting in host doubles. Test and diagnostic
// helper; throws SingularMatrixError on an exactly zero pivot.
Vector solve_dense(Matrix a, Vector b);

// Dot product and 2-norm evaluated with error-free transformations, giving a
// result as if computed in roughly twice the working precision.
double accurate_dot(std::span<const double> x, std::span<const double> y);
double accurate_norm2(std::span<const double> x);

} // namespace tlsmp
