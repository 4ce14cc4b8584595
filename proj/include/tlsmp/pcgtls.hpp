#pragma once

#include <span>

#include "tlsmp/context.hpp"
#include "tlsmp/linalg.hpp"
#include "tlsmp/matrix.hpp"

namespace tlsmp {

// Triangular preconditioner S with S^T S ~= A^T A. For the QR path S = R;
// for the scaled Cholesky path S = R D.
class Preconditioner {
public:
    static Preconditioner from_qr(const QrFactors& qr);
    static Preconditioner from_cholesky(const ScaledCholeskyFactors& chol);

    std::size_t size() const { return r_.rows(); }
    const Matrix& r() const { return r_; }
    bool scaled() const { return !d_.empty(); }

    // S^-1 rhs and S^-T rhs. The scaled path additionally charges n for D^-1.
    Vector solve(std::span<const double> rhs, const Arith& ar) const;
    Vector solve_transposed(std::span<const double> rhs, const Arith& ar) const;

private:
    Matrix r_;
    Vector d_;
};

enum class PcgBreakdown { none, zero_delta, nonpositive_delta };

struct PcgtlsResult {
    Vector omega;
    int iterations = 0;
    PcgBreakdown breakdown = PcgBreakdown::none;
    double delta = 0.0; // curvature at breakdown
};

// At most `steps` iterations of PCGTLS for (A^T A - sigma2 I) omega = f,
// using only the preconditioner S (A itself is never touched). All arithmetic
// is done in the format of `ar`; f and sigma2 are rounded into it first.
//
// Stops early when eta_j = 0, or when the curvature
// delta_j = ||p_j||^2 - sigma2 ||q_j||^2 is not positive. Each full
// iteration costs 2n^2 + 14n - 3 on the QR path, initialization n^2 + 2n - 1.
PcgtlsResult pcgtls_solve(const Preconditioner& s, double sigma2, std::span<const double> f,
                          int steps, const Arith& ar);

} // namespace tlsmp
