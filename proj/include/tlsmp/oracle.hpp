#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tlsmp/matrix.hpp"
#include "tlsmp/precision.hpp"

namespace tlsmp {

struct SvdResult {
    Vector sigma; // descending
    Matrix v;     // right singular vectors, column j pairs with sigma[j]
    int sweeps = 0;
};

// One-sided (Hestenes) Jacobi SVD in host doubles. Requires rows >= cols.
// Throws ConvergenceError if the columns are not mutually orthogonal after
// `max_sweeps` sweeps.
SvdResult jacobi_svd(const Matrix& m, int max_sweeps = 60);

// Reference TLS data computed from the SVDs of [A, b] and A.
struct OracleResult {
    Vector sigma;        // singular values of [A, b], descending
    Vector sigma_a;      // singular values of A, descending
    Vector x_tls;
    double kappa_tls = 0.0;      // sigma'_1 / (sigma'_n - sigma_{n+1})
    double kappa_tls_alt = 0.0;  // kappa(A) sigma'_n / (sigma'_n - sigma_{n+1})
    double kappa_a = 0.0;
    double kappa_f = 0.0;        // ||A||_F / sigma'_n
    double frobenius_a = 0.0;
    bool unique = false;
    bool consistent = false;     // sigma_{n+1} = 0 to working accuracy, so [E, r] = 0

    double sigma_min() const { return sigma.back(); }
    double sigma_prime_n() const { return sigma_a.back(); }
    // sigma_{n+1}^2 / sigma'_n^2
    double gap_ratio_sq() const;
};

// Relative tolerance on (sigma'_n - sigma_{n+1}) / sigma'_1 below which the
// solution is declared non-unique.
inline constexpr double kUniquenessTolerance = 1e-12;

// Throws NonUniqueSolutionError when sigma'_n <= sigma_{n+1} within the
// tolerance, and NongenericProblemError when v_{n+1,n+1} = 0.
OracleResult tls_solve_exact(const Matrix& a, std::span<const double> b);

// ---------------------------------------------------------------------------
// Constraints on the factorization precision u_q
// ---------------------------------------------------------------------------

struct EigenInterval {
    double lower = 0.0;
    double upper = 0.0;
    bool positive_definite_guaranteed() const { return lower > 0.0; }
};

struct FormatAssessment {
    std::string format;
    double unit_roundoff = 0.0;
    double gamma = 0.0;            // c m n u / (1 - c m n u), +inf when c m n u >= 1
    double delta_bound = 0.0;      // sqrt(m) gamma kappa_F(A)
    double delta_heuristic = 0.0;  // u kappa_F(A)
    EigenInterval interval;        // using delta_bound
    EigenInterval interval_heuristic;
    bool satisfies_heuristic = false; // u <= bound_heuristic
    bool satisfies_rhs = false;       // u <= bound_rhs
};

struct PrecisionConstraintReport {
    double c = 1.0;
    std::size_t m = 0;
    std::size_t n = 0;
    double kappa_a = 0.0;
    double kappa_f = 0.0;
    double gap_ratio_sq = 0.0;
    double lambda_min_h = 0.0;

    double bound_qr_det = 0.0;
    double bound_qr_prob = 0.0;
    double bound_heuristic = 0.0;
    double bound_rhs = 0.0;
    double bound_chol = 0.0;
    double bound_chol_scaled = 0.0;

    std::vector<FormatAssessment> formats;
    // Coarsest format meeting both heuristic bounds, if any.
    std::optional<std::string> recommended;
};

PrecisionConstraintReport evaluate_uq_constraints(const Matrix& a, std::span<const double> b,
                                                  double c = 1.0,
                                                  const std::vector<FpFormat>& formats = preset_formats());

PrecisionConstraintReport evaluate_uq_constraints(const Matrix& a, const OracleResult& oracle,
                                                  double c = 1.0,
                                                  const std::vector<FpFormat>& formats = preset_formats());

enum class DeltaEstimate { bound, heuristic };

// Interval containing the eigenvalues of the preconditioned operator built
// from an R factor computed in `uq`, at sigma = sigma_{n+1}:
// [1 - sigma_{n+1}^2/sigma'_n^2 - ||Delta||, 1 + ||Delta||].
EigenInterval preconditioner_eigen_interval(const Matrix& a, std::span<const double> b,
                                            const FpFormat& uq, double c = 1.0,
                                            DeltaEstimate estimate = DeltaEstimate::bound);

} // namespace tlsmp
