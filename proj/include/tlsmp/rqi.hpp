#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tlsmp/context.hpp"
#include "tlsmp/matrix.hpp"
#include "tlsmp/oracle.hpp"
#include "tlsmp/pcgtls.hpp"
#include "tlsmp/precision.hpp"
#include "tlsmp/problems.hpp"

namespace tlsmp {

enum class Preconditioning { qr, cholesky_scaled };
enum class StopRule {
    strict, // stop when psi_{k+1} > psi_k
    weak,   // stop when psi_{k+1} >= psi_k
};

struct RqiOptions {
    PrecisionConfig precisions;
    Preconditioning preconditioner = Preconditioning::qr;
    int max_outer = 50;
    StopRule stop_rule = StopRule::strict;
    // PCGTLS step budget at outer iteration k.
    std::function<int(int)> inner_budget = [](int k) { return k + 1; };
    // When set, run exactly this many outer iterations and ignore the psi
    // rule. Used to compare the flop tally with the cost model; the returned
    // iterate is then the last one computed, x_{r+1}.
    std::optional<int> exact_outer;
    // Optional range safeguard: right-hand sides of the inner solves are
    // scaled by a power of two so that their largest entry is about
    // 2^rhs_scale_exponent before rounding into u_p, and the solution is
    // scaled back. Unset (the default) rounds them into u_p unchanged.
    std::optional<int> rhs_scale_exponent;
};

// One row per iterate x_k. Row 0 describes the least squares start x_0; its
// inner counts are zero.
struct TraceEntry {
    int k = 0;
    double sigma2 = 0.0;
    double psi = 0.0;
    double rerrx = 0.0;
    double rerrs = 0.0;
    int inner1 = 0;
    int inner2 = 0;
};

enum class Termination { psi_increase, max_outer, pcg_breakdown, consistent_system };

std::string_view termination_name(Termination t);

struct BreakdownInfo {
    int k = 0;
    int solve = 0; // 1: correction omega_k, 2: u_k
    PcgBreakdown kind = PcgBreakdown::none;
    double delta = 0.0;
};

struct RqiResult {
    Vector x;
    double sigma2 = 0.0;
    int returned_k = 0; // index of the returned iterate
    int outer_iterations = 0;
    std::vector<TraceEntry> trace;
    Termination reason = Termination::max_outer;
    std::optional<BreakdownInfo> breakdown;
    FlopCounter flops;
    RoundingEvents events;
};

// ((||f||^2 + g^2) / (||x||^2 + 1))^(1/2), rounded in the format of `ar`
// and never charged to the flop counter.
double psi(std::span<const double> f, double g, std::span<const double> x,
           const Arith& ar = Arith(fp64()));

struct NewtonResidual {
    Vector f;
    double g = 0.0;
    Vector r;
};

// r = b - A x, f = -A^T r - sigma2 x, g = -b^T r + sigma2.
NewtonResidual newton_residual(const Matrix& a, std::span<const double> b,
                               std::span<const double> x, double sigma2, const Arith& ar);

struct BootstrapResult {
    Vector x0; // least squares solution through S^T S x = A^T b
    Vector r0;
    double sigma2_0 = 0.0;
    Vector u0;
    Vector x1;
    bool consistent = false;
};

// Least squares start and one inverse iteration step, all in precision u.
BootstrapResult bootstrap(const Matrix& a, std::span<const double> b, const Preconditioner& s,
                          const Arith& u);

// Mixed precision RQI with PCGTLS inner solves. The oracle supplies the
// reference solution used for the error columns of the trace; it must
// describe a unique TLS solution.
RqiResult rqi_pcgtls_mp(const TlsProblem& problem, const RqiOptions& opts,
                        const OracleResult& oracle);

// tau computed by block elimination, b^T (b - A z) - rho with J z = A^T b,
// and through the Newton quantities, z^T f - g with z = x + J^-1 (-f).
struct TauPair {
    double via_elimination = 0.0;
    double via_newton = 0.0;
};

TauPair tau_recurrence_check(const Matrix& a, std::span<const double> b,
                             std::span<const double> x, double rho);

} // namespace tlsmp
