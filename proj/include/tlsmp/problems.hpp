#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "tlsmp/matrix.hpp"
#include "tlsmp/rng.hpp"

namespace tlsmp {

struct TlsProblem {
    Matrix a;
    Vector b;
    std::optional<Vector> x_true; // before perturbation, when known
    std::string label;
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    std::map<std::string, double> params; // generator parameters, for sidecars
};

// Haar-distributed orthogonal matrix: Householder QR of a standard Gaussian
// matrix with the signs of R's diagonal folded into Q.
Matrix rand_orth(std::size_t n, Rng& rng);

// Uniform(0,1) A, b = ones, plus uniform(0,1) perturbations scaled by eps.
// Entries are drawn column by column: A, then E, then e.
TlsProblem gen_random(std::size_t m = 100, std::size_t n = 60, double epsilon = 1e-6,
                      std::uint64_t seed = 1);

// Fixed 9 x 4 pattern with delta at (1,1), (3,2) and 1 at (7,3), (9,4);
// b = ones. Multiplicative noise A .* (1 + eps Ebar), b .* (1 + eps ebar)
// with Ebar, ebar uniform(-1,1).
TlsProblem gen_delta(double delta = 1e-2, double epsilon = 1e-1, std::uint64_t seed = 1);

// A = Y [D; 0] Z^T with D = diag(1, 1/2, ..., 2^(1-n)), b = A x_true with
// x_true = (1, 1/2, ..., 1/n), then eps * uniform(0,1) perturbations.
TlsProblem gen_bjorck(std::size_t m = 30, std::size_t n = 15, double epsilon = 0.05,
                      std::uint64_t seed = 1);

// n x (n - 2 omega) banded lower Toeplitz matrix from a sampled Gaussian,
// plus a random Toeplitz perturbation; b = ones + e.
TlsProblem gen_toeplitz(std::size_t n = 100, std::size_t omega = 2, double alpha = 1.25,
                        double scale = 1e-3, std::uint64_t seed = 1);

// n x (n - 2) matrix with n - 1 on the diagonal of the leading block and -1
// elsewhere; b = (-1, ..., -1, n - 1, -1).
TlsProblem gen_vanhuffel(std::size_t n = 100, double epsilon = 1e-6, std::uint64_t seed = 1);

// Dispatch by generator name with parameters from a string map; missing
// entries take the defaults above. Throws std::invalid_argument for unknown
// names or invalid sizes.
TlsProblem generate(const std::string& name, const std::map<std::string, double>& params,
                    std::uint64_t seed);

} // namespace tlsmp
