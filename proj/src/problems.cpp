#include "tlsmp/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tlsmp/context.hpp"
#include "tlsmp/linalg.hpp"

namespace tlsmp {

namespace {

void fill_uniform(std::span<double> out, Rng& rng, double lo = 0.0, double hi = 1.0)
{
    for (double& x : out) x = rng.uniform(lo, hi);
}

void require(bool ok, const std::string& msg)
{
    if (!ok) throw std::invalid_argument(msg);
}

// A + eps U and b + eps u with U, u uniform(0,1), drawn after A.
void perturb_additive(TlsProblem& p, Rng& rng)
{
    Matrix e(p.a.rows(), p.a.cols());
    fill_uniform(e.values(), rng);
    Vector ev(p.b.size());
    fill_uniform(ev, rng);
    for (std::size_t i = 0; i < e.values().size(); ++i) p.a.values()[i] += p.epsilon * e.values()[i];
    for (std::size_t i = 0; i < ev.size(); ++i) p.b[i] += p.epsilon * ev[i];
}

} // namespace

Matrix rand_orth(std::size_t n, Rng& rng)
{
    require(n >= 1, "rand_orth: n must be positive");
    Matrix g(n, n);
    for (double& x : g.values()) x = rng.normal();
    // householder_qr keeps diag(R) >= 0, which is the sign convention that
    // makes Q Haar distributed.
    return form_q1(householder_qr(g, Arith(fp64())));
}

TlsProblem gen_random(std::size_t m, std::size_t n, double epsilon, std::uint64_t seed)
{
    require(n >= 1 && m >= n, "random: requires m >= n >= 1");
    Rng rng(seed);
    TlsProblem p{Matrix(m, n), Vector(m, 1.0), std::nullopt, "random", seed, epsilon, {}};
    p.params = {{"m", double(m)}, {"n", double(n)}, {"eps", epsilon}};
    fill_uniform(p.a.values(), rng);
    perturb_additive(p, rng);
    return p;
}

TlsProblem gen_delta(double delta, double epsilon, std::uint64_t seed)
{
    require(delta > 0.0, "delta: requires delta > 0");
    Rng rng(seed);
    TlsProblem p{Matrix(9, 4), Vector(9, 1.0), std::nullopt, "delta", seed, epsilon, {}};
    p.params = {{"delta", delta}, {"eps", epsilon}};
    p.a(0, 0) = delta;
    p.a(2, 1) = delta;
    p.a(6, 2) = 1.0;
    p.a(8, 3) = 1.0;

    Matrix ebar(9, 4);
    fill_uniform(ebar.values(), rng, -1.0, 1.0);
    Vector eb(9);
    fill_uniform(eb, rng, -1.0, 1.0);
    // Elementwise (Hadamard) products: E = eps Ebar .* A, e = eps ebar .* b.
    for (std::size_t i = 0; i < ebar.values().size(); ++i)
        p.a.values()[i] += epsilon * ebar.values()[i] * p.a.values()[i];
    for (std::size_t i = 0; i < eb.size(); ++i) p.b[i] += epsilon * eb[i] * p.b[i];
    return p;
}

TlsProblem gen_bjorck(std::size_t m, std::size_t n, double epsilon, std::uint64_t seed)
{
    require(n >= 1 && m >= n, "bjorck: requires m >= n >= 1");
    Rng rng(seed);
    const Matrix y = rand_orth(m, rng);
    const Matrix z = rand_orth(n, rng);

    // Y(:, 1:n) * D * Z^T
    Matrix yd(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double d = std::ldexp(1.0, -static_cast<int>(j));
        for (std::size_t i = 0; i < m; ++i) yd(i, j) = y(i, j) * d;
    }
    TlsProblem p;
    p.a = multiply(yd, z.transposed());
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 / static_cast<double>(i + 1);
    p.b = multiply(p.a, x);
    p.x_true = x;
    p.label = "bjorck";
    p.seed = seed;
    p.epsilon = epsilon;
    p.params = {{"m", double(m)}, {"n", double(n)}, {"eps", epsilon}};
    perturb_additive(p, rng);
    return p;
}

TlsProblem gen_toeplitz(std::size_t n, std::size_t omega, double alpha, double scale,
                        std::uint64_t seed)
{
    require(n > 2 * omega, "toeplitz: requires n > 2 omega");
    require(alpha > 0.0, "toeplitz: requires alpha > 0");
    const std::size_t cols = n - 2 * omega;
    Rng rng(seed);

    Vector band(2 * omega + 1);
    const double w = static_cast<double>(omega);
    for (std::size_t i = 0; i < band.size(); ++i) {
        const double s = w - static_cast<double>(i);
        band[i] = std::exp(-s * s / (2.0 * alpha * alpha)) /
                  std::sqrt(2.0 * std::numbers::pi * alpha * alpha);
    }

    TlsProblem p{Matrix(n, cols), Vector(n, 1.0), std::nullopt, "toeplitz", seed, scale, {}};
    p.params = {{"n", double(n)}, {"omega", w}, {"alpha", alpha}, {"scale", scale}};
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t k = 0; k < band.size(); ++k) p.a(j + k, j) = band[k];

    // Random Toeplitz E from a uniform(0,1) first column and first row.
    Vector c(n), r(cols);
    fill_uniform(c, rng);
    fill_uniform(r, rng);
    r[0] = c[0];
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < n; ++i)
            p.a(i, j) += scale * (i >= j ? c[i - j] : r[j - i]);
    Vector e(n);
    fill_uniform(e, rng);
    for (std::size_t i = 0; i < n; ++i) p.b[i] += scale * e[i];
    return p;
}

TlsProblem gen_vanhuffel(std::size_t n, double epsilon, std::uint64_t seed)
{
    require(n >= 4, "vanhuffel: requires n >= 4");
    Rng rng(seed);
    const std::size_t cols = n - 2;
    const double nd = static_cast<double>(n);
    TlsProblem p{Matrix(n, cols, -1.0), Vector(n, -1.0), std::nullopt, "vanhuffel", seed, epsilon, {}};
    p.params = {{"n", nd}, {"eps", epsilon}};
    for (std::size_t j = 0; j < cols; ++j) p.a(j, j) = nd - 1.0;
    p.b[n - 2] = nd - 1.0;
    perturb_additive(p, rng);
    return p;
}

TlsProblem generate(const std::string& name, const std::map<std::string, double>& params,
                    std::uint64_t seed)
{
    auto get = [&](const char* key, double fallback) {
        const auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    auto size = [&](const char* key, double fallback) {
        const double v = get(key, fallback);
        require(v >= 0.0 && v == std::floor(v), std::string(key) + " must be a nonnegative integer");
        return static_cast<std::size_t>(v);
    };
    if (name == "random") return gen_random(size("m", 100), size("n", 60), get("eps", 1e-6), seed);
    if (name == "delta") return gen_delta(get("delta", 1e-2), get("eps", 1e-1), seed);
    if (name == "bjorck") return gen_bjorck(size("m", 30), size("n", 15), get("eps", 0.05), seed);
    if (name == "toeplitz")
        return gen_toeplitz(size("n", 100), size("omega", 2), get("alpha", 1.25), get("scale", 1e-3),
                            seed);
    if (name == "vanhuffel") return gen_vanhuffel(size("n", 100), get("eps", 1e-6), seed);
    throw std::invalid_argument("unknown generator '" + name + "'");
}

} // namespace tlsmp
