#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "helpers.hpp"
#include "tlsmp/oracle.hpp"
#include "tlsmp/problems.hpp"

using namespace tlsmp;

TEST_CASE("rng determinism and ranges")
{
    Rng a(9), b(9), c(10);
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t x = a.next_u64();
        CHECK(x == b.next_u64());
        (void)c.next_u64();
    }
    Rng d(9), e(10);
    CHECK(d.next_u64() != e.next_u64());
    Rng r(1);
    double mean = 0.0, sq = 0.0;
    const int count = 20000;
    for (int i = 0; i < count; ++i) {
        const double u = r.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const double z = r.normal();
        mean += z;
        sq += z * z;
    }
    CHECK(std::fabs(mean / count) < 0.05);
    CHECK(std::fabs(sq / count - 1.0) < 0.05);
}

TEST_CASE("generators are deterministic")
{
    CHECK(gen_random(20, 5, 1e-3, 4).a == gen_random(20, 5, 1e-3, 4).a);
    CHECK(gen_bjorck(12, 4, 0.05, 4).b == gen_bjorck(12, 4, 0.05, 4).b);
    CHECK_FALSE(gen_toeplitz(20, 2, 1.25, 1e-3, 4).a == gen_toeplitz(20, 2, 1.25, 1e-3, 5).a);
}

TEST_CASE("random generator")
{
    const TlsProblem p = gen_random(10, 4, 0.0, 3);
    CHECK(p.b == Vector(10, 1.0));
    for (double v : p.a.values()) {
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
    // The unperturbed draws come first, so eps only adds to them.
    const TlsProblem q = gen_random(10, 4, 1e-3, 3);
    for (std::size_t i = 0; i < p.a.values().size(); ++i) {
        const double d = q.a.values()[i] - p.a.values()[i];
        CHECK(d >= 0.0);
        CHECK(d <= 1e-3 * (1 + 1e-12));
    }
    const OracleResult o = tls_solve_exact(gen_random().a, gen_random().b);
    CHECK(o.kappa_a > 10.0);
    CHECK(o.kappa_a < 1000.0);
}

TEST_CASE("delta generator")
{
    const TlsProblem unit = gen_delta(1.0, 0.0, 1);
    const SvdResult s = jacobi_svd(unit.a);
    for (double v : s.sigma) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
    const OracleResult ls = tls_solve_exact(gen_delta(1e-2, 0.0, 1).a, gen_delta(1e-2, 0.0, 1).b);
    CHECK(ls.sigma_a.back() == doctest::Approx(1e-2));
    const TlsProblem p = gen_delta(1e-2, 1e-1, 1);
    CHECK(p.a.rows() == 9);
    CHECK(p.a.cols() == 4);
    CHECK(p.a(1, 0) == 0.0); // zero pattern survives multiplicative noise
    CHECK(std::fabs(p.a(0, 0) - 1e-2) <= 1e-3 * (1 + 1e-12));
    const OracleResult o = tls_solve_exact(p.a, p.b);
    CHECK(o.kappa_a > 30.0);
    CHECK(o.kappa_a < 300.0);
    CHECK_THROWS_AS(gen_delta(0.0, 0.1, 1), std::invalid_argument);
}

TEST_CASE("Bjorck generator")
{
    const TlsProblem p = gen_bjorck(30, 15, 0.0, 1);
    const SvdResult s = jacobi_svd(p.a);
    double worst = 0.0;
    for (std::size_t i = 0; i < 15; ++i) {
        const double target = std::ldexp(1.0, -static_cast<int>(i));
        worst = std::max(worst, std::fabs(s.sigma[i] - target) / target);
    }
    CHECK(worst <= 1e-12);
    REQUIRE(p.x_true);
    CHECK((*p.x_true)[3] == 0.25);

    const OracleResult o = tls_solve_exact(p.a, p.b);
    CHECK(o.consistent);
    CHECK(testutil::rel_diff(o.x_tls, *p.x_true) <= 1e-9);
}

TEST_CASE("Toeplitz generator")
{
    const double alpha = 1.25;
    const TlsProblem p = gen_toeplitz(20, 2, alpha, 0.0, 1);
    REQUIRE(p.a.rows() == 20);
    REQUIRE(p.a.cols() == 16);
    double mass = 0.0;
    for (int i = 1; i <= 5; ++i)
        mass += std::exp(-(2.0 - i + 1) * (2.0 - i + 1) / (2 * alpha * alpha)) / std::sqrt(2 * M_PI * alpha * alpha);
    for (std::size_t j = 0; j < 16; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < 20; ++i) sum += p.a(i, j);
        CHECK(sum == doctest::Approx(mass).epsilon(1e-14));
        CHECK(p.a(j, j) == p.a(0, 0));
    }
    CHECK(p.b == Vector(20, 1.0));

    const TlsProblem diag = gen_toeplitz(6, 0, alpha, 0.0, 1);
    CHECK(diag.a.cols() == 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) CHECK(diag.a(i, j) == (i == j ? diag.a(0, 0) : 0.0));

    // The perturbation is itself Toeplitz.
    const TlsProblem q = gen_toeplitz(20, 2, alpha, 1e-3, 2);
    const TlsProblem q0 = gen_toeplitz(20, 2, alpha, 0.0, 2);
    for (std::size_t i = 1; i < 20; ++i)
        for (std::size_t j = 1; j < 16; ++j)
            CHECK(q.a(i, j) - q0.a(i, j) == doctest::Approx(q.a(i - 1, j - 1) - q0.a(i - 1, j - 1)));
    CHECK_THROWS_AS(gen_toeplitz(4, 2, alpha, 0.0, 1), std::invalid_argument);
}

TEST_CASE("Van Huffel generator")
{
    const TlsProblem p = gen_vanhuffel(4, 0.0, 1);
    CHECK(p.a == Matrix::from_rows({{3, -1}, {-1, 3}, {-1, -1}, {-1, -1}}));
    CHECK(p.b == Vector{-1, -1, 3, -1});
    const TlsProblem big = gen_vanhuffel(12, 0.0, 1);
    for (std::size_t j = 0; j < big.a.cols(); ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < 12; ++i) sum += big.a(i, j);
        CHECK(sum == 0.0);
    }
    CHECK_THROWS_AS(gen_vanhuffel(3, 0.0, 1), std::invalid_argument);
}

TEST_CASE("rand_orth")
{
    Rng rng(5);
    const Matrix one = rand_orth(1, rng);
    CHECK(std::fabs(one(0, 0)) == 1.0);
    for (std::size_t n : {2, 7, 30}) {
        const Matrix q = rand_orth(n, rng);
        CHECK(testutil::frob_diff(multiply(q.transposed(), q), Matrix::identity(n)) <= 1e-12 * n);
    }
    Rng a(6), b(6);
    CHECK(rand_orth(5, a) == rand_orth(5, b));
}

TEST_CASE("default problems have unique solutions")
{
    for (const char* name : {"random", "delta", "bjorck", "toeplitz", "vanhuffel"}) {
        CAPTURE(name);
        const TlsProblem p = generate(name, {}, 1);
        const OracleResult o = tls_solve_exact(p.a, p.b);
        CHECK(o.unique);
        CHECK(o.sigma_prime_n() > o.sigma_min());
    }
}

TEST_CASE("generate dispatch")
{
    const TlsProblem p = generate("random", {{"m", 12}, {"n", 3}, {"eps", 0.0}}, 2);
    CHECK(p.a == gen_random(12, 3, 0.0, 2).a);
    CHECK_THROWS_AS(generate("nope", {}, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate("random", {{"m", 2}, {"n", 3}}, 1), std::invalid_argument);
    CHECK(generate("vanhuffel", {}, 1).label == "vanhuffel");
}

TEST_CASE("reference constraint bounds at default parameters")
{
    const PrecisionConstraintReport vh = evaluate_uq_constraints(gen_vanhuffel().a, gen_vanhuffel().b);
    CHECK(vh.bound_rhs > 5e-4);
    CHECK(vh.bound_rhs < 5e-2);
    const PrecisionConstraintReport rnd = evaluate_uq_constraints(gen_random().a, gen_random().b);
    CHECK(rnd.bound_heuristic > 2e-3);
    CHECK(rnd.bound_heuristic < 2e-1);
}
