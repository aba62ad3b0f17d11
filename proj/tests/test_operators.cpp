#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pbsim/operators.hpp"

#include <random>

using namespace pbsim;
using cd = std::complex<double>;

TEST_CASE("annihilation matrix elements") {
    SUBCASE("dim 2") {
        auto a = annihilation(FockSpace(3));  // dim >= 3 invariant; check 2x2 block separately
        CHECK(a(0, 1) == cd(1.0, 0.0));
        CHECK(a(1, 0) == cd(0.0, 0.0));
    }
    SUBCASE("dim 3") {
        auto a = annihilation(FockSpace(3));
        CHECK(a(0, 1).real() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(a(1, 2).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
        CHECK(a(2, 2) == cd(0.0, 0.0));
        CHECK(a(1, 0) == cd(0.0, 0.0));
    }
}

TEST_CASE("commutator [a, a^dag] on the truncated space") {
    // Direct matrix-multiplication oracle: identity except the top level,
    // which picks up -(dim-1) from the truncation.
    const int dim = 8;
    auto a = annihilation(FockSpace(dim));
    ComplexMatrix<double> comm = a * a.adjoint() - a.adjoint() * a;
    for (int m = 0; m < dim; ++m)
        for (int n = 0; n < dim; ++n) {
            const double expected = (m != n) ? 0.0 : (m == dim - 1 ? -double(dim - 1) : 1.0);
            CHECK(std::abs(comm(m, n) - cd(expected, 0)) < 1e-14);
        }
}

TEST_CASE("number operator is diag(0..dim-1)") {
    const int dim = 11;
    auto n_exact = number_operator(FockSpace(dim));
    for (int m = 0; m < dim; ++m)
        for (int k = 0; k < dim; ++k)
            CHECK(n_exact(m, k) == cd(m == k ? double(m) : 0.0, 0.0));
    // the product route agrees up to rounding of sqrt(n)^2
    auto a = annihilation(FockSpace(dim));
    CHECK(((a.adjoint() * a) - n_exact).cwiseAbs().maxCoeff() < 4e-15);
}

TEST_CASE("hamiltonian special cases") {
    SUBCASE("number term only") {
        auto h = hamiltonian(SystemParams{1.0, 0.0, 0.0, 0.0, 1.0, 0.0}, FockSpace(3));
        CHECK(h(0, 0) == cd(0, 0));
        CHECK(h(1, 1) == cd(1, 0));
        CHECK(h(2, 2) == cd(2, 0));
        CHECK(std::abs(h(0, 1)) == 0.0);
        CHECK(std::abs(h(2, 0)) == 0.0);
    }
    SUBCASE("drive term") {
        auto h = hamiltonian(SystemParams{0.0, 0.0, 0.0, 0.01, 1.0, 0.0}, FockSpace(3));
        CHECK(h(1, 0) == cd(0.01, 0));
        CHECK(h(0, 1) == cd(0.01, 0));
    }
    SUBCASE("parametric-gain matrix element <2|H|0> = i sqrt(2) g e^{i theta0}") {
        const double g = 8.944e-5, theta0 = -1.1071;
        auto h = hamiltonian(SystemParams{0.0, g, theta0, 0.0, 1.0, 0.0}, FockSpace(3));
        const cd expected = cd(0, 1) * std::sqrt(2.0) * g * std::exp(cd(0, theta0));
        CHECK(std::abs(h(2, 0) - expected) < 1e-18);
        // phase factor close to 0.4472 - 0.8944i at this theta0
        CHECK(std::exp(cd(0, theta0)).real() == doctest::Approx(0.4472).epsilon(1e-3));
        CHECK(std::exp(cd(0, theta0)).imag() == doctest::Approx(-0.8944).epsilon(1e-3));
        // and <0|H|2> is its conjugate
        CHECK(std::abs(h(0, 2) - std::conj(expected)) < 1e-18);
    }
}

TEST_CASE("hamiltonian is Hermitian for random parameters") {
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        SystemParams p{u(rng), std::abs(u(rng)), u(rng) * 1.5, std::abs(u(rng)) * 0.05,
                       0.5 + std::abs(u(rng)), std::abs(u(rng)) * 5};
        auto h = hamiltonian(p, FockSpace(12));
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("effective hamiltonian decay terms") {
    SUBCASE("single-photon decay only") {
        auto h = effective_hamiltonian(SystemParams{0.0, 0.0, 0.0, 0.0, 1.0, 0.0}, FockSpace(3));
        CHECK(std::abs(h(0, 0) - cd(0, 0)) == 0.0);
        CHECK(std::abs(h(1, 1) - cd(0, -0.5)) < 1e-16);
        CHECK(std::abs(h(2, 2) - cd(0, -1.0)) < 1e-16);
    }
    SUBCASE("two-photon absorption adds n(n-1)/2 at level n") {
        auto h = effective_hamiltonian(SystemParams{0.0, 0.0, 0.0, 0.0, 1.0, 2.0}, FockSpace(3));
        CHECK(std::abs(h(1, 1) - cd(0, -0.5)) < 1e-16);
        CHECK(std::abs(h(2, 2) - cd(0, -3.0)) < 1e-16);
    }
}

TEST_CASE("effective minus bare hamiltonian is the diagonal decay part") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int trial = 0; trial < 20; ++trial) {
        SystemParams p{u(rng), std::abs(u(rng)) * 0.1, u(rng), std::abs(u(rng)) * 0.05,
                       0.5 + std::abs(u(rng)), std::abs(u(rng)) * 4};
        const int dim = 9;
        auto diff = (effective_hamiltonian(p, FockSpace(dim)) -
                     hamiltonian(p, FockSpace(dim))).eval();
        // anti-Hermitian and diagonal with entries -i(kappa n/2 + kappa2 n(n-1)/2)
        CHECK((diff + diff.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
        for (int m = 0; m < dim; ++m)
            for (int n = 0; n < dim; ++n) {
                const cd expected =
                    (m == n) ? cd(0, -(p.kappa * m / 2.0 + p.kappa2 * m * (m - 1) / 2.0))
                             : cd(0, 0);
                CHECK(std::abs(diff(m, n) - expected) < 1e-14);
            }
    }
}

TEST_CASE("parameter and space validation") {
    CHECK_THROWS_AS(FockSpace(2), ValidationError);
    CHECK_NOTHROW(FockSpace(3));
    CHECK_THROWS_AS(SystemParams::make(0, 0, 0, 0, 0.0), ValidationError);   // kappa = 0
    CHECK_THROWS_AS(SystemParams::make(0, 0, 0, 0, 1, -1), ValidationError);  // kappa2 < 0
    CHECK_THROWS_AS(SystemParams::make(0, 0, 0, -0.1), ValidationError);      // omega < 0
    CHECK_THROWS_AS(SystemParams::make(0, -1e-3, 0, 0), ValidationError);     // g < 0

    // construction normalizes theta0 into (-pi, pi]
    const double pi = std::numbers::pi;
    CHECK(SystemParams::make(0, 0, 3 * pi, 0).theta0 == doctest::Approx(pi).epsilon(1e-12));
    CHECK(SystemParams::make(0, 0, -1.5 * pi, 0).theta0 ==
          doctest::Approx(0.5 * pi).epsilon(1e-12));
    CHECK(SystemParams::make(0, 0, 0.25, 0).theta0 == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("scalar genericity: long double instantiation") {
    SystemParamsT<long double> p{1.0L, 1e-4L, -0.5L, 0.01L, 1.0L, 0.0L};
    auto h = hamiltonian(p, FockSpace(6));
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-17L);
}
