#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pbsim/observables.hpp"
#include "pbsim/weak_drive.hpp"

#include <random>

using namespace pbsim;
using cd = std::complex<double>;
using Mat = ComplexMatrix<double>;

namespace {

DensityMatrix coherent_state(cd alpha, int dim) {
    ComplexVector<double> psi(dim);
    cd amp = 1.0;
    for (int n = 0; n < dim; ++n) {
        if (n > 0) amp *= alpha / std::sqrt(double(n));
        psi(n) = amp;
    }
    psi /= psi.norm();
    return DensityMatrix{psi * psi.adjoint()};
}

Mat random_density_mat(int dim, std::mt19937& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Mat g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = cd(n(rng), n(rng));
    Mat rho = g * g.adjoint();
    rho /= rho.trace().real();
    return rho;
}

SystemParams optimum_params(double kappa2) {
    const auto opt = optimal_conditions(1.0, 0.01, 1.0);
    return SystemParams{1.0, opt.g_opt, opt.theta0_opt, 0.01, 1.0, kappa2};
}

}  // namespace

TEST_CASE("coherent state is Poissonian to truncation accuracy") {
    const int dim = 16;
    auto rho = coherent_state(cd(0.08, 0.06), dim);  // |alpha| = 0.1
    const Mat a = annihilation(FockSpace(dim));
    for (int n = 2; n <= 4; ++n)
        CHECK(gn_zero(rho, n, a) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("single photon shows perfect antibunching") {
    const int dim = 6;
    Mat m = Mat::Zero(dim, dim);
    m(1, 1) = 1.0;
    CHECK(gn_zero(DensityMatrix{m}, 2, annihilation(FockSpace(dim))) == 0.0);
}

TEST_CASE("gn matches the falling-factorial diagonal route") {
    // Tr(rho a^dag^n a^n) = sum_m P_m m(m-1)...(m-n+1): an independent
    // algebraic route through the populations only.
    std::mt19937 rng(1009);
    const int dim = 9;
    const Mat a = annihilation(FockSpace(dim));
    for (int trial = 0; trial < 20; ++trial) {
        DensityMatrix rho{random_density_mat(dim, rng)};
        const auto pops = fock_populations(rho);
        double nbar = 0.0;
        for (int m = 0; m < dim; ++m) nbar += pops(m) * m;
        for (int n = 2; n <= 4; ++n) {
            double num = 0.0;
            for (int m = n; m < dim; ++m) {
                double ff = 1.0;
                for (int k = 0; k < n; ++k) ff *= double(m - k);
                num += pops(m) * ff;
            }
            const double expected = num / std::pow(nbar, n);
            CHECK(gn_zero(rho, n, a) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("gn is invariant under global phase rotation") {
    std::mt19937 rng(77);
    const int dim = 8;
    const Mat a = annihilation(FockSpace(dim));
    DensityMatrix rho{random_density_mat(dim, rng)};
    for (double phi : {0.3, 1.7, -2.9}) {
        Mat u = Mat::Zero(dim, dim);
        for (int m = 0; m < dim; ++m) u(m, m) = std::exp(cd(0, -phi * m));
        DensityMatrix rotated{u * rho.mat * u.adjoint()};
        for (int n = 2; n <= 4; ++n)
            CHECK(gn_zero(rotated, n, a) ==
                  doctest::Approx(gn_zero(rho, n, a)).epsilon(1e-12));
    }
}

TEST_CASE("gn error paths") {
    const int dim = 6;
    const Mat a = annihilation(FockSpace(dim));
    Mat vac = Mat::Zero(dim, dim);
    vac(0, 0) = 1.0;
    CHECK_THROWS_AS(gn_zero(DensityMatrix{vac}, 2, a), ZeroOccupation);

    // numerator below -1e-12 signals a broken state
    Mat broken = Mat::Zero(dim, dim);
    broken(0, 0) = 0.1;
    broken(1, 1) = 0.9 + 1e-6;
    broken(2, 2) = -1e-6;
    CHECK_THROWS_AS(gn_zero(DensityMatrix{broken}, 2, a), NegativeExpectation);

    // tiny negative numerators clamp to zero instead
    Mat clamped = Mat::Zero(dim, dim);
    clamped(0, 0) = 0.5;
    clamped(1, 1) = 0.5;
    clamped(2, 2) = -1e-13;
    CHECK(gn_zero(DensityMatrix{clamped}, 2, a) == 0.0);

    CHECK_THROWS_AS(gn_zero(DensityMatrix{vac}, 5, a), std::invalid_argument);
    CHECK_THROWS_AS(gn_zero(DensityMatrix{vac}, 1, a), std::invalid_argument);
    const Mat a_small = annihilation(FockSpace(4));
    CHECK_THROWS_AS(gn_zero(DensityMatrix{Mat::Zero(4, 4)}, 4, a_small),
                    std::invalid_argument);  // order > dim - 1
}

TEST_CASE("fock populations") {
    const int dim = 8;
    Mat vac = Mat::Zero(dim, dim);
    vac(0, 0) = 1.0;
    auto p = fock_populations(DensityMatrix{vac});
    CHECK(p(0) == 1.0);
    CHECK(p.tail(dim - 1).cwiseAbs().maxCoeff() == 0.0);

    // tiny negative diagonal noise clamps to zero on output
    Mat noisy = vac;
    noisy(3, 3) = -1e-11;
    noisy(0, 0) = 1.0 + 1e-11;
    auto q = fock_populations(DensityMatrix{noisy});
    CHECK(q(3) == 0.0);
    CHECK(q.sum() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("mean photon number basics") {
    const int dim = 8;
    const Mat a = annihilation(FockSpace(dim));
    Mat vac = Mat::Zero(dim, dim);
    vac(0, 0) = 1.0;
    CHECK(mean_photon(DensityMatrix{vac}, a) == 0.0);
    Mat two = Mat::Zero(dim, dim);
    two(2, 2) = 1.0;
    CHECK(mean_photon(DensityMatrix{two}, a) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("blockade steady state: pair suppressed, triples not") {
    const int dim = 14;
    auto l = liouvillian(optimum_params(0.0), FockSpace(dim));
    auto rho = steady_state(l);
    const Mat a = annihilation(FockSpace(dim));
    CHECK(gn_zero(rho, 2, a) < 0.1);
    CHECK(gn_zero(rho, 3, a) > 1.0);
    CHECK(gn_zero(rho, 4, a) > 1.0);

    // at the optimum |2> and |3> detection probabilities are comparable
    auto pops = fock_populations(rho);
    const double ratio = pops(3) / pops(2);
    CHECK(ratio > 0.1);
    CHECK(ratio < 10.0);
}

TEST_CASE("population hierarchy off the optimum") {
    const auto opt = optimal_conditions(1.0, 0.01, 1.0);
    const int dim = 16;
    auto l = liouvillian(SystemParams{0.5, opt.g_opt, opt.theta0_opt, 0.01, 1.0, 0.0},
                         FockSpace(dim));
    auto pops = fock_populations(steady_state(l));
    CHECK(pops(3) / pops(2) < 1e-3);  // |3> negligible away from the optimum
}

TEST_CASE("delayed g2 via regression theorem") {
    const int dim = 12;
    const FockSpace space(dim);
    const SystemParams p = optimum_params(0.0);
    std::vector<double> grid = {0.0, 0.5, 1.0, 2.0, 16.0};
    auto curve = g2_tau(p, space, grid);
    REQUIRE(curve.size() == grid.size());

    auto l = liouvillian(p, space);
    auto rho = steady_state(l);
    const Mat a = annihilation(space);
    const double direct = gn_zero(rho, 2, a);
    CHECK(std::abs(curve[0] - direct) < 1e-10 * direct);

    // decorrelation toward the unique steady state
    CHECK(curve.back() == doctest::Approx(1.0).epsilon(2e-3));

    SUBCASE("grid must start at zero") {
        std::vector<double> bad = {0.5, 1.0};
        CHECK_THROWS_AS(g2_tau(p, space, bad), std::invalid_argument);
    }
    SUBCASE("no photons, no correlator") {
        std::vector<double> t = {0.0, 1.0};
        CHECK_THROWS_AS(g2_tau(SystemParams{0.0, 0.0, 0.0, 0.0, 1.0, 0.0}, space, t),
                        ZeroOccupation);
    }
}

TEST_CASE("two-photon absorption barely moves the g2(tau) shape") {
    // The delayed correlation curves with and without strong TPA stay close
    // on the scale of their excursion toward 1.
    const int dim = 12;
    const FockSpace space(dim);
    std::vector<double> grid;
    for (int k = 0; k <= 8; ++k) grid.push_back(0.25 * k);
    const auto free_curve = g2_tau(optimum_params(0.0), space, grid);
    const auto tpa_curve = g2_tau(optimum_params(10.0), space, grid);
    double max_gap = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
        max_gap = std::max(max_gap, std::abs(free_curve[k] - tpa_curve[k]));
    CHECK(max_gap < 0.02);
}

TEST_CASE("correlator request bundle") {
    CorrelatorRequest request;
    request.orders = {2, 4};
    request.tau_grid = {0.0, 1.0};
    const auto set = correlators(optimum_params(0.0), FockSpace(12), request);
    REQUIRE(set.gn.size() == 2);
    REQUIRE(set.g2_curve.size() == 2);
    CHECK(set.gn[0] == doctest::Approx(set.g2_curve[0]).epsilon(1e-10));
    CHECK(set.gn[0] < 0.1);
    CHECK(set.gn[1] > 1.0);
    CHECK(set.mean_photon > 0.0);

    CorrelatorRequest empty_orders;
    empty_orders.orders.clear();
    CHECK_THROWS_AS(empty_orders.validate(), ValidationError);
    CorrelatorRequest bad_order;
    bad_order.orders = {2, 5};
    CHECK_THROWS_AS(bad_order.validate(), ValidationError);
    CorrelatorRequest bad_grid;
    bad_grid.tau_grid = {1.0, 2.0};
    CHECK_THROWS_AS(bad_grid.validate(), ValidationError);
}

TEST_CASE("truncation leakage stays negligible at working parameters") {
    const int dim = 16;
    auto l = liouvillian(optimum_params(10.0), FockSpace(dim));
    auto pops = fock_populations(steady_state(l));
    CHECK(pops(dim - 1) < 1e-10);
}
