// Equal-time photon correlators, Fock populations, and the delayed
// second-order correlation function.
#pragma once

#include "pbsim/evolve.hpp"
#include "pbsim/liouvillian.hpp"
#include "pbsim/steady_state.hpp"
#include "pbsim/types.hpp"

#include <span>
#include <vector>

namespace pbsim {

inline constexpr int kMaxCorrelatorOrder = 4;

/// A bundle of correlator evaluations: which equal-time orders to compute,
/// and optionally a delay grid for g2(tau).
struct CorrelatorRequest {
    std::vector<int> orders{2};        // non-empty subset of {2,3,4}, ascending
    std::vector<double> tau_grid{};    // if non-empty, starts at 0, ascending

    void validate() const {
        if (orders.empty())
            throw ValidationError("correlator request needs at least one order");
        for (std::size_t i = 0; i < orders.size(); ++i) {
            if (orders[i] < 2 || orders[i] > kMaxCorrelatorOrder)
                throw ValidationError("correlator orders must lie in {2,3,4}");
            if (i > 0 && orders[i] <= orders[i - 1])
                throw ValidationError("correlator orders must be strictly ascending");
        }
        if (!tau_grid.empty() && tau_grid.front() != 0.0)
            throw ValidationError("tau_grid must start at 0");
    }
};

/// Equal-time n-th order correlation
///   g^(n)(0) = Tr(rho a^dag^n a^n) / Tr(rho a^dag a)^n,  n in {2, 3, 4}.
/// Numerators in [-1e-12, 0) are clamped to zero.
template <typename DerivedRho, typename DerivedA>
double gn_zero(const Eigen::MatrixBase<DerivedRho>& rho, int n,
               const Eigen::MatrixBase<DerivedA>& a) {
    const Eigen::Index dim = a.rows();
    if (n < 2 || n > kMaxCorrelatorOrder)
        throw std::invalid_argument("gn_zero: order must be 2, 3 or 4");
    if (n > dim - 1)
        throw std::invalid_argument("gn_zero: order exceeds dim - 1");

    using Scalar = typename Eigen::NumTraits<typename DerivedA::Scalar>::Real;
    ComplexMatrix<Scalar> an = a;
    for (int k = 1; k < n; ++k) an = (a.derived() * an).eval();

    const Scalar den = (rho.derived() * (a.adjoint() * a.derived())).trace().real();
    if (!(den > Scalar(1e-300)))
        throw ZeroOccupation("gn_zero: denominator underflow (no photons)");
    Scalar num = (rho.derived() * (an.adjoint() * an)).trace().real();
    if (num < Scalar(0)) {
        if (num < Scalar(-1e-12))
            throw NegativeExpectation("gn_zero: negative correlator numerator");
        num = Scalar(0);
    }
    return num / std::pow(den, Scalar(n));
}

template <typename Scalar>
Scalar gn_zero(const DensityMatrixT<Scalar>& rho, int n, const ComplexMatrix<Scalar>& a) {
    return gn_zero(rho.mat, n, a);
}

/// Mean photon number Tr(rho a^dag a).
template <typename DerivedRho, typename DerivedA>
auto mean_photon(const Eigen::MatrixBase<DerivedRho>& rho, const Eigen::MatrixBase<DerivedA>& a) {
    return (rho.derived() * (a.adjoint() * a.derived())).trace().real();
}

template <typename Scalar>
Scalar mean_photon(const DensityMatrixT<Scalar>& rho, const ComplexMatrix<Scalar>& a) {
    return mean_photon(rho.mat, a);
}

/// Diagonal detection probabilities <n|rho|n>, tiny negatives clamped to 0.
template <typename Scalar>
RealVector<Scalar> fock_populations(const DensityMatrixT<Scalar>& rho) {
    RealVector<Scalar> p = rho.mat.diagonal().real();
    for (Eigen::Index k = 0; k < p.size(); ++k)
        if (p(k) < Scalar(0)) p(k) = Scalar(0);
    return p;
}

template <typename Scalar = double>
struct CorrelatorSetT {
    std::vector<Scalar> gn;        // one value per requested order
    std::vector<Scalar> g2_curve;  // per tau grid point; empty if none requested
    Scalar mean_photon{};
};

using CorrelatorSet = CorrelatorSetT<double>;

/// Delayed second-order correlation via the quantum regression theorem:
/// B(0) = a rho_ss a^dag is propagated under the same Liouvillian and
///   g2(tau) = Tr[a^dag a B(tau)] / Tr(rho_ss a^dag a)^2.
/// B is not a state, so it rides the raw propagation path (no per-step
/// renormalization); only the constant overall scale Tr B(0) is divided out
/// up front and restored at the end, which is exact by linearity.
template <typename Scalar = double>
std::vector<Scalar> g2_tau(const SystemParamsT<Scalar>& params, const FockSpace& space,
                           std::span<const std::type_identity_t<Scalar>> tau_grid,
                           const SolverConfigT<Scalar>& cfg = {}) {
    if (tau_grid.empty() || tau_grid.front() != Scalar(0))
        throw std::invalid_argument("g2_tau: tau_grid must start at 0");

    const SuperoperatorT<Scalar> l = liouvillian(params, space);
    const DensityMatrixT<Scalar> rho_ss = steady_state(l, cfg);
    const ComplexMatrix<Scalar> a = annihilation<Scalar>(space);
    const ComplexMatrix<Scalar> ada = a.adjoint() * a;

    const Scalar nbar = mean_photon(rho_ss, a);
    if (!(nbar > Scalar(1e-300)))
        throw ZeroOccupation("g2_tau: steady state holds no photons");

    ComplexMatrix<Scalar> b0 = a * rho_ss.mat * a.adjoint();
    const Scalar scale = b0.trace().real();  // equals nbar
    b0 /= scale;

    const std::vector<ComplexVector<Scalar>> raw = propagate_grid(l, vectorize(b0), tau_grid, cfg);
    std::vector<Scalar> out;
    out.reserve(raw.size());
    for (const auto& v : raw) {
        const ComplexMatrix<Scalar> b = unvectorize(v, l.dim);
        out.push_back((b * ada).trace().real() * scale / (nbar * nbar));
    }
    return out;
}

/// Evaluates a CorrelatorRequest against the steady state of the model.
template <typename Scalar = double>
CorrelatorSetT<Scalar> correlators(const SystemParamsT<Scalar>& params, const FockSpace& space,
                                   const CorrelatorRequest& request,
                                   const SolverConfigT<Scalar>& cfg = {}) {
    request.validate();
    const auto l = liouvillian(params, space);
    const auto rho = steady_state(l, cfg);
    const auto a = annihilation<Scalar>(space);
    CorrelatorSetT<Scalar> out;
    out.mean_photon = mean_photon(rho, a);
    out.gn.reserve(request.orders.size());
    for (int n : request.orders) out.gn.push_back(gn_zero(rho, n, a));
    if (!request.tau_grid.empty()) {
        std::vector<Scalar> grid(request.tau_grid.begin(), request.tau_grid.end());
        out.g2_curve = g2_tau(params, space, grid, cfg);
    }
    return out;
}

}  // namespace pbsim
