// Steady state of the Lindblad generator.
//
// The kernel equation L vec(rho) = 0 is closed with the trace constraint by
// replacing the first row of L with the trace functional (ones on the
// columns that map to diagonal entries) and solving the dense system by LU
// with partial pivoting, plus one step of iterative refinement. The residual
// is always verified against the unmodified L. If the solve degenerates, the
// eigenvector of the smallest-magnitude eigenvalue of L is used as fallback.
#pragma once

#include "pbsim/liouvillian.hpp"
#include "pbsim/types.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <string>

namespace pbsim {

namespace detail {

template <typename Scalar>
struct SteadyCandidate {
    ComplexMatrix<Scalar> rho;
    Scalar residual;
    bool usable;
};

// Hermitize, normalize and measure ||L vec(rho)||_2. Not usable when the
// solution is non-finite or carries (numerically) no trace.
template <typename Scalar>
SteadyCandidate<Scalar> finish_candidate(const SuperoperatorT<Scalar>& l,
                                         const ComplexVector<Scalar>& x) {
    SteadyCandidate<Scalar> out{{}, Scalar(0), false};
    if (!x.allFinite()) return out;
    ComplexMatrix<Scalar> rho = unvectorize(x, l.dim);
    const Complex<Scalar> tr = rho.trace();
    if (std::abs(tr) < Scalar(1e-10) * x.norm()) return out;
    rho = hermitize(rho / tr);
    rho /= rho.trace().real();  // hermitize can nudge the trace
    out.rho = std::move(rho);
    out.residual = (l.matrix * vectorize(out.rho)).norm();
    out.usable = true;
    return out;
}

}  // namespace detail

template <typename Scalar = double>
DensityMatrixT<Scalar> steady_state(const SuperoperatorT<Scalar>& l,
                                    const SolverConfigT<Scalar>& cfg = {}) {
    const Eigen::Index dim = l.dim;
    const Eigen::Index n = dim * dim;

    ComplexMatrix<Scalar> a = l.matrix;
    a.row(0).setZero();
    for (Eigen::Index m = 0; m < dim; ++m)
        a(0, m * dim + m) = Scalar(1);
    ComplexVector<Scalar> b = ComplexVector<Scalar>::Zero(n);
    b(0) = Scalar(1);

    Eigen::PartialPivLU<ComplexMatrix<Scalar>> lu(a);
    ComplexVector<Scalar> x = lu.solve(b);
    if (x.allFinite()) {
        ComplexVector<Scalar> r = b - a * x;
        x += lu.solve(r);
    }

    auto direct = detail::finish_candidate(l, x);
    if (direct.usable && direct.residual < cfg.residual_tol)
        return DensityMatrixT<Scalar>{std::move(direct.rho)};

    // Fallback: null vector of L via the eigenvector of the eigenvalue of
    // smallest magnitude. Degenerate generators (several fixed points, or a
    // traceless near-null vector) surface here as SingularSolve.
    Eigen::ComplexEigenSolver<ComplexMatrix<Scalar>> eig(l.matrix);
    if (eig.info() != Eigen::Success)
        throw SingularSolve("steady_state: eigenvalue fallback failed to converge");
    Eigen::Index best = 0;
    eig.eigenvalues().cwiseAbs().minCoeff(&best);
    auto fallback = detail::finish_candidate<Scalar>(l, eig.eigenvectors().col(best));
    if (!fallback.usable)
        throw SingularSolve(
            "steady_state: no unit-trace fixed point (degenerate parameters or dim too small)");
    if (fallback.residual < cfg.residual_tol)
        return DensityMatrixT<Scalar>{std::move(fallback.rho)};

    const Scalar achieved =
        direct.usable ? std::min(direct.residual, fallback.residual) : fallback.residual;
    if (!direct.usable && fallback.residual >= Scalar(1))
        throw SingularSolve("steady_state: trace-constrained system is singular");
    throw ResidualTooLarge("steady_state: residual " + std::to_string(achieved) +
                           " exceeds tolerance " + std::to_string(cfg.residual_tol));
}

/// ||L vec(rho)||_2, the defect of rho as a fixed point of L.
template <typename Scalar>
Scalar steady_state_residual(const SuperoperatorT<Scalar>& l, const DensityMatrixT<Scalar>& rho) {
    return (l.matrix * vectorize(rho.mat)).norm();
}

}  // namespace pbsim
