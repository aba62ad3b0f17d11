// Core value types for the truncated-Fock-space cavity model.
//
// All rates are expressed in units of the single-photon decay rate kappa;
// kappa itself stays a field (default 1) so formulas can be exercised with
// kappa != 1.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pbsim {

template <typename Scalar = double>
using Complex = std::complex<Scalar>;

template <typename Scalar = double>
using ComplexMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar = double>
using ComplexVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar = double>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter or configuration value violates an invariant.
struct ValidationError : Error {
    using Error::Error;
};

// Analytic denominator collapsed (unphysical parameter combination).
struct DegenerateDenominator : Error {
    using Error::Error;
};

// Steady-state linear system is numerically singular.
struct SingularSolve : Error {
    using Error::Error;
};

// A solution was found but its residual exceeds the configured tolerance.
struct ResidualTooLarge : Error {
    using Error::Error;
};

// The adaptive integrator hit its step cap.
struct StepLimitExceeded : Error {
    using Error::Error;
};

// A correlator denominator underflowed (no photons in the state).
struct ZeroOccupation : Error {
    using Error::Error;
};

// A correlator numerator came out significantly negative (broken state).
struct NegativeExpectation : Error {
    using Error::Error;
};

// A sweep-shaped argument has the wrong number of axes.
struct WrongArity : Error {
    using Error::Error;
};

// Every point of a sweep failed to solve.
struct AllPointsFailed : Error {
    using Error::Error;
};

// Malformed config text.
struct ParseError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

// Maps an angle to the branch (-pi, pi].
template <typename Scalar>
Scalar normalize_angle(Scalar theta) {
    constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    theta -= two_pi * std::floor(theta / two_pi);  // now in [0, 2*pi)
    if (theta > std::numbers::pi_v<Scalar>) theta -= two_pi;
    return theta;
}

/// The six physical parameters of the driven cavity with parametric gain
/// and two-photon absorption. Aggregate; use make() or validate() at API
/// boundaries.
template <typename Scalar = double>
struct SystemParamsT {
    Scalar delta_a{};     // cavity-drive detuning, units of kappa
    Scalar g{};           // parametric (two-photon) gain, units of kappa
    Scalar theta0{};      // pump phase, radians, stored in (-pi, pi]
    Scalar omega{};       // drive amplitude, units of kappa
    Scalar kappa{1};      // single-photon decay rate (reference unit)
    Scalar kappa2{};      // two-photon absorption rate, units of kappa

    void validate() const {
        if (!(kappa > Scalar(0))) throw ValidationError("kappa must be > 0");
        if (!(kappa2 >= Scalar(0))) throw ValidationError("kappa2 must be >= 0");
        if (!(omega >= Scalar(0))) throw ValidationError("omega must be >= 0");
        if (!(g >= Scalar(0))) throw ValidationError("g must be >= 0");
        if (!std::isfinite(delta_a)) throw ValidationError("delta_a must be finite");
        if (!std::isfinite(theta0)) throw ValidationError("theta0 must be finite");
    }

    static SystemParamsT make(Scalar delta_a, Scalar g, Scalar theta0, Scalar omega,
                              Scalar kappa = Scalar(1), Scalar kappa2 = Scalar(0)) {
        SystemParamsT p{delta_a, g, normalize_angle(theta0), omega, kappa, kappa2};
        p.validate();
        return p;
    }
};

using SystemParams = SystemParamsT<double>;

/// Truncated Fock space keeping levels |0>..|dim-1>.
struct FockSpace {
    int dim;

    explicit FockSpace(int dim_) : dim(dim_) {
        if (dim < 3) throw ValidationError("Fock dimension must be >= 3");
    }
};

// ---------------------------------------------------------------------------
// Solver configuration
// ---------------------------------------------------------------------------

template <typename Scalar = double>
struct SolverConfigT {
    Scalar residual_tol{1e-10};  // bound on ||L vec(rho_ss)||_2
    Scalar ode_rel_tol{1e-9};
    Scalar ode_abs_tol{1e-12};
    long max_steps{10'000'000};  // accepted + rejected integrator steps

    void validate() const {
        if (!(residual_tol > Scalar(0))) throw ValidationError("residual_tol must be > 0");
        if (!(ode_rel_tol > Scalar(0))) throw ValidationError("ode_rel_tol must be > 0");
        if (!(ode_abs_tol > Scalar(0))) throw ValidationError("ode_abs_tol must be > 0");
        if (max_steps <= 0) throw ValidationError("max_steps must be > 0");
    }
};

using SolverConfig = SolverConfigT<double>;

// ---------------------------------------------------------------------------
// States and superoperators
// ---------------------------------------------------------------------------

/// Density matrix on the truncated Fock space. The solvers return matrices
/// that are Hermitian, unit-trace and positive semidefinite up to the
/// documented tolerances; the struct itself does not re-check on access.
template <typename Scalar = double>
struct DensityMatrixT {
    ComplexMatrix<Scalar> mat;

    Eigen::Index dim() const { return mat.rows(); }
};

using DensityMatrix = DensityMatrixT<double>;

/// Dense superoperator acting on column-stacked vectorizations of dim x dim
/// operators; matrix is dim^2 x dim^2.
template <typename Scalar = double>
struct SuperoperatorT {
    Eigen::Index dim{};
    ComplexMatrix<Scalar> matrix;
};

using Superoperator = SuperoperatorT<double>;

// Column-stacking vectorization: vec index of entry (row m, col n) is
// n*dim + m, which is Eigen's native column-major layout.
template <typename Derived>
ComplexVector<typename Eigen::NumTraits<typename Derived::Scalar>::Real>
vectorize(const Eigen::MatrixBase<Derived>& m) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    ComplexVector<Real> v(m.size());
    Eigen::Index dim = m.rows();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        v.segment(j * dim, dim) = m.col(j);
    return v;
}

template <typename Scalar>
ComplexMatrix<Scalar> unvectorize(const ComplexVector<Scalar>& v, Eigen::Index dim) {
    return Eigen::Map<const ComplexMatrix<Scalar>>(v.data(), dim, dim);
}

// (A + A^dagger) / 2
template <typename Derived>
ComplexMatrix<typename Eigen::NumTraits<typename Derived::Scalar>::Real>
hermitize(const Eigen::MatrixBase<Derived>& m) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    ComplexMatrix<Real> h = m;
    h = ((h + h.adjoint()) / Real(2)).eval();
    return h;
}

}  // namespace pbsim
