// Ladder operators and system Hamiltonians on the truncated Fock space.
#pragma once

#include "pbsim/types.hpp"

namespace pbsim {

/// Annihilation operator: <n-1|a|n> = sqrt(n).
template <typename Scalar = double>
ComplexMatrix<Scalar> annihilation(const FockSpace& space) {
    ComplexMatrix<Scalar> a = ComplexMatrix<Scalar>::Zero(space.dim, space.dim);
    for (int n = 1; n < space.dim; ++n)
        a(n - 1, n) = std::sqrt(Scalar(n));
    return a;
}

/// Number operator a^dagger a = diag(0, 1, ..., dim-1), exact.
template <typename Scalar = double>
ComplexMatrix<Scalar> number_operator(const FockSpace& space) {
    ComplexMatrix<Scalar> n = ComplexMatrix<Scalar>::Zero(space.dim, space.dim);
    for (int k = 0; k < space.dim; ++k)
        n(k, k) = Scalar(k);
    return n;
}

/// Rotating-frame Hamiltonian
///   H = delta_a a^dag a + i g (e^{i theta0} a^dag^2 - e^{-i theta0} a^2)
///       + omega (a^dag + a).
/// Hermitian by construction.
template <typename Scalar = double>
ComplexMatrix<Scalar> hamiltonian(const SystemParamsT<Scalar>& params, const FockSpace& space) {
    const ComplexMatrix<Scalar> a = annihilation<Scalar>(space);
    const ComplexMatrix<Scalar> ad = a.adjoint();
    const Complex<Scalar> i(0, 1);
    const Complex<Scalar> phase = std::exp(i * params.theta0);
    // number_operator keeps the diagonal exact (sqrt(n)^2 rounds otherwise)
    ComplexMatrix<Scalar> h = params.delta_a * number_operator<Scalar>(space);
    h.noalias() += i * params.g * (phase * (ad * ad) - std::conj(phase) * (a * a));
    h.noalias() += params.omega * (ad + a);
    return h;
}

/// Non-Hermitian effective Hamiltonian
///   H' = H - i (kappa/2) a^dag a - i (kappa2/2) a^dag^2 a^2.
/// The anti-Hermitian part is diagonal: -i (kappa n/2 + kappa2 n(n-1)/2)
/// at Fock level n.
template <typename Scalar = double>
ComplexMatrix<Scalar> effective_hamiltonian(const SystemParamsT<Scalar>& params,
                                            const FockSpace& space) {
    ComplexMatrix<Scalar> h = hamiltonian(params, space);
    const Complex<Scalar> i(0, 1);
    for (int n = 0; n < space.dim; ++n)
        h(n, n) -= i * (params.kappa * Scalar(n) / Scalar(2) +
                        params.kappa2 * Scalar(n) * Scalar(n - 1) / Scalar(2));
    return h;
}

}  // namespace pbsim
