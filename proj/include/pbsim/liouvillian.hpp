// Lindblad generator as a dense superoperator on column-stacked states.
//
// Convention: vec stacks columns, so vec(A X B) = (B^T kron A) vec(X).
// With that identity the master equation
//   d rho/dt = -i[H, rho] + sum_C ( C rho C^dag - {C^dag C, rho}/2 )
// vectorizes to d vec(rho)/dt = L vec(rho) with
//   L = -i (I kron H - H^T kron I)
//       + sum_C ( conj(C) kron C - I kron (C^dag C)/2 - (C^dag C)^T kron I/2 ).
#pragma once

#include "pbsim/operators.hpp"
#include "pbsim/types.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace pbsim {

/// Dissipator superoperator D[C] for a single collapse operator C.
template <typename Scalar>
ComplexMatrix<Scalar> dissipator(const ComplexMatrix<Scalar>& c) {
    const Eigen::Index dim = c.rows();
    const ComplexMatrix<Scalar> eye = ComplexMatrix<Scalar>::Identity(dim, dim);
    const ComplexMatrix<Scalar> cdc = c.adjoint() * c;
    ComplexMatrix<Scalar> d = Eigen::kroneckerProduct(c.conjugate(), c);
    d.noalias() -= Scalar(0.5) * Eigen::kroneckerProduct(eye, cdc);
    d.noalias() -= Scalar(0.5) * Eigen::kroneckerProduct(cdc.transpose(), eye);
    return d;
}

/// Full Liouvillian for the model: Hamiltonian part plus single-photon decay
/// at rate kappa (collapse operator a) and two-photon absorption at rate
/// kappa2 (collapse operator a^2).
template <typename Scalar = double>
SuperoperatorT<Scalar> liouvillian(const SystemParamsT<Scalar>& params, const FockSpace& space) {
    const ComplexMatrix<Scalar> a = annihilation<Scalar>(space);
    const ComplexMatrix<Scalar> h = hamiltonian(params, space);
    const ComplexMatrix<Scalar> eye = ComplexMatrix<Scalar>::Identity(space.dim, space.dim);
    const Complex<Scalar> i(0, 1);

    ComplexMatrix<Scalar> l =
        -i * (Eigen::kroneckerProduct(eye, h) - Eigen::kroneckerProduct(h.transpose(), eye));
    l.noalias() += params.kappa * dissipator<Scalar>(a);
    if (params.kappa2 != Scalar(0)) {
        ComplexMatrix<Scalar> a2 = a * a;
        l.noalias() += params.kappa2 * dissipator<Scalar>(a2);
    }
    return SuperoperatorT<Scalar>{space.dim, std::move(l)};
}

/// L applied to a dim x dim operator, returned as a dim x dim operator.
template <typename Scalar>
ComplexMatrix<Scalar> apply_superoperator(const SuperoperatorT<Scalar>& l, const ComplexMatrix<Scalar>& x) {
    ComplexVector<Scalar> v = l.matrix * vectorize(x);
    return unvectorize(v, l.dim);
}

}  // namespace pbsim
