// Closed-form weak-drive steady state on the three lowest Fock levels.
//
// In the weak-driving regime (omega << kappa) the state truncates to
// |psi> = C0|0> + C1|1> + C2|2> with C0 ~ 1, and the stationary amplitudes
// follow from the effective non-Hermitian Hamiltonian:
//
//   C1 = omega [-2 delta + i (2 g e^{i theta0} + kappa + kappa2)] / D
//   C2 = sqrt(2) [g e^{i theta0} (-i delta - kappa/2) + omega^2] / D
//   D  = (delta - i kappa/2) (2 delta - i (kappa + kappa2)) - 2 omega^2
//
// This module is deliberately independent of the numerical solvers: it is
// the analytic reference the full master-equation results are checked
// against, so it must never call them.
#pragma once

#include "pbsim/types.hpp"

namespace pbsim {

template <typename Scalar = double>
struct AnalyticAmplitudesT {
    Complex<Scalar> c1;  // amplitude of |1>
    Complex<Scalar> c2;  // amplitude of |2>
};

using AnalyticAmplitudes = AnalyticAmplitudesT<double>;

template <typename Scalar = double>
struct OptimalConditionsT {
    Scalar g_opt;       // gain cancelling the two-photon amplitude
    Scalar theta0_opt;  // pump phase at the cancellation, in (-pi/2, pi/2)
};

using OptimalConditions = OptimalConditionsT<double>;

template <typename Scalar = double>
AnalyticAmplitudesT<Scalar> analytic_amplitudes(const SystemParamsT<Scalar>& p) {
    const Complex<Scalar> i(0, 1);
    const Complex<Scalar> phase = std::exp(i * p.theta0);
    const Complex<Scalar> gp = p.g * phase;
    const Complex<Scalar> denom =
        (p.delta_a - i * p.kappa / Scalar(2)) *
            (Scalar(2) * p.delta_a - i * (p.kappa + p.kappa2)) -
        Scalar(2) * p.omega * p.omega;
    if (std::abs(denom) < Scalar(1e-14))
        throw DegenerateDenominator("analytic_amplitudes: denominator vanished");
    AnalyticAmplitudesT<Scalar> amps;
    amps.c1 = p.omega *
              (Scalar(-2) * p.delta_a + i * (Scalar(2) * gp + p.kappa + p.kappa2)) / denom;
    amps.c2 = std::sqrt(Scalar(2)) *
              (gp * (-i * p.delta_a - p.kappa / Scalar(2)) + p.omega * p.omega) / denom;
    return amps;
}

/// Gain and pump phase that cancel the two-photon amplitude C2:
///   g_opt = omega^2 / sqrt(delta^2 + kappa^2/4),
///   theta0_opt = -atan(2 delta / kappa).
/// Independent of kappa2: two-photon absorption does not move the optimum.
template <typename Scalar = double>
OptimalConditionsT<Scalar> optimal_conditions(Scalar delta_a, Scalar omega, Scalar kappa) {
    OptimalConditionsT<Scalar> opt;
    opt.g_opt = omega * omega /
                std::sqrt(delta_a * delta_a + kappa * kappa / Scalar(4));
    opt.theta0_opt = -std::atan(Scalar(2) * delta_a / kappa);
    return opt;
}

/// Weak-drive mean photon number <n> = |C1|^2 + 2 |C2|^2.
template <typename Scalar = double>
Scalar analytic_mean_photon(const SystemParamsT<Scalar>& p) {
    const auto amps = analytic_amplitudes(p);
    return std::norm(amps.c1) + Scalar(2) * std::norm(amps.c2);
}

/// Weak-drive g2(0) = 2 |C2|^2 / (|C1|^2 + 2 |C2|^2)^2.
template <typename Scalar = double>
Scalar analytic_g2(const SystemParamsT<Scalar>& p) {
    const auto amps = analytic_amplitudes(p);
    const Scalar nbar = std::norm(amps.c1) + Scalar(2) * std::norm(amps.c2);
    if (nbar <= Scalar(0))
        throw ZeroOccupation("analytic_g2: zero occupation, correlator undefined");
    return Scalar(2) * std::norm(amps.c2) / (nbar * nbar);
}

}  // namespace pbsim
