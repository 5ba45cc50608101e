#pragma once

// Closed-form Floquet perturbation theory for the driven Rydberg chain.
//
// Effective terms are expressed in the interaction picture of the detuning
// H_0(t) = Delta(t) sum n_i, so x = Delta0 / omega enters through
// exp(i x sin(omega t)). Kinetic coefficients are effective Rabi amplitudes:
// a coefficient c stands for (c / 2) sigma^x, matching the (Omega / 2)
// sigma^x drive term.

#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "stuckelberg/geometry.hpp"

namespace stuckelberg {

/// A retained diagonal coupling V n_i n_j (i < j), offset = j - i in chain order.
struct Coupling {
    std::size_t i = 0;
    std::size_t j = 0;
    double value = 0.0;

    std::size_t offset() const { return j - i; }
};

/// Couplings beyond the first distance class (the blockaded pairs), as kept
/// by the perturbative treatment.
std::vector<Coupling> retained_couplings(const AtomArray& array, double c6 = kC6);

/// Drive frequencies in [omega_lo, omega_hi] with J_0(delta0 / omega) = 0,
/// refined to |J_0| < 1e-10, in descending order.
std::vector<double> predict_freezing_frequencies(double delta0, double omega_lo, double omega_hi);

/// First positive zeros of J_0 up to x_max, refined by bisection.
std::vector<double> bessel_j0_zeros(double x_max);

struct FptFirstOrder {
    /// Time average of Omega(t) exp(i x sin(omega t)) over one period:
    /// omega0 J_0(x) for r = 0 and (omega0 / 2)[J_0(x) + (J_r(x) + J_-r(x)) / 2]
    /// for r >= 1, which is (omega0 / 2)[J_0 + J_r] for even r.
    double kinetic_coefficient = 0.0;
    std::vector<Coupling> interaction_terms;
};

FptFirstOrder fpt_first_order(double delta0, double omega0, double omega, unsigned r,
                              std::vector<Coupling> interactions = {});

/// (coefficient / 2) sigma^x_{flip_site} n_{occupied_site}.
struct SecondOrderTerm {
    std::size_t flip_site = 0;
    std::size_t occupied_site = 0;
    std::size_t offset = 0;
    double coefficient = 0.0;
};

struct FptSecondOrder {
    std::vector<SecondOrderTerm> terms;
    /// S = sum_{0 < |n| <= n_max} J_n(x) / n; each term has coefficient
    /// omega0 * S * V / omega.
    double bessel_sum = 0.0;
    std::size_t n_max = 0;
    /// Bound on the neglected |n| > n_max part of S.
    double tail_bound = 0.0;

    bool is_zero() const { return terms.empty(); }
};

/// With n_max unset the truncation grows until the tail bound drops below
/// 1e-15 (capped at the Bessel envelope).
FptSecondOrder fpt_second_order(double delta0, double omega0, double omega, const std::vector<Coupling>& interactions,
                                std::optional<std::size_t> n_max = std::nullopt);

struct ResonanceAmplitude {
    /// integral_0^T omega0 exp(i delta0 sin(omega t) / omega - i V t) dt
    std::complex<double> value;
    std::size_t n_max = 0;
    /// Term n sits at index n + n_max.
    std::vector<std::complex<double>> contributions;
};

ResonanceAmplitude fock_resonance_amplitude(double V, double delta0, double omega0, double omega,
                                            std::size_t n_max = 40);

/// Three-site blockade check in the basis {000, 001, 010, 100, 101} with the
/// next-nearest coupling V on |101>.
struct FockCheckReport {
    double simulated_density = 0.0;
    double predicted_density = 0.0;
    double discrepancy = 0.0;
    /// |<single| U_1 |000>| = omega0 T |J_0(x)| / 2.
    double j0_channel = 0.0;
    /// |<101| U_1 |001>| = |resonance amplitude| / 2.
    double resonance_channel = 0.0;
    std::complex<double> resonance_amplitude;
};

/// Evolves |000> over one period with exact piecewise exponentials and
/// compares with the first-order propagator exp(U_1) built from the J_0
/// channel and the resonance amplitude.
FockCheckReport three_site_fock_check(double V, double delta0, double omega0, double omega,
                                      std::size_t steps = 2000);

}  // namespace stuckelberg
