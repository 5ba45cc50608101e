#pragma once

// Elementwise state-vector kernels used by the Trotter integrator.
//
// Every kernel writes each output amplitude from a fixed expression of its
// inputs, so the OpenMP variants are bitwise identical to the serial
// reference for any thread count. Reductions (norms, densities) are not
// kernels and always run serially.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace stuckelberg {

using Complex = std::complex<double>;

enum class Backend { serial, openmp };

Backend parse_backend(std::string_view name);

namespace kernels {

/// psi[k] *= static_phase[k] * occupation_phase[occupation[k]]
void apply_diagonal_phase(Backend backend, std::span<Complex> psi, std::span<const Complex> static_phase,
                          std::span<const std::uint8_t> occupation,
                          std::span<const Complex> occupation_phase);

/// Applies cos(angle) - i sin(angle) sigma^x_site on the full 2^L space.
void rotate_site(Backend backend, std::span<Complex> psi, unsigned site, double angle);

/// out[k] = scale * sum_s in[flips[k * n_sites + s]], skipping entries < 0.
/// This is scale times the blockade-projected sum of sigma^x.
void projected_flip_apply(Backend backend, std::span<const Complex> in, std::span<Complex> out,
                          std::span<const std::int32_t> flips, unsigned n_sites, Complex scale);

/// acc[k] += in[k]
void accumulate(Backend backend, std::span<Complex> acc, std::span<const Complex> in);

namespace serial {
void apply_diagonal_phase(std::span<Complex> psi, std::span<const Complex> static_phase,
                          std::span<const std::uint8_t> occupation, std::span<const Complex> occupation_phase);
void rotate_site(std::span<Complex> psi, unsigned site, double angle);
void projected_flip_apply(std::span<const Complex> in, std::span<Complex> out,
                          std::span<const std::int32_t> flips, unsigned n_sites, Complex scale);
void accumulate(std::span<Complex> acc, std::span<const Complex> in);
}  // namespace serial

namespace omp {
void apply_diagonal_phase(std::span<Complex> psi, std::span<const Complex> static_phase,
                          std::span<const std::uint8_t> occupation, std::span<const Complex> occupation_phase);
void rotate_site(std::span<Complex> psi, unsigned site, double angle);
void projected_flip_apply(std::span<const Complex> in, std::span<Complex> out,
                          std::span<const std::int32_t> flips, unsigned n_sites, Complex scale);
void accumulate(std::span<Complex> acc, std::span<const Complex> in);
}  // namespace omp

}  // namespace kernels
}  // namespace stuckelberg
