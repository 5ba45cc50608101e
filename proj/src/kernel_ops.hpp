#pragma once

// Per-element bodies shared by the serial and OpenMP kernels. Keeping a single
// definition is what makes the two backends produce identical bits.

#include <complex>
#include <cstddef>
#include <cstdint>

namespace stuckelberg::kernels::detail {

using Complex = std::complex<double>;

inline void diagonal_phase_at(Complex* psi, const Complex* static_phase, const std::uint8_t* occupation,
                              const Complex* occupation_phase, std::size_t k)
{
    psi[k] *= static_phase[k] * occupation_phase[occupation[k]];
}

// Pair k of 2^(L-1): insert a zero at the rotated bit to get the lower index.
inline void rotate_pair_at(Complex* psi, std::size_t bit, double c, double s, std::size_t k)
{
    const std::size_t low = k & (bit - 1);
    const std::size_t i0 = ((k - low) << 1) | low;
    const std::size_t i1 = i0 | bit;
    const Complex a = psi[i0];
    const Complex b = psi[i1];
    // [c, -is; -is, c]
    psi[i0] = Complex(c * a.real() + s * b.imag(), c * a.imag() - s * b.real());
    psi[i1] = Complex(c * b.real() + s * a.imag(), c * b.imag() - s * a.real());
}

inline void flip_apply_at(const Complex* in, Complex* out, const std::int32_t* flips, unsigned n_sites,
                          Complex scale, std::size_t k)
{
    Complex sum{0.0, 0.0};
    const std::int32_t* row = flips + k * n_sites;
    for (unsigned s = 0; s < n_sites; ++s) {
        if (row[s] >= 0) sum += in[row[s]];
    }
    out[k] = scale * sum;
}

}  // namespace stuckelberg::kernels::detail
