#include <cmath>
#include <stdexcept>
#include <string>

#include "kernel_ops.hpp"
#include "stuckelberg/kernels.hpp"

namespace stuckelberg {

Backend parse_backend(std::string_view name)
{
    if (name == "serial") return Backend::serial;
    if (name == "openmp" || name == "omp") return Backend::openmp;
    throw std::invalid_argument("unknown backend '" + std::string(name) + "'");
}

namespace kernels {

namespace serial {

void apply_diagonal_phase(std::span<Complex> psi, std::span<const Complex> static_phase,
                          std::span<const std::uint8_t> occupation, std::span<const Complex> occupation_phase)
{
    for (std::size_t k = 0; k < psi.size(); ++k) {
        detail::diagonal_phase_at(psi.data(), static_phase.data(), occupation.data(), occupation_phase.data(), k);
    }
}

void rotate_site(std::span<Complex> psi, unsigned site, double angle)
{
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const std::size_t bit = std::size_t{1} << site;
    const std::size_t pairs = psi.size() / 2;
    for (std::size_t k = 0; k < pairs; ++k) detail::rotate_pair_at(psi.data(), bit, c, s, k);
}

void projected_flip_apply(std::span<const Complex> in, std::span<Complex> out,
                          std::span<const std::int32_t> flips, unsigned n_sites, Complex scale)
{
    for (std::size_t k = 0; k < out.size(); ++k) {
        detail::flip_apply_at(in.data(), out.data(), flips.data(), n_sites, scale, k);
    }
}

void accumulate(std::span<Complex> acc, std::span<const Complex> in)
{
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += in[k];
}

}  // namespace serial

void apply_diagonal_phase(Backend backend, std::span<Complex> psi, std::span<const Complex> static_phase,
                          std::span<const std::uint8_t> occupation, std::span<const Complex> occupation_phase)
{
    if (backend == Backend::openmp) return omp::apply_diagonal_phase(psi, static_phase, occupation, occupation_phase);
    serial::apply_diagonal_phase(psi, static_phase, occupation, occupation_phase);
}

void rotate_site(Backend backend, std::span<Complex> psi, unsigned site, double angle)
{
    if (backend == Backend::openmp) return omp::rotate_site(psi, site, angle);
    serial::rotate_site(psi, site, angle);
}

void projected_flip_apply(Backend backend, std::span<const Complex> in, std::span<Complex> out,
                          std::span<const std::int32_t> flips, unsigned n_sites, Complex scale)
{
    if (backend == Backend::openmp) return omp::projected_flip_apply(in, out, flips, n_sites, scale);
    serial::projected_flip_apply(in, out, flips, n_sites, scale);
}

void accumulate(Backend backend, std::span<Complex> acc, std::span<const Complex> in)
{
    if (backend == Backend::openmp) return omp::accumulate(acc, in);
    serial::accumulate(acc, in);
}

}  // namespace kernels
}  // namespace stuckelberg
