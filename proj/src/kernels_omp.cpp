#include <cmath>
#include <cstdint>

#include "kernel_ops.hpp"
#include "stuckelberg/kernels.hpp"

namespace stuckelberg::kernels::omp {

namespace {
// Below this many elements the fork/join overhead dominates.
constexpr std::int64_t kParallelThreshold = 1 << 12;
}

void apply_diagonal_phase(std::span<Complex> psi, std::span<const Complex> static_phase,
                          std::span<const std::uint8_t> occupation, std::span<const Complex> occupation_phase)
{
    const auto n = static_cast<std::int64_t>(psi.size());
    Complex* p = psi.data();
    const Complex* sp = static_phase.data();
    const std::uint8_t* occ = occupation.data();
    const Complex* op = occupation_phase.data();
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (std::int64_t k = 0; k < n; ++k) detail::diagonal_phase_at(p, sp, occ, op, static_cast<std::size_t>(k));
}

void rotate_site(std::span<Complex> psi, unsigned site, double angle)
{
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const std::size_t bit = std::size_t{1} << site;
    const auto pairs = static_cast<std::int64_t>(psi.size() / 2);
    Complex* p = psi.data();
#pragma omp parallel for schedule(static) if (pairs >= kParallelThreshold)
    for (std::int64_t k = 0; k < pairs; ++k) detail::rotate_pair_at(p, bit, c, s, static_cast<std::size_t>(k));
}

void projected_flip_apply(std::span<const Complex> in, std::span<Complex> out,
                          std::span<const std::int32_t> flips, unsigned n_sites, Complex scale)
{
    const auto n = static_cast<std::int64_t>(out.size());
    const Complex* src = in.data();
    Complex* dst = out.data();
    const std::int32_t* table = flips.data();
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (std::int64_t k = 0; k < n; ++k) {
        detail::flip_apply_at(src, dst, table, n_sites, scale, static_cast<std::size_t>(k));
    }
}

void accumulate(std::span<Complex> acc, std::span<const Complex> in)
{
    const auto n = static_cast<std::int64_t>(acc.size());
    Complex* a = acc.data();
    const Complex* b = in.data();
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (std::int64_t k = 0; k < n; ++k) a[k] += b[k];
}

}  // namespace stuckelberg::kernels::omp
