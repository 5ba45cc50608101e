#include "stuckelberg/floquet.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stuckelberg/bessel.hpp"
#include "stuckelberg/drive.hpp"
#include "stuckelberg/evolve.hpp"

namespace stuckelberg {

namespace {

using Complex = std::complex<double>;

double bisect_j0(double lo, double hi)
{
    double f_lo = bessel_jn(0, lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = bessel_jn(0, mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// sin(a) / a, with the series near 0.
double sinc(double a)
{
    if (std::abs(a) < 1e-4) return 1.0 - a * a / 6.0 + a * a * a * a / 120.0;
    return std::sin(a) / a;
}

// Bound on sum_{|n| > N} |J_n(x)| / |n| from |J_n(x)| <= (|x|/2)^n / n!.
double second_order_tail(double x, std::size_t n)
{
    const double half = std::abs(x) / 2.0;
    const double next = static_cast<double>(n + 1);
    if (half >= next + 1.0) return std::numeric_limits<double>::infinity();
    const double log_term = next * std::log(std::max(half, 1e-300)) - std::lgamma(next + 1.0);
    return 2.0 / next * std::exp(log_term) / (1.0 - half / (next + 1.0));
}

}  // namespace

std::vector<Coupling> retained_couplings(const AtomArray& array, double c6)
{
    const auto classes = distance_classes(array, 1);
    const double blockaded = classes.empty() ? 0.0 : classes.front() + kDistanceClassTolerance;
    std::vector<Coupling> out;
    for (std::size_t i = 0; i < array.size(); ++i) {
        for (std::size_t j = i + 1; j < array.size(); ++j) {
            const double r = array.distance(i, j);
            if (r <= blockaded) continue;
            out.push_back({i, j, c6 / std::pow(r, 6)});
        }
    }
    return out;
}

std::vector<double> bessel_j0_zeros(double x_max)
{
    std::vector<double> zeros;
    constexpr double kScan = 0.05;
    double lo = 0.0;
    double f_lo = 1.0;
    while (lo < x_max) {
        const double hi = std::min(lo + kScan, x_max);
        const double f_hi = bessel_jn(0, hi);
        if (f_hi == 0.0) {
            zeros.push_back(hi);
        } else if ((f_lo < 0.0) != (f_hi < 0.0) && f_lo != 0.0) {
            zeros.push_back(bisect_j0(lo, hi));
        }
        lo = hi;
        f_lo = f_hi;
    }
    return zeros;
}

std::vector<double> predict_freezing_frequencies(double delta0, double omega_lo, double omega_hi)
{
    if (!(omega_lo > 0.0) || !(omega_hi > omega_lo)) {
        throw std::invalid_argument("predict: need 0 < omega_min < omega_max");
    }
    const double a = std::abs(delta0);
    if (a == 0.0) return {};
    const double x_hi = a / omega_lo;
    if (x_hi > kBesselMaxArgument) throw std::domain_error("predict: delta0 / omega_min outside the Bessel envelope");

    std::vector<double> out;
    for (double z : bessel_j0_zeros(x_hi * (1.0 + 1e-12) + 1e-12)) {
        const double w = a / z;
        if (w >= omega_lo && w <= omega_hi) out.push_back(w);
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

FptFirstOrder fpt_first_order(double delta0, double omega0, double omega, unsigned r, std::vector<Coupling> interactions)
{
    if (!(omega > 0.0)) throw std::invalid_argument("fpt: omega must be positive");
    const double x = delta0 / omega;
    FptFirstOrder out;
    const auto j = bessel_jn_sequence(static_cast<int>(r), x);
    if (r == 0) {
        out.kinetic_coefficient = omega0 * j[0];
    } else {
        // J_-r = (-1)^r J_r: the two sidebands of cos(r omega t) add for even
        // r and cancel for odd r.
        const double sideband = (r % 2 == 0) ? j[r] : 0.0;
        out.kinetic_coefficient = 0.5 * omega0 * (j[0] + sideband);
    }
    out.interaction_terms = std::move(interactions);
    return out;
}

FptSecondOrder fpt_second_order(double delta0, double omega0, double omega, const std::vector<Coupling>& interactions,
                                std::optional<std::size_t> n_max)
{
    if (!(omega > 0.0)) throw std::invalid_argument("fpt: omega must be positive");
    const double x = delta0 / omega;
    FptSecondOrder out;
    if (n_max) {
        out.n_max = *n_max;
    } else {
        out.n_max = 20;
        while (second_order_tail(x, out.n_max) > 1e-15 && out.n_max < kBesselMaxOrder) out.n_max += 10;
    }
    if (out.n_max < 1 || out.n_max > static_cast<std::size_t>(kBesselMaxOrder)) {
        throw std::invalid_argument("fpt: n_max must lie in [1, 200]");
    }
    out.tail_bound = second_order_tail(x, out.n_max);

    // J_-n / (-n) = J_n / n for odd n; even orders cancel pairwise.
    const auto j = bessel_jn_sequence(static_cast<int>(out.n_max), x);
    double sum = 0.0;
    for (std::size_t n = 1; n <= out.n_max; n += 2) sum += 2.0 * j[n] / static_cast<double>(n);
    out.bessel_sum = sum;

    for (const auto& c : interactions) {
        if (c.value == 0.0) continue;
        const double coefficient = omega0 * sum * c.value / omega;
        out.terms.push_back({c.i, c.j, c.offset(), coefficient});
        out.terms.push_back({c.j, c.i, c.offset(), coefficient});
    }
    return out;
}

ResonanceAmplitude fock_resonance_amplitude(double V, double delta0, double omega0, double omega, std::size_t n_max)
{
    if (!(omega > 0.0)) throw std::invalid_argument("resonance: omega must be positive");
    if (n_max < 1 || n_max > static_cast<std::size_t>(kBesselMaxOrder)) {
        throw std::invalid_argument("resonance: n_max must lie in [1, 200]");
    }
    const double period = 2.0 * std::numbers::pi / omega;
    const double x = delta0 / omega;
    const auto j = bessel_jn_sequence(static_cast<int>(n_max), x);

    ResonanceAmplitude out;
    out.n_max = n_max;
    out.contributions.resize(2 * n_max + 1);
    const auto nm = static_cast<long>(n_max);
    for (long n = -nm; n <= nm; ++n) {
        const auto m = static_cast<std::size_t>(std::abs(n));
        const double jn = (n < 0 && m % 2 == 1) ? -j[m] : j[m];
        // 2 sin(b T / 2) / b = T sinc(b T / 2)
        const double half_phase = (V - static_cast<double>(n) * omega) * period / 2.0;
        const Complex term = omega0 * period * jn * sinc(half_phase) * std::polar(1.0, -half_phase);
        out.contributions[static_cast<std::size_t>(n + nm)] = term;
    }
    // Sum from the smallest terms inward.
    Complex total{0.0, 0.0};
    for (long n = nm; n >= 1; --n) {
        total += out.contributions[static_cast<std::size_t>(n + nm)];
        total += out.contributions[static_cast<std::size_t>(-n + nm)];
    }
    total += out.contributions[n_max];
    out.value = total;
    return out;
}

FockCheckReport three_site_fock_check(double V, double delta0, double omega0, double omega, std::size_t steps)
{
    if (!(omega > 0.0)) throw std::invalid_argument("fock check: omega must be positive");
    constexpr std::size_t kDim = 5;  // 000, 001, 010, 100, 101
    constexpr std::array<double, kDim> kOccupancy{0.0, 1.0, 1.0, 1.0, 2.0};
    // Flip connections inside the blockade subspace.
    constexpr std::array<std::pair<std::size_t, std::size_t>, 5> kLinks{
        {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {3, 4}}};

    DriveProtocol p;
    p.delta0 = delta0;
    p.omega0 = omega0;
    p.omega = omega;
    const double period = p.period();

    // Detuning enters as +Delta(t) n here, as in the perturbative split.
    const DenseBuilder build = [&](double delta, double rabi, std::span<double> m) {
        for (std::size_t a = 0; a < kDim; ++a) m[a * kDim + a] = delta * kOccupancy[a];
        m[4 * kDim + 4] += V;
        for (auto [a, b] : kLinks) {
            m[a * kDim + b] = 0.5 * rabi;
            m[b * kDim + a] = 0.5 * rabi;
        }
    };
    std::vector<Complex> psi(kDim);
    psi[0] = 1.0;
    propagate_dense(kDim, discretize(p, period, steps), build, psi);

    auto density = [&](const auto& amplitudes) {
        double n = 0.0;
        for (std::size_t a = 0; a < kDim; ++a) n += std::norm(amplitudes[a]) * kOccupancy[a];
        return n / 3.0;
    };

    FockCheckReport report;
    report.simulated_density = density(psi);

    const double j0 = bessel_jn(0, delta0 / omega);
    const auto resonance = fock_resonance_amplitude(V, delta0, omega0, omega);
    report.resonance_amplitude = resonance.value;
    report.j0_channel = 0.5 * omega0 * period * std::abs(j0);
    report.resonance_channel = 0.5 * std::abs(resonance.value);

    // U_1 = -i M with M the period integral of the interaction-picture
    // hopping; the first-order propagator is exp(-i M).
    Eigen::Matrix<Complex, kDim, kDim> m = Eigen::Matrix<Complex, kDim, kDim>::Zero();
    for (std::size_t s = 1; s <= 3; ++s) {
        m(0, static_cast<Eigen::Index>(s)) = 0.5 * omega0 * period * j0;
        m(static_cast<Eigen::Index>(s), 0) = 0.5 * omega0 * period * j0;
    }
    const Complex hop = 0.5 * resonance.value;  // <101| M |001>
    for (Eigen::Index s : {1, 3}) {
        m(4, s) = hop;
        m(s, 4) = std::conj(hop);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Complex, kDim, kDim>> solver(m);
    Eigen::Matrix<Complex, kDim, 1> phases;
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(kDim); ++k) {
        phases[k] = std::polar(1.0, -solver.eigenvalues()[k]);
    }
    const auto& vectors = solver.eigenvectors();
    const Eigen::Matrix<Complex, kDim, 1> predicted =
        vectors * phases.asDiagonal() * vectors.adjoint() * Eigen::Matrix<Complex, kDim, 1>::Unit(0);
    std::array<Complex, kDim> predicted_amplitudes{};
    for (std::size_t a = 0; a < kDim; ++a) predicted_amplitudes[a] = predicted[static_cast<Eigen::Index>(a)];
    report.predicted_density = density(predicted_amplitudes);
    report.discrepancy = report.simulated_density - report.predicted_density;
    return report;
}

}  // namespace stuckelberg
