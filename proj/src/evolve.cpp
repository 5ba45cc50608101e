#include "stuckelberg/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "evolve_internal.hpp"

namespace stuckelberg {

namespace {

// Truncation order and substep count for exp(-i tau A) psi with ||A|| <= norm.
struct TaylorPlan {
    std::size_t substeps = 1;
    std::size_t order = 1;
    double bound = 0.0;  // total remainder bound over all substeps
};

// Remainder of the order-K Taylor polynomial of exp(z), |z| <= y < K + 2:
// sum_{k>K} y^k / k! <= y^(K+1) / (K+1)! / (1 - y / (K + 2)).
double taylor_remainder(double y, std::size_t order)
{
    double term = 1.0;
    for (std::size_t k = 1; k <= order + 1; ++k) term *= y / static_cast<double>(k);
    return term / (1.0 - y / static_cast<double>(order + 2));
}

TaylorPlan plan_taylor(double h, double norm, double tolerance)
{
    constexpr double kMaxSubstepExponent = 0.5;
    TaylorPlan plan;
    const double x = h * norm;
    plan.substeps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(x / kMaxSubstepExponent)));
    const double y = x / static_cast<double>(plan.substeps);
    const double per_substep = tolerance / static_cast<double>(plan.substeps);
    plan.order = 1;
    while (taylor_remainder(y, plan.order) > per_substep && plan.order < 60) ++plan.order;
    plan.bound = static_cast<double>(plan.substeps) * taylor_remainder(y, plan.order);
    return plan;
}

}  // namespace

std::size_t splitting_substeps(const RydbergHamiltonian& hamiltonian, double period, const TrotterOptions& options)
{
    if (options.splitting_phase <= 0.0 || !hamiltonian.model().interactions) return 1;
    const auto& v = hamiltonian.model().interactions->values;
    const double stiffest = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
    const double reference_step = period / static_cast<double>(kDefaultStepsPerCycle);
    return std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(reference_step * stiffest / options.splitting_phase)));
}

std::vector<std::size_t> sample_steps(std::size_t total_steps, std::size_t n_samples)
{
    if (n_samples < 1 || n_samples > total_steps) {
        throw std::invalid_argument("evolve: n_samples must lie in [1, total steps]");
    }
    std::vector<std::size_t> steps{0};
    for (std::size_t k = 1; k <= n_samples; ++k) steps.push_back(k * total_steps / n_samples);
    return steps;
}

namespace detail {

void check_evolution_inputs(const RydbergHamiltonian& hamiltonian, const DriveProtocol& protocol,
                            const QuantumState& initial, std::size_t steps_per_cycle, std::size_t cycles)
{
    protocol.validate();
    if (cycles < 1) throw std::invalid_argument("evolve: cycles must be >= 1");
    if (steps_per_cycle < 1) throw std::invalid_argument("evolve: steps_per_cycle must be >= 1");
    if (initial.amplitudes.size() != hamiltonian.dimension()) {
        throw std::invalid_argument("evolve: initial state does not match the model basis");
    }
    if (std::abs(initial.norm() - 1.0) > 1e-9) throw std::invalid_argument("evolve: initial state is not normalized");
}

void record_sample(EvolutionResult& result, const QuantumState& state, double t)
{
    const double drift = std::abs(state.norm() - 1.0);
    result.max_norm_drift = std::max(result.max_norm_drift, drift);
    if (drift > kNormDriftLimit) {
        throw NormDriftError("evolve: norm drifted by " + std::to_string(drift) + " at t=" + std::to_string(t));
    }
    auto profile = rydberg_density(state);
    result.sample_times.push_back(t);
    result.mean_density.push_back(profile.mean);
    result.site_density.push_back(std::move(profile.site));
}

}  // namespace detail

EvolutionResult trotter_cycle(const RydbergHamiltonian& hamiltonian, const DriveProtocol& protocol,
                              const QuantumState& initial, const TrotterOptions& options)
{
    if (options.steps_per_cycle < 2) throw std::invalid_argument("trotter: steps_per_cycle must be >= 2");
    detail::check_evolution_inputs(hamiltonian, protocol, initial, options.steps_per_cycle, options.cycles);

    const std::size_t total = options.steps_per_cycle * options.cycles;
    const double t_end = static_cast<double>(options.cycles) * protocol.period();
    const Schedule schedule = discretize(protocol, t_end, total);
    const auto samples = sample_steps(total, options.n_samples);
    const auto splits = splitting_substeps(hamiltonian, protocol.period(), options);
    const double h = t_end / static_cast<double>(total * splits);
    const auto dim = hamiltonian.dimension();
    const auto n_sites = static_cast<unsigned>(hamiltonian.sites());
    const Backend backend = options.backend;

    // exp(-i tau (-delta N + E)) = exp(-i tau E) * exp(+i tau delta N), for the
    // outer half substeps and the merged full substeps between kinetic factors.
    std::vector<Complex> static_half(dim);
    std::vector<Complex> static_full(dim);
    const auto energies = hamiltonian.interaction_energies();
    for (std::size_t k = 0; k < dim; ++k) {
        static_half[k] = std::polar(1.0, -0.5 * h * energies[k]);
        static_full[k] = std::polar(1.0, -h * energies[k]);
    }
    std::vector<Complex> occupation_half(n_sites + 1);
    std::vector<Complex> occupation_full(n_sites + 1);

    EvolutionResult result;
    QuantumState state = initial;
    std::span<Complex> psi(state.amplitudes);
    std::vector<Complex> term;
    std::vector<Complex> next;
    std::vector<Complex> acc;
    if (!hamiltonian.factorized_kinetic()) {
        term.resize(dim);
        next.resize(dim);
        acc.resize(dim);
    }

    auto kinetic = [&](double rabi) {
        if (rabi == 0.0) return;
        if (hamiltonian.factorized_kinetic()) {
            for (unsigned s = 0; s < n_sites; ++s) kernels::rotate_site(backend, psi, s, 0.5 * h * rabi);
            return;
        }
        const double norm = 0.5 * rabi * hamiltonian.max_flips();
        const auto plan = plan_taylor(h, norm, options.kinetic_tolerance);
        result.kinetic_error_bound += plan.bound;
        const double tau = h / static_cast<double>(plan.substeps);
        for (std::size_t sub = 0; sub < plan.substeps; ++sub) {
            std::copy(psi.begin(), psi.end(), term.begin());
            std::copy(psi.begin(), psi.end(), acc.begin());
            for (std::size_t k = 1; k <= plan.order; ++k) {
                const Complex scale(0.0, -0.5 * tau * rabi / static_cast<double>(k));
                kernels::projected_flip_apply(backend, term, next, hamiltonian.flip_table(), n_sites, scale);
                kernels::accumulate(backend, acc, next);
                term.swap(next);
            }
            std::copy(acc.begin(), acc.end(), psi.begin());
        }
    };

    detail::record_sample(result, state, 0.0);
    std::size_t next_sample = 1;
    for (std::size_t step = 0; step < total; ++step) {
        const double delta = schedule.delta_values[step];
        const double rabi = schedule.omega_values[step];
        for (unsigned m = 0; m <= n_sites; ++m) {
            occupation_half[m] = std::polar(1.0, 0.5 * h * delta * m);
            occupation_full[m] = std::polar(1.0, h * delta * m);
        }

        // splits Strang substeps with adjacent diagonal halves merged.
        kernels::apply_diagonal_phase(backend, psi, static_half, hamiltonian.occupations(), occupation_half);
        for (std::size_t sub = 0; sub < splits; ++sub) {
            kinetic(rabi);
            if (sub + 1 < splits) {
                kernels::apply_diagonal_phase(backend, psi, static_full, hamiltonian.occupations(), occupation_full);
            }
        }
        kernels::apply_diagonal_phase(backend, psi, static_half, hamiltonian.occupations(), occupation_half);

        if (next_sample < samples.size() && step + 1 == samples[next_sample]) {
            detail::record_sample(result, state, schedule.breakpoints[step + 1]);
            ++next_sample;
        }
    }
    result.final_state = std::move(state);
    return result;
}

}  // namespace stuckelberg
