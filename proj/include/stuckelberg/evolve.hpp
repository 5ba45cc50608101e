#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "stuckelberg/drive.hpp"
#include "stuckelberg/hamiltonian.hpp"

namespace stuckelberg {

inline constexpr std::size_t kDefaultStepsPerCycle = 400;
inline constexpr double kNormDriftLimit = 1e-6;
inline constexpr double kDefaultSplittingPhase = 0.5;

/// Raised when the state norm drifts beyond kNormDriftLimit.
class NormDriftError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TrotterOptions {
    std::size_t steps_per_cycle = kDefaultStepsPerCycle;
    std::size_t cycles = 1;
    /// Densities are recorded at t = 0 and at n_samples uniform times ending at
    /// the final time; 1 gives the final-time-only mode used by sweeps.
    std::size_t n_samples = 1;
    Backend backend = Backend::openmp;
    /// Bound on the truncation error of each constrained kinetic exponential.
    /// Kept far below 1e-8 so that the accumulated drift over a cycle stays
    /// under the 1e-9 unitarity budget.
    double kinetic_tolerance = 1e-14;
    /// Each schedule interval is split into the same number of equal Strang
    /// substeps, chosen so that (T / 400) * max V_ij / substeps stays below
    /// this phase (rad). The count depends on the period only, so the
    /// substep shrinks with the schedule step. 0 keeps one Strang step per
    /// interval.
    double splitting_phase = kDefaultSplittingPhase;
};

/// Strang substeps per schedule interval for a drive of the given period.
std::size_t splitting_substeps(const RydbergHamiltonian& hamiltonian, double period, const TrotterOptions& options);

struct EvolutionResult {
    std::vector<double> sample_times;
    std::vector<double> mean_density;
    std::vector<std::vector<double>> site_density;
    QuantumState final_state;
    double max_norm_drift = 0.0;
    /// Sum over steps of the certified kinetic truncation bounds (0 when the
    /// kinetic exponential is exact).
    double kinetic_error_bound = 0.0;

    double final_density() const { return mean_density.back(); }
};

/// Strang-split evolution: each step applies exp(-i h/2 H_diag),
/// exp(-i h H_kin), exp(-i h/2 H_diag) with (Delta, Omega) sampled at the
/// interval midpoint. Stiff couplings split an interval into several such
/// steps with the same controls.
EvolutionResult trotter_cycle(const RydbergHamiltonian& hamiltonian, const DriveProtocol& protocol,
                              const QuantumState& initial, const TrotterOptions& options = {});

inline constexpr std::size_t kOracleMaxDimension = 4096;

/// Exact exponentials of the piecewise-constant Hamiltonian on the same
/// midpoint schedule, by a Taylor series with a remainder bound below 1e-16
/// per substep. The matrix is assembled directly from the basis and
/// couplings, independently of the flip tables used by trotter_cycle.
EvolutionResult oracle_cycle(const RydbergHamiltonian& hamiltonian, const DriveProtocol& protocol,
                             const QuantumState& initial, std::size_t steps_per_cycle = kDefaultStepsPerCycle,
                             std::size_t cycles = 1, std::size_t n_samples = 1);

/// Fills a row-major real symmetric dim x dim matrix for the given controls.
using DenseBuilder = std::function<void(double delta, double omega, std::span<double> matrix)>;

/// Propagates `state` in place through every interval of the schedule with
/// exact exponentials of the matrices produced by `build`.
void propagate_dense(std::size_t dim, const Schedule& schedule, const DenseBuilder& build,
                     std::span<Complex> state);

/// Sample step indices shared by both integrators: 0 and round-down of
/// k * total_steps / n_samples for k = 1..n_samples.
std::vector<std::size_t> sample_steps(std::size_t total_steps, std::size_t n_samples);

}  // namespace stuckelberg
