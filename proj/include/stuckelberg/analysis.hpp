#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "stuckelberg/drive.hpp"
#include "stuckelberg/evolve.hpp"
#include "stuckelberg/hamiltonian.hpp"

namespace stuckelberg {

inline constexpr double kSweepOmegaMin = 1.2;
inline constexpr double kSweepOmegaMax = 4.5;
inline constexpr double kDefaultDepthThreshold = 0.2;

struct SweepMetadata {
    std::string model;
    std::string geometry;
    std::size_t sites = 0;
    std::size_t basis_dimension = 0;
    double delta0 = 0.0;
    double omega0 = 0.0;
    unsigned r = 0;
    bool half_cycle = false;
    std::size_t steps_per_cycle = 0;
    std::size_t cycles = 0;
};

enum class PointStatus { ok, failed };

/// n(T) over an ascending drive-frequency grid. Failed points carry NaN.
struct SweepResult {
    std::vector<double> omega_grid;
    std::vector<double> n_final;
    std::vector<PointStatus> status;
    std::vector<std::string> errors;
    SweepMetadata metadata;

    std::size_t size() const { return omega_grid.size(); }
};

/// `points` equally spaced frequencies from lo to hi inclusive.
std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

struct SweepSpec {
    DriveProtocol protocol;  // omega is overwritten per grid point
    std::vector<double> omega_grid;
    TrotterOptions integrator;
    std::size_t jobs = 1;
    /// Permit grid points outside [1.2, 4.5] rad/us.
    bool extended_range = false;
};

/// One trotter_cycle per grid frequency from the vacuum. Points run in
/// parallel when jobs > 1; output does not depend on jobs.
SweepResult frequency_sweep(const RydbergHamiltonian& hamiltonian, const SweepSpec& spec, SweepMetadata metadata = {});

void write_sweep_csv(std::ostream& out, const SweepResult& sweep);
SweepResult read_sweep_csv(std::istream& in);

struct FringeExtremum {
    double omega = 0.0;
    double n = 0.0;
};

struct Fringe {
    std::size_t index = 0;            // grid index of the sampled minimum
    FringeExtremum sampled;           // grid point
    FringeExtremum refined;           // parabolic vertex through the 3-point neighbourhood
    FringeExtremum left_max;
    FringeExtremum right_max;
    double prominence = 0.0;          // lower flank - n_min
    double local_range = 0.0;         // higher flank - n_min
    double visibility = 0.0;          // against the higher flank
};

struct FringeReport {
    std::vector<Fringe> minima;    // qualifying
    std::vector<Fringe> rejected;  // strict local minima failing the depth test
    double depth_threshold = kDefaultDepthThreshold;
};

/// Strict interior local minima of the ok points. Flanking maxima are found
/// by climbing monotonically away from the minimum; a minimum qualifies when
/// its prominence reaches depth_threshold times the local range.
FringeReport find_minima(const SweepResult& sweep, double depth_threshold = kDefaultDepthThreshold);

/// (n_max - n_min) / (n_max + n_min).
double visibility(double n_max, double n_min);

/// Linear detection-error model: eps_g false ground, eps_r false Rydberg.
struct SpamModel {
    double eps_g = 0.01;
    double eps_r = 0.08;

    void validate() const;
};

struct SpamCorrected {
    double value = 0.0;
    /// Set when the corrected density is negative beyond rounding.
    bool miscalibrated = false;
};

double spam_apply(double n_true, const SpamModel& spam);
SpamCorrected spam_correct(double n_measured, const SpamModel& spam);

struct UnmatchedMinimum {
    std::size_t present_in = 0;
    std::size_t absent_in = 0;
    Fringe fringe;
};

struct ModelComparison {
    std::vector<double> omega_grid;
    /// differences[m][k] = n_m(omega_k) - n_0(omega_k)
    std::vector<std::vector<double>> differences;
    std::vector<double> max_abs_difference;
    std::vector<FringeReport> fringes;
    std::vector<UnmatchedMinimum> unmatched;
};

/// Minima of one sweep without a qualifying minimum of another within
/// match_tolerance (rad/us) are listed as unmatched.
ModelComparison compare_models(const std::vector<SweepResult>& sweeps, double depth_threshold = kDefaultDepthThreshold,
                               double match_tolerance = 0.15);

}  // namespace stuckelberg
