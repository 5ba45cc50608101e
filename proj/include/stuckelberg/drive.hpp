#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

namespace stuckelberg {

struct Ramp {
    double rise = 0.05;  // us
    double fall = 0.05;  // us
};

/// Delta(t) = delta0 cos(omega t); Omega(t) = omega0 for r = 0, otherwise
/// (omega0 / 2)[1 + cos(r omega t)]. With half_cycle set the detuning is
/// frozen at -delta0 after T/2. Units are rad/us and us.
struct DriveProtocol {
    double delta0 = 20.0;
    double omega0 = 2.0;
    double omega = 3.0;
    unsigned r = 0;
    bool half_cycle = false;
    std::optional<Ramp> ramp;

    double period() const;
    void validate() const;
};

double delta_at(const DriveProtocol& p, double t);
double omega_at(const DriveProtocol& p, double t);

/// Accumulated detuning phase (delta0 / omega) sin(omega t) of the ideal drive.
double detuning_phase(const DriveProtocol& p, double t);

/// Piecewise-constant samples on a uniform grid, taken at interval midpoints.
struct Schedule {
    std::vector<double> breakpoints;
    std::vector<double> delta_values;
    std::vector<double> omega_values;

    std::size_t steps() const { return delta_values.size(); }
    double step_size(std::size_t k) const { return breakpoints[k + 1] - breakpoints[k]; }
};

Schedule discretize(const DriveProtocol& p, double t_end, std::size_t steps);

/// Piecewise-linear waveform pair sampled on the hardware time grid.
struct Waveform {
    std::vector<double> t;
    std::vector<double> delta;
    std::vector<double> omega;
    /// (rise + fall) * omega / pi; see export_hardware_waveform.
    double ramp_fraction = 0.0;
    bool ramp_warning = false;
};

inline constexpr double kHardwareResolution = 0.05;  // us
inline constexpr double kRampFractionLimit = 0.1;

/// Samples one drive window (one period; the half-cycle variant holds the
/// detuning after T/2) on a grid of the given resolution. With a ramp, Omega
/// climbs linearly from 0 to Omega(0) before the window and falls back to 0
/// after it while the detuning holds its edge value. The ramp fraction uses
/// the total overhead rise + fall as tau_ramp in tau_ramp * omega / pi and
/// is flagged above kRampFractionLimit.
Waveform export_hardware_waveform(const DriveProtocol& p, double resolution = kHardwareResolution,
                                  std::size_t cycles = 1);

void write_waveform_csv(std::ostream& out, const Waveform& w);

}  // namespace stuckelberg
