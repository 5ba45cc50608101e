#include "stuckelberg/drive.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace stuckelberg {

double DriveProtocol::period() const { return 2.0 * std::numbers::pi / omega; }

void DriveProtocol::validate() const
{
    if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("drive: omega must be positive");
    if (!(omega0 >= 0.0) || !std::isfinite(omega0)) throw std::invalid_argument("drive: omega0 must be >= 0");
    if (!std::isfinite(delta0)) throw std::invalid_argument("drive: delta0 must be finite");
    if (ramp && (ramp->rise < 0.0 || ramp->fall < 0.0)) {
        throw std::invalid_argument("drive: ramp durations must be >= 0");
    }
}

double delta_at(const DriveProtocol& p, double t)
{
    if (p.half_cycle && t > 0.5 * p.period()) return -p.delta0;
    return p.delta0 * std::cos(p.omega * t);
}

double omega_at(const DriveProtocol& p, double t)
{
    if (p.r == 0) return p.omega0;
    const double value = 0.5 * p.omega0 * (1.0 + std::cos(p.r * p.omega * t));
    return std::max(value, 0.0);
}

double detuning_phase(const DriveProtocol& p, double t)
{
    return p.delta0 / p.omega * std::sin(p.omega * t);
}

Schedule discretize(const DriveProtocol& p, double t_end, std::size_t steps)
{
    p.validate();
    if (steps < 1) throw std::invalid_argument("discretize: steps must be >= 1");
    if (!(t_end > 0.0)) throw std::invalid_argument("discretize: t_end must be positive");

    Schedule s;
    s.breakpoints.resize(steps + 1);
    s.delta_values.resize(steps);
    s.omega_values.resize(steps);
    const double h = t_end / static_cast<double>(steps);
    for (std::size_t k = 0; k <= steps; ++k) s.breakpoints[k] = static_cast<double>(k) * h;
    s.breakpoints[steps] = t_end;
    for (std::size_t k = 0; k < steps; ++k) {
        const double mid = (static_cast<double>(k) + 0.5) * h;
        s.delta_values[k] = delta_at(p, mid);
        s.omega_values[k] = omega_at(p, mid);
    }
    return s;
}

Waveform export_hardware_waveform(const DriveProtocol& p, double resolution, std::size_t cycles)
{
    p.validate();
    if (!(resolution > 0.0)) throw std::invalid_argument("waveform: resolution must be positive");
    if (cycles < 1) throw std::invalid_argument("waveform: cycles must be >= 1");

    Waveform w;
    const double window = static_cast<double>(cycles) * p.period();
    const double rise = p.ramp ? p.ramp->rise : 0.0;
    const double fall = p.ramp ? p.ramp->fall : 0.0;
    const double total = rise + window + fall;

    const auto n_intervals = static_cast<std::size_t>(std::ceil(total / resolution - 1e-9));
    w.t.reserve(n_intervals + 1);
    for (std::size_t k = 0; k <= n_intervals; ++k) {
        w.t.push_back(std::min(static_cast<double>(k) * resolution, total));
    }
    // Segment edges are kept as exact breakpoints so the ramps start and end
    // where they should even when they are not multiples of the resolution.
    for (double edge : {rise, rise + window}) {
        if (edge > 0.0 && edge < total &&
            std::none_of(w.t.begin(), w.t.end(), [edge](double t) { return std::abs(t - edge) < 1e-12; })) {
            w.t.insert(std::upper_bound(w.t.begin(), w.t.end(), edge), edge);
        }
    }

    const double delta_start = delta_at(p, 0.0);
    const double delta_end = delta_at(p, window);
    const double omega_start = omega_at(p, 0.0);
    const double omega_end = omega_at(p, window);
    for (double t : w.t) {
        double delta = 0.0;
        double omega = 0.0;
        if (t < rise) {
            delta = delta_start;
            omega = omega_start * t / rise;
        } else if (t <= rise + window + 1e-12) {
            const double local = std::min(t - rise, window);
            delta = delta_at(p, local);
            omega = omega_at(p, local);
        } else {
            delta = delta_end;
            omega = fall > 0.0 ? omega_end * (total - t) / fall : omega_end;
        }
        w.delta.push_back(delta);
        w.omega.push_back(std::max(omega, 0.0));
    }
    if (p.ramp) {
        w.omega.front() = 0.0;
        w.omega.back() = 0.0;
    }

    w.ramp_fraction = (rise + fall) * p.omega / std::numbers::pi;
    w.ramp_warning = w.ramp_fraction > kRampFractionLimit;
    return w;
}

void write_waveform_csv(std::ostream& out, const Waveform& w)
{
    const auto precision = out.precision();
    out << "t_us,delta_rad_per_us,omega_rad_per_us\n" << std::setprecision(17);
    for (std::size_t k = 0; k < w.t.size(); ++k) {
        out << w.t[k] << ',' << w.delta[k] << ',' << w.omega[k] << '\n';
    }
    out.precision(precision);
}

}  // namespace stuckelberg
