#include "stuckelberg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace stuckelberg {

namespace {

constexpr double kSpamClamp = 1e-12;

std::string_view to_string(PointStatus s) { return s == PointStatus::ok ? "ok" : "failed"; }

// Vertex of the parabola through three points, kept inside [x0, x2].
FringeExtremum parabolic_vertex(double x0, double y0, double x1, double y1, double x2, double y2)
{
    const double d0 = (y1 - y0) / (x1 - x0);
    const double d1 = (y2 - y1) / (x2 - x1);
    const double curvature = (d1 - d0) / (x2 - x0);  // leading coefficient
    if (!(curvature > 0.0)) return {x1, y1};
    // y = y1 + b (x - x1) + a (x - x1)(x - x0) ... use Newton form around x0, x1.
    const double a = curvature;
    const double b = d0;  // slope of the secant x0-x1
    // y(x) = y0 + b (x - x0) + a (x - x0)(x - x1)
    double xv = 0.5 * (x0 + x1) - b / (2.0 * a);
    xv = std::clamp(xv, x0, x2);
    const double yv = y0 + b * (xv - x0) + a * (xv - x0) * (xv - x1);
    return {xv, std::min(yv, y1)};
}

}  // namespace

std::vector<double> uniform_grid(double lo, double hi, std::size_t points)
{
    if (points < 2 || !(hi > lo)) throw std::invalid_argument("grid: need at least 2 points and hi > lo");
    std::vector<double> grid(points);
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k) grid[k] = lo + static_cast<double>(k) * step;
    grid.back() = hi;
    return grid;
}

SweepResult frequency_sweep(const RydbergHamiltonian& hamiltonian, const SweepSpec& spec, SweepMetadata metadata)
{
    const auto& grid = spec.omega_grid;
    if (grid.empty()) throw std::invalid_argument("sweep: empty frequency grid");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(grid[k] > 0.0)) throw std::invalid_argument("sweep: frequencies must be positive");
        if (k > 0 && !(grid[k] > grid[k - 1])) throw std::invalid_argument("sweep: grid must be strictly ascending");
        if (!spec.extended_range && (grid[k] < kSweepOmegaMin - 1e-12 || grid[k] > kSweepOmegaMax + 1e-12)) {
            throw std::invalid_argument("sweep: frequency outside [1.2, 4.5] rad/us (enable the extended range)");
        }
    }
    if (spec.jobs < 1) throw std::invalid_argument("sweep: jobs must be >= 1");

    SweepResult result;
    result.omega_grid = grid;
    result.n_final.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
    result.status.assign(grid.size(), PointStatus::failed);
    result.errors.assign(grid.size(), {});

    TrotterOptions options = spec.integrator;
    options.n_samples = 1;
    // Parallelism goes to the grid; the kernels then run their serial path,
    // which yields the same bits.
    if (spec.jobs > 1) options.backend = Backend::serial;

    const auto n_points = static_cast<std::int64_t>(grid.size());
    const QuantumState initial = vacuum_state(hamiltonian.basis_ptr());
#pragma omp parallel for schedule(dynamic, 1) num_threads(static_cast<int>(spec.jobs)) if (spec.jobs > 1)
    for (std::int64_t k = 0; k < n_points; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        DriveProtocol p = spec.protocol;
        p.omega = grid[idx];
        try {
            const auto evolution = trotter_cycle(hamiltonian, p, initial, options);
            result.n_final[idx] = evolution.final_density();
            result.status[idx] = PointStatus::ok;
        } catch (const std::exception& e) {
            result.errors[idx] = e.what();
        }
    }

    metadata.sites = hamiltonian.sites();
    metadata.basis_dimension = hamiltonian.dimension();
    metadata.delta0 = spec.protocol.delta0;
    metadata.omega0 = spec.protocol.omega0;
    metadata.r = spec.protocol.r;
    metadata.half_cycle = spec.protocol.half_cycle;
    metadata.steps_per_cycle = options.steps_per_cycle;
    metadata.cycles = options.cycles;
    result.metadata = std::move(metadata);
    return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep)
{
    const auto precision = out.precision();
    out << "omega_rad_per_us,n_final,status\n" << std::setprecision(17);
    for (std::size_t k = 0; k < sweep.size(); ++k) {
        out << sweep.omega_grid[k] << ',';
        if (sweep.status[k] == PointStatus::ok) out << sweep.n_final[k];
        else out << "nan";
        out << ',' << to_string(sweep.status[k]) << '\n';
    }
    out.precision(precision);
}

SweepResult read_sweep_csv(std::istream& in)
{
    SweepResult sweep;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("sweep csv: empty input");
    if (line.rfind("omega_rad_per_us,n_final", 0) != 0) {
        throw std::invalid_argument("sweep csv: unexpected header '" + line + "'");
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::istringstream fields(line);
        std::string omega;
        std::string n;
        std::string status = "ok";
        if (!std::getline(fields, omega, ',') || !std::getline(fields, n, ',')) {
            throw std::invalid_argument("sweep csv line " + std::to_string(line_no) + ": expected omega,n_final");
        }
        std::getline(fields, status);
        if (!status.empty() && status.back() == '\r') status.pop_back();
        try {
            sweep.omega_grid.push_back(std::stod(omega));
            const bool ok = status == "ok";
            sweep.status.push_back(ok ? PointStatus::ok : PointStatus::failed);
            sweep.n_final.push_back(ok ? std::stod(n) : std::numeric_limits<double>::quiet_NaN());
            sweep.errors.emplace_back();
        } catch (const std::logic_error&) {
            throw std::invalid_argument("sweep csv line " + std::to_string(line_no) + ": malformed number");
        }
    }
    for (std::size_t k = 1; k < sweep.size(); ++k) {
        if (!(sweep.omega_grid[k] > sweep.omega_grid[k - 1])) {
            throw std::invalid_argument("sweep csv: frequencies are not strictly ascending");
        }
    }
    return sweep;
}

FringeReport find_minima(const SweepResult& sweep, double depth_threshold)
{
    if (!(depth_threshold >= 0.0)) throw std::invalid_argument("find_minima: depth threshold must be >= 0");
    FringeReport report;
    report.depth_threshold = depth_threshold;

    std::vector<std::size_t> grid_index;
    std::vector<double> w;
    std::vector<double> n;
    for (std::size_t k = 0; k < sweep.size(); ++k) {
        if (sweep.status[k] != PointStatus::ok) continue;
        grid_index.push_back(k);
        w.push_back(sweep.omega_grid[k]);
        n.push_back(sweep.n_final[k]);
    }
    if (n.size() < 3) return report;

    for (std::size_t i = 1; i + 1 < n.size(); ++i) {
        if (!(n[i] < n[i - 1] && n[i] < n[i + 1])) continue;
        std::size_t left = i;
        while (left > 0 && n[left - 1] >= n[left]) --left;
        std::size_t right = i;
        while (right + 1 < n.size() && n[right + 1] >= n[right]) ++right;

        Fringe f;
        f.index = grid_index[i];
        f.sampled = {w[i], n[i]};
        f.refined = parabolic_vertex(w[i - 1], n[i - 1], w[i], n[i], w[i + 1], n[i + 1]);
        f.left_max = {w[left], n[left]};
        f.right_max = {w[right], n[right]};
        const double low_flank = std::min(n[left], n[right]);
        const double high_flank = std::max(n[left], n[right]);
        f.prominence = low_flank - n[i];
        f.local_range = high_flank - n[i];
        f.visibility = visibility(high_flank, std::max(n[i], 0.0));
        if (f.prominence >= depth_threshold * f.local_range) report.minima.push_back(f);
        else report.rejected.push_back(f);
    }
    return report;
}

double visibility(double n_max, double n_min)
{
    if (!(n_min >= 0.0) || !(n_max >= n_min)) throw std::invalid_argument("visibility: need n_max >= n_min >= 0");
    if (!(n_max > 0.0)) throw std::invalid_argument("visibility: undefined for n_max = n_min = 0");
    return (n_max - n_min) / (n_max + n_min);
}

void SpamModel::validate() const
{
    if (!(eps_g >= 0.0) || !(eps_r >= 0.0) || !(eps_g + eps_r < 1.0)) {
        throw std::invalid_argument("spam: need eps_g, eps_r >= 0 and eps_g + eps_r < 1");
    }
}

double spam_apply(double n_true, const SpamModel& spam)
{
    spam.validate();
    return n_true * (1.0 - spam.eps_g - spam.eps_r) + spam.eps_g;
}

SpamCorrected spam_correct(double n_measured, const SpamModel& spam)
{
    spam.validate();
    SpamCorrected out;
    out.value = (n_measured - spam.eps_g) / (1.0 - spam.eps_g - spam.eps_r);
    if (out.value < 0.0) {
        if (out.value > -kSpamClamp) out.value = 0.0;
        else out.miscalibrated = true;
    }
    return out;
}

ModelComparison compare_models(const std::vector<SweepResult>& sweeps, double depth_threshold, double match_tolerance)
{
    if (sweeps.empty()) throw std::invalid_argument("compare: no sweeps given");
    const auto& grid = sweeps.front().omega_grid;
    for (std::size_t m = 1; m < sweeps.size(); ++m) {
        if (sweeps[m].omega_grid != grid) {
            throw std::invalid_argument("compare: sweep " + std::to_string(m) + " uses a different frequency grid");
        }
    }

    ModelComparison out;
    out.omega_grid = grid;
    for (const auto& s : sweeps) {
        std::vector<double> diff(grid.size());
        double worst = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            diff[k] = s.n_final[k] - sweeps.front().n_final[k];
            if (std::isfinite(diff[k])) worst = std::max(worst, std::abs(diff[k]));
        }
        out.differences.push_back(std::move(diff));
        out.max_abs_difference.push_back(worst);
        out.fringes.push_back(find_minima(s, depth_threshold));
    }
    for (std::size_t a = 0; a < sweeps.size(); ++a) {
        for (std::size_t b = 0; b < sweeps.size(); ++b) {
            if (a == b) continue;
            for (const auto& f : out.fringes[a].minima) {
                const bool matched = std::any_of(
                    out.fringes[b].minima.begin(), out.fringes[b].minima.end(), [&](const Fringe& g) {
                        return std::abs(g.refined.omega - f.refined.omega) <= match_tolerance;
                    });
                if (!matched) out.unmatched.push_back({a, b, f});
            }
        }
    }
    return out;
}

}  // namespace stuckelberg
