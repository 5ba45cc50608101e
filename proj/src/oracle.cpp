#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "evolve_internal.hpp"
#include "stuckelberg/evolve.hpp"

namespace stuckelberg {

namespace {

// exp(-i h H) for real symmetric H via its eigendecomposition. Consecutive
// intervals with identical controls reuse the decomposition.
class DenseStepper {
public:
    DenseStepper(std::size_t dim, const DenseBuilder& build) : dim_(dim), build_(build), matrix_(dim * dim) {}

    void step(double delta, double omega, double h, std::span<Complex> state)
    {
        if (!valid_ || delta != delta_ || omega != omega_) {
            std::fill(matrix_.begin(), matrix_.end(), 0.0);
            build_(delta, omega, matrix_);
            const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
                matrix_.data(), static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
            solver_.compute(m);
            if (solver_.info() != Eigen::Success) throw std::runtime_error("oracle: eigendecomposition failed");
            delta_ = delta;
            omega_ = omega;
            valid_ = true;
        }
        const auto& vectors = solver_.eigenvectors();
        const auto& values = solver_.eigenvalues();
        Eigen::Map<Eigen::VectorXcd> psi(state.data(), static_cast<Eigen::Index>(dim_));
        Eigen::VectorXcd coeff = vectors.transpose().cast<Complex>() * psi;
        for (Eigen::Index k = 0; k < coeff.size(); ++k) coeff[k] *= std::polar(1.0, -h * values[k]);
        psi = vectors.cast<Complex>() * coeff;
    }

private:
    std::size_t dim_;
    const DenseBuilder& build_;
    std::vector<double> matrix_;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver_;
    double delta_ = 0.0;
    double omega_ = 0.0;
    bool valid_ = false;
};

// H = -delta n + V + (omega / 2) sum over neighbour links, kept as plain
// per-row lists so nothing is shared with the Trotter tables.
struct SparseHamiltonian {
    std::vector<double> occupancy;
    std::vector<double> pair_energy;
    std::vector<std::vector<std::size_t>> neighbours;
};

struct TaylorScratch {
    explicit TaylorScratch(std::size_t dim) : term(dim), next(dim) {}
    std::vector<Complex> term;
    std::vector<Complex> next;
};

constexpr double kTaylorTolerance = 1e-16;

// exp(-i h H) psi by a Taylor series on substeps with tau ||H - c|| <= 1,
// summed until the remainder bound drops below kTaylorTolerance. The shift
// c centres the diagonal and is restored as an exact phase.
void taylor_step(const SparseHamiltonian& h, double delta, double omega, double step, std::span<Complex> psi,
                 TaylorScratch& scratch)
{
    const std::size_t dim = psi.size();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t a = 0; a < dim; ++a) {
        const double d = -delta * h.occupancy[a] + h.pair_energy[a];
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    const double shift = 0.5 * (lo + hi);
    double bound = 0.0;
    for (std::size_t a = 0; a < dim; ++a) {
        const double d = -delta * h.occupancy[a] + h.pair_energy[a] - shift;
        bound = std::max(bound, std::abs(d) + 0.5 * std::abs(omega) * static_cast<double>(h.neighbours[a].size()));
    }
    const auto substeps = static_cast<std::size_t>(std::max(1.0, std::ceil(step * bound)));
    const double tau = step / static_cast<double>(substeps);
    const double y = tau * bound;

    auto& term = scratch.term;
    auto& next = scratch.next;
    for (std::size_t s = 0; s < substeps; ++s) {
        std::copy(psi.begin(), psi.end(), term.begin());
        double remainder = 1.0;
        for (int order = 1; order < 60; ++order) {
            // next = (-i tau / order) (H - c) term
            const Complex factor(0.0, -tau / order);
            for (std::size_t a = 0; a < dim; ++a) {
                Complex acc = (-delta * h.occupancy[a] + h.pair_energy[a] - shift) * term[a];
                Complex hop = 0.0;
                for (std::size_t b : h.neighbours[a]) hop += term[b];
                acc += 0.5 * omega * hop;
                next[a] = factor * acc;
            }
            for (std::size_t a = 0; a < dim; ++a) psi[a] += next[a];
            std::swap(term, next);
            remainder *= y / (order + 1);
            if (remainder / (1.0 - y / (order + 2)) < kTaylorTolerance) break;
        }
    }
    const Complex phase = std::polar(1.0, -shift * step);
    for (auto& v : psi) v *= phase;
}

}  // namespace

void propagate_dense(std::size_t dim, const Schedule& schedule, const DenseBuilder& build, std::span<Complex> state)
{
    if (state.size() != dim) throw std::invalid_argument("propagate_dense: state size mismatch");
    DenseStepper stepper(dim, build);
    for (std::size_t k = 0; k < schedule.steps(); ++k) {
        stepper.step(schedule.delta_values[k], schedule.omega_values[k], schedule.step_size(k), state);
    }
}

EvolutionResult oracle_cycle(const RydbergHamiltonian& hamiltonian, const DriveProtocol& protocol,
                             const QuantumState& initial, std::size_t steps_per_cycle, std::size_t cycles,
                             std::size_t n_samples)
{
    detail::check_evolution_inputs(hamiltonian, protocol, initial, steps_per_cycle, cycles);
    const auto& basis = hamiltonian.basis();
    const auto dim = basis.size();
    if (dim > kOracleMaxDimension) {
        throw std::invalid_argument("oracle: basis dimension " + std::to_string(dim) + " exceeds " +
                                    std::to_string(kOracleMaxDimension));
    }
    const auto n = basis.sites();
    const auto& model = hamiltonian.model();

    // Matrix pieces straight from the configurations and couplings.
    SparseHamiltonian h;
    h.occupancy.assign(dim, 0.0);
    h.pair_energy.assign(dim, 0.0);
    h.neighbours.resize(dim);
    for (std::size_t a = 0; a < dim; ++a) {
        const Config c = basis.config(a);
        for (std::size_t i = 0; i < n; ++i) {
            if (!occupied(c, i)) continue;
            h.occupancy[a] += 1.0;
            if (!model.interactions) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (occupied(c, j)) h.pair_energy[a] += (*model.interactions)(i, j);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (const auto b = basis.index_of(c ^ (Config{1} << i))) h.neighbours[a].push_back(*b);
        }
    }

    const std::size_t total = steps_per_cycle * cycles;
    const double t_end = static_cast<double>(cycles) * protocol.period();
    const Schedule schedule = discretize(protocol, t_end, total);
    const auto samples = sample_steps(total, n_samples);

    EvolutionResult result;
    QuantumState state = initial;
    TaylorScratch scratch(dim);
    detail::record_sample(result, state, 0.0);
    std::size_t next_sample = 1;
    for (std::size_t k = 0; k < total; ++k) {
        taylor_step(h, schedule.delta_values[k], schedule.omega_values[k], schedule.step_size(k), state.amplitudes,
                    scratch);
        if (next_sample < samples.size() && k + 1 == samples[next_sample]) {
            detail::record_sample(result, state, schedule.breakpoints[k + 1]);
            ++next_sample;
        }
    }
    result.final_state = std::move(state);
    return result;
}

}  // namespace stuckelberg
