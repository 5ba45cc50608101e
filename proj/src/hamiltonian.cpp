#include "stuckelberg/hamiltonian.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace stuckelberg {

ModelKind parse_model_kind(std::string_view name)
{
    if (name == "full") return ModelKind::full;
    if (name == "pxp") return ModelKind::pxp;
    if (name == "ppxpp") return ModelKind::ppxpp;
    throw std::invalid_argument("unknown model '" + std::string(name) + "' (expected full, pxp or ppxpp)");
}

std::string_view to_string(ModelKind kind)
{
    switch (kind) {
    case ModelKind::full: return "full";
    case ModelKind::pxp: return "pxp";
    case ModelKind::ppxpp: return "ppxpp";
    }
    return "full";
}

double QuantumState::norm() const
{
    double sum = 0.0;
    for (const auto& a : amplitudes) sum += std::norm(a);
    return std::sqrt(sum);
}

QuantumState vacuum_state(std::shared_ptr<const BasisSet> basis) { return basis_state(std::move(basis), 0); }

QuantumState basis_state(std::shared_ptr<const BasisSet> basis, Config config)
{
    if (!basis) throw std::invalid_argument("basis_state: null basis");
    const auto index = basis->index_of(config);
    if (!index) throw std::invalid_argument("basis_state: configuration not in basis");
    QuantumState state{basis, std::vector<Complex>(basis->size())};
    state.amplitudes[*index] = 1.0;
    return state;
}

RydbergHamiltonian::RydbergHamiltonian(ModelSpec model, std::shared_ptr<const BasisSet> basis)
    : model_(std::move(model)), basis_(std::move(basis))
{
    if (!basis_) throw std::invalid_argument("hamiltonian: null basis");
    const auto n = basis_->sites();
    const auto dim = basis_->size();

    if (model_.mode == ModelMode::full) {
        if (!model_.interactions) throw std::invalid_argument("hamiltonian: full model needs an interaction matrix");
        if (!basis_->is_complete()) throw std::invalid_argument("hamiltonian: full model needs the complete 2^L basis");
    } else {
        if (model_.constraint != basis_->constraint()) {
            throw std::invalid_argument("hamiltonian: basis constraint does not match the model");
        }
        if (dim > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
            throw std::length_error("hamiltonian: constrained basis too large for the flip table");
        }
    }
    if (model_.interactions && model_.interactions->n_sites != n) {
        throw std::invalid_argument("hamiltonian: interaction matrix size does not match the basis");
    }

    occupation_.resize(dim);
    interaction_energy_.assign(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
        const Config c = basis_->config(k);
        occupation_[k] = static_cast<std::uint8_t>(std::popcount(c));
        if (!model_.interactions) continue;
        const auto& v = *model_.interactions;
        double e = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!occupied(c, i)) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (occupied(c, j)) e += v(i, j);
            }
        }
        interaction_energy_[k] = e;
    }

    if (model_.mode == ModelMode::full) {
        max_flips_ = static_cast<unsigned>(n);
        return;
    }
    flips_.assign(dim * n, -1);
    for (std::size_t k = 0; k < dim; ++k) {
        const Config c = basis_->config(k);
        unsigned count = 0;
        for (std::size_t s = 0; s < n; ++s) {
            const auto target = basis_->index_of(c ^ (Config{1} << s));
            if (!target) continue;
            flips_[k * n + s] = static_cast<std::int32_t>(*target);
            ++count;
        }
        max_flips_ = std::max(max_flips_, count);
    }
}

void RydbergHamiltonian::apply(double delta, double omega, std::span<const Complex> in, std::span<Complex> out) const
{
    const auto dim = dimension();
    const auto n = sites();
    if (in.size() != dim || out.size() != dim) throw std::invalid_argument("hamiltonian: state size mismatch");
    const double half_rabi = 0.5 * omega;
    for (std::size_t k = 0; k < dim; ++k) {
        Complex acc = (-delta * occupation_[k] + interaction_energy_[k]) * in[k];
        Complex flipped{0.0, 0.0};
        if (factorized_kinetic()) {
            for (std::size_t s = 0; s < n; ++s) flipped += in[k ^ (std::size_t{1} << s)];
        } else {
            for (std::size_t s = 0; s < n; ++s) {
                const auto t = flips_[k * n + s];
                if (t >= 0) flipped += in[static_cast<std::size_t>(t)];
            }
        }
        out[k] = acc + half_rabi * flipped;
    }
}

QuantumState hamiltonian_apply(const RydbergHamiltonian& h, double delta, double omega, const QuantumState& state)
{
    if (state.basis.get() != &h.basis() && state.basis->size() != h.dimension()) {
        throw std::invalid_argument("hamiltonian_apply: state lives on a different basis");
    }
    QuantumState out{state.basis, std::vector<Complex>(state.amplitudes.size())};
    h.apply(delta, omega, state.amplitudes, out.amplitudes);
    return out;
}

DensityProfile rydberg_density(const QuantumState& state)
{
    const auto& basis = *state.basis;
    const auto n = basis.sites();
    DensityProfile profile;
    profile.site.assign(n, 0.0);
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const double p = std::norm(state.amplitudes[k]);
        if (p == 0.0) continue;
        const Config c = basis.config(k);
        for (std::size_t i = 0; i < n; ++i) {
            if (occupied(c, i)) profile.site[i] += p;
        }
    }
    double sum = 0.0;
    for (double v : profile.site) sum += v;
    profile.mean = sum / static_cast<double>(n);
    return profile;
}

RydbergHamiltonian build_model(ModelKind kind, const AtomArray& array, const ModelOptions& options)
{
    const auto n = array.size();
    ModelSpec spec;
    if (kind == ModelKind::full) {
        spec.mode = ModelMode::full;
        spec.constraint = ConstraintKind::unconstrained;
        spec.interactions = interaction_matrix(array, options.c6, options.cutoff);
        auto basis = std::make_shared<const BasisSet>(
            enumerate_basis(n, ConstraintKind::unconstrained, {}, options.basis_cap));
        return RydbergHamiltonian(std::move(spec), std::move(basis));
    }

    spec.mode = ModelMode::constrained;
    spec.constraint = kind == ModelKind::pxp ? ConstraintKind::nn_blockade : ConstraintKind::nnn_blockade;
    if (options.retain_tail) {
        if (kind != ModelKind::pxp) throw std::invalid_argument("model: only pxp can retain the interaction tail");
        spec.interactions = interaction_matrix(array, options.c6, InteractionCutoff::all_pairs);
    }
    const auto adjacency = geometric_adjacency(array, spec.constraint);
    auto basis =
        std::make_shared<const BasisSet>(enumerate_basis(n, spec.constraint, adjacency, options.basis_cap));
    return RydbergHamiltonian(std::move(spec), std::move(basis));
}

}  // namespace stuckelberg
