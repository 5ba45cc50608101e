#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "stuckelberg/basis.hpp"
#include "stuckelberg/geometry.hpp"
#include "stuckelberg/kernels.hpp"

namespace stuckelberg {

enum class ModelMode { full, constrained };

/// H(t) = -Delta(t) sum n_i + (Omega(t)/2) sum sigma^x_i + sum_{i<j} V_ij n_i n_j.
///
/// The full model acts on all 2^L configurations with the given couplings.
/// Constrained models act inside a blockade basis with projected flips and
/// carry the couplings in `interactions` only when a tail is retained.
struct ModelSpec {
    ModelMode mode = ModelMode::full;
    ConstraintKind constraint = ConstraintKind::unconstrained;
    std::optional<InteractionMatrix> interactions;
};

/// "full", "pxp" or "ppxpp".
enum class ModelKind { full, pxp, ppxpp };
ModelKind parse_model_kind(std::string_view name);
std::string_view to_string(ModelKind kind);

struct QuantumState {
    std::shared_ptr<const BasisSet> basis;
    std::vector<Complex> amplitudes;

    double norm() const;
};

QuantumState vacuum_state(std::shared_ptr<const BasisSet> basis);
QuantumState basis_state(std::shared_ptr<const BasisSet> basis, Config config);

/// Precomputed diagonal data and flip table for one model on one basis.
class RydbergHamiltonian {
public:
    RydbergHamiltonian(ModelSpec model, std::shared_ptr<const BasisSet> basis);

    const ModelSpec& model() const { return model_; }
    const BasisSet& basis() const { return *basis_; }
    const std::shared_ptr<const BasisSet>& basis_ptr() const { return basis_; }
    std::size_t dimension() const { return basis_->size(); }
    std::size_t sites() const { return basis_->sites(); }

    std::span<const std::uint8_t> occupations() const { return occupation_; }
    /// sum_{i<j} V_ij n_i n_j per configuration.
    std::span<const double> interaction_energies() const { return interaction_energy_; }
    /// Row k holds the index reached by flipping each site, or -1 when the
    /// flip leaves the basis. Empty for the full model, where flips are XORs.
    std::span<const std::int32_t> flip_table() const { return flips_; }
    /// True when the Rabi term factorizes into independent site rotations.
    bool factorized_kinetic() const { return flips_.empty(); }
    /// Largest number of allowed flips out of any configuration; bounds the
    /// operator norm of the projected sigma^x sum.
    unsigned max_flips() const { return max_flips_; }

    /// out = H(delta, omega) in.
    void apply(double delta, double omega, std::span<const Complex> in, std::span<Complex> out) const;

private:
    ModelSpec model_;
    std::shared_ptr<const BasisSet> basis_;
    std::vector<std::uint8_t> occupation_;
    std::vector<double> interaction_energy_;
    std::vector<std::int32_t> flips_;
    unsigned max_flips_ = 0;
};

QuantumState hamiltonian_apply(const RydbergHamiltonian& h, double delta, double omega, const QuantumState& state);

struct DensityProfile {
    std::vector<double> site;
    double mean = 0.0;
};

DensityProfile rydberg_density(const QuantumState& state);

/// Convenience assembly of the three models on a geometry. The full model
/// uses the given cutoff; pxp/ppxpp use the first one or two distance
/// classes as the blockade graph and keep the C6 tail only when
/// retain_tail is set (pxp only).
struct ModelOptions {
    double c6 = kC6;
    InteractionCutoff cutoff = InteractionCutoff::all_pairs;
    bool retain_tail = false;
    std::size_t basis_cap = kDefaultBasisCap;
};

RydbergHamiltonian build_model(ModelKind kind, const AtomArray& array, const ModelOptions& options = {});

}  // namespace stuckelberg
