#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "stuckelberg/geometry.hpp"

namespace stuckelberg {

/// Occupation bitstring; bit i set means site i is in the Rydberg state.
using Config = std::uint64_t;

/// Default cap on the number of enumerated configurations.
inline constexpr std::size_t kDefaultBasisCap = std::size_t{1} << 26;

inline constexpr std::size_t kMaxSites = 62;

enum class ConstraintKind {
    unconstrained,
    nn_blockade,   // PXP
    nnn_blockade,  // PPXPP
};

ConstraintKind parse_constraint(std::string_view name);
std::string_view to_string(ConstraintKind kind);

inline bool occupied(Config c, std::size_t site) { return (c >> site) & 1u; }

/// Configurations allowed under a blockade graph, sorted ascending.
class BasisSet {
public:
    BasisSet(std::size_t n_sites, ConstraintKind constraint, std::vector<SitePair> adjacency,
             std::vector<Config> configs);

    std::size_t sites() const { return n_sites_; }
    ConstraintKind constraint() const { return constraint_; }
    const std::vector<SitePair>& adjacency() const { return adjacency_; }
    std::span<const Config> configs() const { return configs_; }
    std::size_t size() const { return configs_.size(); }
    Config config(std::size_t index) const { return configs_[index]; }

    /// True when every one of the 2^L configurations is present, so that
    /// index == config.
    bool is_complete() const { return complete_; }

    std::optional<std::size_t> index_of(Config c) const;

private:
    std::size_t n_sites_;
    ConstraintKind constraint_;
    std::vector<SitePair> adjacency_;
    std::vector<Config> configs_;
    bool complete_;
};

bool check_constraint(Config c, std::span<const SitePair> adjacency);

BasisSet enumerate_basis(std::size_t n_sites, ConstraintKind constraint,
                         std::span<const SitePair> adjacency, std::size_t cap = kDefaultBasisCap);

/// Open-chain pairs (i, i + k) for 1 <= k <= range.
std::vector<SitePair> chain_adjacency(std::size_t n_sites, std::size_t range);

/// Blockade graph from the geometry: first distance class for nn_blockade,
/// first two for nnn_blockade, empty when unconstrained.
std::vector<SitePair> geometric_adjacency(const AtomArray& array, ConstraintKind constraint);

/// Index permutation sending each configuration to its site-reversed image.
std::vector<std::size_t> reflection_pairing(const BasisSet& basis);

Config reverse_sites(Config c, std::size_t n_sites);

}  // namespace stuckelberg
