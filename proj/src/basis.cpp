#include "stuckelberg/basis.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace stuckelberg {

namespace {

void check_pairs(std::size_t n_sites, std::span<const SitePair> adjacency)
{
    for (const auto& [i, j] : adjacency) {
        if (i >= n_sites || j >= n_sites || i == j) {
            throw std::invalid_argument("basis: invalid adjacency pair (" + std::to_string(i) + ", " +
                                        std::to_string(j) + ") for L=" + std::to_string(n_sites));
        }
    }
}

std::vector<SitePair> canonical(std::span<const SitePair> pairs)
{
    std::set<SitePair> unique;
    for (auto [i, j] : pairs) unique.insert(i < j ? SitePair{i, j} : SitePair{j, i});
    return {unique.begin(), unique.end()};
}

}  // namespace

ConstraintKind parse_constraint(std::string_view name)
{
    if (name == "unconstrained" || name == "none") return ConstraintKind::unconstrained;
    if (name == "nn_blockade" || name == "pxp") return ConstraintKind::nn_blockade;
    if (name == "nnn_blockade" || name == "ppxpp") return ConstraintKind::nnn_blockade;
    throw std::invalid_argument("unknown constraint '" + std::string(name) + "'");
}

std::string_view to_string(ConstraintKind kind)
{
    switch (kind) {
    case ConstraintKind::unconstrained: return "unconstrained";
    case ConstraintKind::nn_blockade: return "nn_blockade";
    case ConstraintKind::nnn_blockade: return "nnn_blockade";
    }
    return "unconstrained";
}

BasisSet::BasisSet(std::size_t n_sites, ConstraintKind constraint, std::vector<SitePair> adjacency,
                   std::vector<Config> configs)
    : n_sites_(n_sites),
      constraint_(constraint),
      adjacency_(std::move(adjacency)),
      configs_(std::move(configs)),
      complete_(n_sites < 64 && configs_.size() == (Config{1} << n_sites))
{
}

std::optional<std::size_t> BasisSet::index_of(Config c) const
{
    if (complete_) {
        if (c < configs_.size()) return static_cast<std::size_t>(c);
        return std::nullopt;
    }
    const auto it = std::lower_bound(configs_.begin(), configs_.end(), c);
    if (it == configs_.end() || *it != c) return std::nullopt;
    return static_cast<std::size_t>(it - configs_.begin());
}

bool check_constraint(Config c, std::span<const SitePair> adjacency)
{
    return std::none_of(adjacency.begin(), adjacency.end(),
                        [c](const SitePair& p) { return occupied(c, p.first) && occupied(c, p.second); });
}

BasisSet enumerate_basis(std::size_t n_sites, ConstraintKind constraint,
                         std::span<const SitePair> adjacency, std::size_t cap)
{
    if (n_sites < 1 || n_sites > kMaxSites) {
        throw std::invalid_argument("basis: L must lie in [1, " + std::to_string(kMaxSites) + "]");
    }
    std::vector<SitePair> graph;
    if (constraint != ConstraintKind::unconstrained) {
        check_pairs(n_sites, adjacency);
        graph = canonical(adjacency);
    }

    if (graph.empty()) {
        const Config dim = Config{1} << n_sites;
        if (dim > cap) {
            throw std::length_error("basis: 2^" + std::to_string(n_sites) +
                                    " configurations exceed the cap of " + std::to_string(cap));
        }
        std::vector<Config> configs(dim);
        for (Config c = 0; c < dim; ++c) configs[c] = c;
        return BasisSet(n_sites, constraint, std::move(graph), std::move(configs));
    }

    // Bits are chosen from the highest site down, 0 before 1, so configurations
    // come out in ascending integer order. A set bit only needs checking
    // against higher sites already placed.
    std::vector<Config> higher_neighbours(n_sites, 0);
    for (const auto& [i, j] : graph) higher_neighbours[i] |= Config{1} << j;

    std::vector<Config> configs;
    struct Frame {
        Config prefix;
        std::size_t next;  // number of sites still to place
    };
    std::vector<Frame> stack{{0, n_sites}};
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        if (f.next == 0) {
            if (configs.size() >= cap) {
                throw std::length_error("basis: enumeration exceeds the cap of " + std::to_string(cap) +
                                        " configurations");
            }
            configs.push_back(f.prefix);
            continue;
        }
        const std::size_t site = f.next - 1;
        // Pushed in reverse so the 0 branch is expanded first.
        if ((f.prefix & higher_neighbours[site]) == 0) stack.push_back({f.prefix | (Config{1} << site), site});
        stack.push_back({f.prefix, site});
    }
    return BasisSet(n_sites, constraint, std::move(graph), std::move(configs));
}

std::vector<SitePair> chain_adjacency(std::size_t n_sites, std::size_t range)
{
    std::vector<SitePair> pairs;
    for (std::size_t i = 0; i < n_sites; ++i) {
        for (std::size_t k = 1; k <= range && i + k < n_sites; ++k) pairs.emplace_back(i, i + k);
    }
    return pairs;
}

std::vector<SitePair> geometric_adjacency(const AtomArray& array, ConstraintKind constraint)
{
    switch (constraint) {
    case ConstraintKind::unconstrained: return {};
    case ConstraintKind::nn_blockade: return pairs_within_classes(array, 1);
    case ConstraintKind::nnn_blockade: return pairs_within_classes(array, 2);
    }
    return {};
}

Config reverse_sites(Config c, std::size_t n_sites)
{
    Config r = 0;
    for (std::size_t i = 0; i < n_sites; ++i) {
        if (occupied(c, i)) r |= Config{1} << (n_sites - 1 - i);
    }
    return r;
}

std::vector<std::size_t> reflection_pairing(const BasisSet& basis)
{
    const auto n = basis.sites();
    const auto& graph = basis.adjacency();
    std::set<SitePair> edges(graph.begin(), graph.end());
    for (const auto& [i, j] : graph) {
        const auto a = n - 1 - i;
        const auto b = n - 1 - j;
        if (!edges.contains(a < b ? SitePair{a, b} : SitePair{b, a})) {
            throw std::invalid_argument("reflection_pairing: constraint graph is not reflection symmetric");
        }
    }
    std::vector<std::size_t> image(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const auto target = basis.index_of(reverse_sites(basis.config(k), n));
        if (!target) throw std::logic_error("reflection_pairing: reflected configuration missing");
        image[k] = *target;
    }
    return image;
}

}  // namespace stuckelberg
