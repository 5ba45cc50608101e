#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stuckelberg {

/// van der Waals coefficient of the |70S_1/2> Rydberg state, in um^6 rad/us.
inline constexpr double kC6 = 5420503.0;

/// Edge length of the square active region of the device, in um.
inline constexpr double kDeviceExtent = 75.0;

/// Two pair distances closer than this (um) belong to the same distance class.
inline constexpr double kDistanceClassTolerance = 1e-6;

struct Site {
    double x = 0.0;
    double y = 0.0;
};

enum class GeometryKind { chain, snake, square, honeycomb, custom };

GeometryKind parse_geometry_kind(std::string_view name);
std::string_view to_string(GeometryKind kind);

using SitePair = std::pair<std::size_t, std::size_t>;

/// Ordered atom positions in um. Site order is chain order for 1D layouts.
struct AtomArray {
    std::vector<Site> positions;
    GeometryKind kind = GeometryKind::custom;
    double spacing = 0.0;

    std::size_t size() const { return positions.size(); }
    double distance(std::size_t i, std::size_t j) const;
    std::string describe() const;
};

struct GeometryOptions {
    /// Sites per row for snake and square layouts. Snake defaults to the
    /// number of sites that fit across the device at the given pitch.
    std::optional<std::size_t> row_length;
    bool enforce_device_bounds = false;
};

AtomArray build_geometry(GeometryKind kind, std::size_t n_sites, double spacing,
                         const GeometryOptions& options = {});

/// Wraps user coordinates. spacing is set to the minimum pair distance.
AtomArray make_custom_geometry(std::vector<Site> positions, bool enforce_device_bounds = false);

AtomArray scaled(const AtomArray& array, double factor);

/// Distinct pair distances in ascending order, merged within
/// kDistanceClassTolerance. At most max_classes entries are returned.
std::vector<double> distance_classes(const AtomArray& array, std::size_t max_classes);

/// Pairs (i < j) whose distance falls in one of the first n_classes classes.
std::vector<SitePair> pairs_within_classes(const AtomArray& array, std::size_t n_classes);

enum class InteractionCutoff { all_pairs, nn_only, up_to_nnn };

InteractionCutoff parse_cutoff(std::string_view name);
std::string_view to_string(InteractionCutoff cutoff);

/// Symmetric V_ij = C6 / r_ij^6 in rad/us with zero diagonal.
struct InteractionMatrix {
    double c6 = kC6;
    std::size_t n_sites = 0;
    InteractionCutoff cutoff = InteractionCutoff::all_pairs;
    std::vector<double> values;

    double operator()(std::size_t i, std::size_t j) const { return values[i * n_sites + j]; }
};

InteractionMatrix interaction_matrix(const AtomArray& array, double c6 = kC6,
                                     InteractionCutoff cutoff = InteractionCutoff::all_pairs);

/// (C6 / sqrt(rabi^2 + detuning^2))^(1/6) in um.
double blockade_radius(double c6, double rabi, double detuning);

/// Plain text, one "x y" line per site in um.
AtomArray read_sites(std::istream& in, bool enforce_device_bounds = false);
void write_sites(std::ostream& out, const AtomArray& array);

}  // namespace stuckelberg
