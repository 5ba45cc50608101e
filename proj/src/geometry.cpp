#include "stuckelberg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace stuckelberg {

namespace {

void check_array(const AtomArray& array, bool enforce_device_bounds)
{
    const auto n = array.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!(array.distance(i, j) > 0.0)) {
                throw std::invalid_argument("geometry: sites " + std::to_string(i) + " and " +
                                            std::to_string(j) + " coincide");
            }
        }
    }
    if (!enforce_device_bounds) return;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = array.positions[i];
        if (p.x < 0.0 || p.y < 0.0 || p.x > kDeviceExtent || p.y > kDeviceExtent) {
            std::ostringstream msg;
            msg << "geometry: site " << i << " at (" << p.x << ", " << p.y
                << ") lies outside the " << kDeviceExtent << "x" << kDeviceExtent << " um region";
            throw std::invalid_argument(msg.str());
        }
    }
}

// Shift so the bounding box starts at the origin.
void normalize_origin(std::vector<Site>& sites)
{
    if (sites.empty()) return;
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = min_x;
    for (const auto& s : sites) {
        min_x = std::min(min_x, s.x);
        min_y = std::min(min_y, s.y);
    }
    for (auto& s : sites) {
        s.x -= min_x;
        s.y -= min_y;
        if (std::abs(s.x) < 1e-12) s.x = 0.0;
        if (std::abs(s.y) < 1e-12) s.y = 0.0;
    }
}

std::vector<Site> chain_sites(std::size_t n, double d)
{
    std::vector<Site> sites(n);
    for (std::size_t i = 0; i < n; ++i) sites[i] = {static_cast<double>(i) * d, 0.0};
    return sites;
}

std::vector<Site> snake_sites(std::size_t n, double d, std::size_t row_length)
{
    std::vector<Site> sites(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = i / row_length;
        const auto along = i % row_length;
        const auto col = (row % 2 == 0) ? along : row_length - 1 - along;
        sites[i] = {static_cast<double>(col) * d, static_cast<double>(row) * d};
    }
    return sites;
}

std::vector<Site> square_sites(std::size_t n, double d, std::size_t cols)
{
    std::vector<Site> sites(n);
    for (std::size_t i = 0; i < n; ++i) {
        sites[i] = {static_cast<double>(i % cols) * d, static_cast<double>(i / cols) * d};
    }
    return sites;
}

// Compact honeycomb cluster: the n lattice sites closest to a hexagon centre,
// ties broken by polar angle, then ordered row by row.
std::vector<Site> honeycomb_sites(std::size_t n, double d)
{
    const double s3 = std::numbers::sqrt3;
    const Site a1{s3 * d, 0.0};
    const Site a2{s3 * d / 2.0, 1.5 * d};
    const Site centre{s3 * d / 2.0, d / 2.0};

    const auto extent = static_cast<long>(std::ceil(std::sqrt(static_cast<double>(n)))) + 3;
    struct Candidate {
        Site site;
        double radius;
        double angle;
    };
    std::vector<Candidate> candidates;
    for (long i = -extent; i <= extent; ++i) {
        for (long j = -extent; j <= extent; ++j) {
            const Site a{i * a1.x + j * a2.x, i * a1.y + j * a2.y};
            for (const Site p : {a, Site{a.x, a.y + d}}) {
                const double dx = p.x - centre.x;
                const double dy = p.y - centre.y;
                candidates.push_back({p, std::hypot(dx, dy), std::atan2(dy, dx)});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& l, const Candidate& r) {
        if (std::abs(l.radius - r.radius) > 1e-9) return l.radius < r.radius;
        return l.angle < r.angle;
    });
    if (candidates.size() < n) throw std::logic_error("honeycomb: candidate patch too small");

    std::vector<Site> sites;
    sites.reserve(n);
    for (std::size_t k = 0; k < n; ++k) sites.push_back(candidates[k].site);
    std::sort(sites.begin(), sites.end(), [](const Site& l, const Site& r) {
        if (std::abs(l.y - r.y) > 1e-9) return l.y < r.y;
        return l.x < r.x;
    });
    return sites;
}

}  // namespace

GeometryKind parse_geometry_kind(std::string_view name)
{
    if (name == "chain") return GeometryKind::chain;
    if (name == "snake") return GeometryKind::snake;
    if (name == "square") return GeometryKind::square;
    if (name == "honeycomb") return GeometryKind::honeycomb;
    if (name == "custom") return GeometryKind::custom;
    throw std::invalid_argument("unknown geometry kind '" + std::string(name) + "'");
}

std::string_view to_string(GeometryKind kind)
{
    switch (kind) {
    case GeometryKind::chain: return "chain";
    case GeometryKind::snake: return "snake";
    case GeometryKind::square: return "square";
    case GeometryKind::honeycomb: return "honeycomb";
    case GeometryKind::custom: return "custom";
    }
    return "custom";
}

double AtomArray::distance(std::size_t i, std::size_t j) const
{
    return std::hypot(positions[i].x - positions[j].x, positions[i].y - positions[j].y);
}

std::string AtomArray::describe() const
{
    std::ostringstream out;
    out << to_string(kind) << " L=" << size() << " d=" << spacing;
    return out.str();
}

AtomArray build_geometry(GeometryKind kind, std::size_t n_sites, double spacing,
                         const GeometryOptions& options)
{
    if (n_sites < 1) throw std::invalid_argument("geometry: L must be at least 1");
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw std::invalid_argument("geometry: spacing d must be positive");
    }

    AtomArray array;
    array.kind = kind;
    array.spacing = spacing;
    switch (kind) {
    case GeometryKind::chain:
        array.positions = chain_sites(n_sites, spacing);
        break;
    case GeometryKind::snake: {
        const auto fit = static_cast<std::size_t>(std::floor(kDeviceExtent / spacing + 1e-9)) + 1;
        const auto row_length = options.row_length.value_or(fit);
        if (row_length < 2) throw std::invalid_argument("geometry: snake row_length must be >= 2");
        array.positions = snake_sites(n_sites, spacing, row_length);
        break;
    }
    case GeometryKind::square: {
        auto cols = options.row_length.value_or(
            static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n_sites)) - 1e-12)));
        if (cols < 1) throw std::invalid_argument("geometry: square row_length must be >= 1");
        array.positions = square_sites(n_sites, spacing, cols);
        break;
    }
    case GeometryKind::honeycomb:
        array.positions = honeycomb_sites(n_sites, spacing);
        normalize_origin(array.positions);
        break;
    case GeometryKind::custom:
        throw std::invalid_argument("geometry: custom layouts are read from a coordinates file");
    }
    check_array(array, options.enforce_device_bounds);
    return array;
}

AtomArray make_custom_geometry(std::vector<Site> positions, bool enforce_device_bounds)
{
    if (positions.empty()) throw std::invalid_argument("geometry: no sites given");
    AtomArray array;
    array.kind = GeometryKind::custom;
    array.positions = std::move(positions);
    check_array(array, enforce_device_bounds);
    double min_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < array.size(); ++i) {
        for (std::size_t j = i + 1; j < array.size(); ++j) min_d = std::min(min_d, array.distance(i, j));
    }
    array.spacing = std::isfinite(min_d) ? min_d : 0.0;
    return array;
}

AtomArray scaled(const AtomArray& array, double factor)
{
    if (!(factor > 0.0)) throw std::invalid_argument("geometry: scale factor must be positive");
    AtomArray out = array;
    for (auto& p : out.positions) {
        p.x *= factor;
        p.y *= factor;
    }
    out.spacing *= factor;
    return out;
}

std::vector<double> distance_classes(const AtomArray& array, std::size_t max_classes)
{
    std::vector<double> all;
    for (std::size_t i = 0; i < array.size(); ++i) {
        for (std::size_t j = i + 1; j < array.size(); ++j) all.push_back(array.distance(i, j));
    }
    std::sort(all.begin(), all.end());
    std::vector<double> classes;
    for (double r : all) {
        if (classes.size() >= max_classes && r - classes.back() > kDistanceClassTolerance) break;
        if (classes.empty() || r - classes.back() > kDistanceClassTolerance) classes.push_back(r);
    }
    if (classes.size() > max_classes) classes.resize(max_classes);
    return classes;
}

std::vector<SitePair> pairs_within_classes(const AtomArray& array, std::size_t n_classes)
{
    std::vector<SitePair> pairs;
    const auto classes = distance_classes(array, n_classes);
    if (classes.empty()) return pairs;
    const double limit = classes.back() + kDistanceClassTolerance;
    for (std::size_t i = 0; i < array.size(); ++i) {
        for (std::size_t j = i + 1; j < array.size(); ++j) {
            if (array.distance(i, j) <= limit) pairs.emplace_back(i, j);
        }
    }
    return pairs;
}

InteractionCutoff parse_cutoff(std::string_view name)
{
    if (name == "all_pairs" || name == "all") return InteractionCutoff::all_pairs;
    if (name == "nn_only" || name == "nn") return InteractionCutoff::nn_only;
    if (name == "up_to_nnn" || name == "nnn") return InteractionCutoff::up_to_nnn;
    throw std::invalid_argument("unknown interaction cutoff '" + std::string(name) + "'");
}

std::string_view to_string(InteractionCutoff cutoff)
{
    switch (cutoff) {
    case InteractionCutoff::all_pairs: return "all_pairs";
    case InteractionCutoff::nn_only: return "nn_only";
    case InteractionCutoff::up_to_nnn: return "up_to_nnn";
    }
    return "all_pairs";
}

InteractionMatrix interaction_matrix(const AtomArray& array, double c6, InteractionCutoff cutoff)
{
    if (!(c6 > 0.0)) throw std::invalid_argument("interaction: c6 must be positive");
    const auto n = array.size();
    InteractionMatrix m;
    m.c6 = c6;
    m.n_sites = n;
    m.cutoff = cutoff;
    m.values.assign(n * n, 0.0);

    double limit = std::numeric_limits<double>::infinity();
    if (cutoff != InteractionCutoff::all_pairs) {
        const auto classes = distance_classes(array, cutoff == InteractionCutoff::nn_only ? 1 : 2);
        if (!classes.empty()) limit = classes.back() + kDistanceClassTolerance;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r = array.distance(i, j);
            if (r > limit) continue;
            const double v = c6 / std::pow(r, 6);
            m.values[i * n + j] = v;
            m.values[j * n + i] = v;
        }
    }
    return m;
}

double blockade_radius(double c6, double rabi, double detuning)
{
    const double scale = std::hypot(rabi, detuning);
    if (scale == 0.0) throw std::invalid_argument("blockade_radius: rabi and detuning are both zero");
    return std::pow(c6 / scale, 1.0 / 6.0);
}

AtomArray read_sites(std::istream& in, bool enforce_device_bounds)
{
    std::vector<Site> sites;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        Site s;
        if (!(fields >> s.x >> s.y)) {
            throw std::invalid_argument("sites file line " + std::to_string(line_no) +
                                        ": expected 'x y'");
        }
        sites.push_back(s);
    }
    return make_custom_geometry(std::move(sites), enforce_device_bounds);
}

void write_sites(std::ostream& out, const AtomArray& array)
{
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(17);
    for (const auto& p : array.positions) out << p.x << ' ' << p.y << '\n';
    out.flags(flags);
    out.precision(precision);
}

}  // namespace stuckelberg
