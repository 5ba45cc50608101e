#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "stuckelberg/analysis.hpp"
#include "stuckelberg/floquet.hpp"
#include "stuckelberg/geometry.hpp"
#include "stuckelberg/hamiltonian.hpp"

namespace stuckelberg::cli {

namespace {

using json = nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <class T>
bool json_matches(const json& v)
{
    if constexpr (std::is_same_v<T, bool>) return v.is_boolean();
    else if constexpr (std::is_same_v<T, std::string>) return v.is_string();
    else if constexpr (std::is_floating_point_v<T>) return v.is_number();
    else if constexpr (std::is_unsigned_v<T>) return v.is_number_unsigned();
    else return v.is_number_integer();
}

template <class T>
const char* json_kind()
{
    if constexpr (std::is_same_v<T, bool>) return "a boolean";
    else if constexpr (std::is_same_v<T, std::string>) return "a string";
    else if constexpr (std::is_floating_point_v<T>) return "a number";
    else if constexpr (std::is_unsigned_v<T>) return "a non-negative integer";
    else return "an integer";
}

// Flags that can also come from a flat config key. Flags given on the
// command line win over the config file.
class Registry {
public:
    template <class T>
    CLI::Option* add(CLI::App* command, const std::string& flag, T& target, const std::string& key,
                     const std::string& help)
    {
        CLI::Option* option = nullptr;
        if constexpr (std::is_same_v<T, bool>) option = command->add_flag(flag, target, help + " [" + key + "]");
        else option = command->add_option(flag, target, help + " [" + key + "]")->capture_default_str();
        bindings_.push_back({command, option, key,
                             [&target, key](const json& v) {
                                 if (!json_matches<T>(v)) {
                                     throw UsageError("config key '" + key + "': expected " + json_kind<T>());
                                 }
                                 target = v.get<T>();
                             },
                             [&target] { return json(target); }});
        return option;
    }

    void merge(const CLI::App* command, const json& config) const
    {
        if (!config.is_object()) throw UsageError("config: top level must be a JSON object");
        for (const auto& [key, value] : config.items()) {
            bool known = false;
            for (const auto& b : bindings_) {
                if (b.key != key) continue;
                known = true;
                if (b.command == command && b.option->count() == 0) b.assign(value);
            }
            if (!known) throw UsageError("config: unknown key '" + key + "'");
        }
    }

    json echo(const CLI::App* command) const
    {
        json out = json::object();
        for (const auto& b : bindings_) {
            if (b.command == command) out[b.key] = b.echo();
        }
        return out;
    }

private:
    struct Binding {
        const CLI::App* command;
        const CLI::Option* option;
        std::string key;
        std::function<void(const json&)> assign;
        std::function<json()> echo;
    };
    std::vector<Binding> bindings_;
};

struct GeometryArgs {
    std::string kind = "chain";
    std::size_t sites = 14;
    double spacing = 4.7;
    std::size_t row_length = 0;
    std::string sites_file;
    bool enforce_bounds = false;
};

struct ModelArgs {
    std::string kind = "full";
    std::string cutoff = "all_pairs";
    bool retain_tail = false;
};

struct DriveArgs {
    double delta0 = 20.0;
    double omega0 = 2.0;
    double omega = 3.0;
    unsigned r = 0;
    bool half_cycle = false;
};

struct IntegratorArgs {
    std::size_t steps = kDefaultStepsPerCycle;
    std::size_t cycles = 1;
    std::string backend = "openmp";
    double splitting_phase = kDefaultSplittingPhase;
};

struct Args {
    std::string config_path;
    GeometryArgs geometry;
    ModelArgs model;
    DriveArgs drive;
    IntegratorArgs integrator;
    std::string out;
    std::string format = "json";
    // waveform
    double resolution = kHardwareResolution;
    double ramp_rise = 0.05;
    double ramp_fall = 0.05;
    bool no_ramp = false;
    // trace
    std::size_t samples = 200;
    // sweep
    double omega_min = 1.5;
    double omega_max = 4.5;
    std::size_t points = 61;
    std::size_t jobs = 1;
    bool extended_range = false;
    // predict
    double predict_min = 1.5;
    double predict_max = 4.5;
    // fpt
    unsigned order = 1;
    std::size_t n_max = 0;
    // analyze / compare
    std::vector<std::string> inputs;
    double depth = kDefaultDepthThreshold;
    std::string spam = "none";
    double eps_g = 0.01;
    double eps_r = 0.08;
    double tolerance = 0.15;
    // fock-check
    double coupling = 0.0;
    std::size_t fock_steps = 2000;
};

void add_geometry(Registry& reg, CLI::App* cmd, GeometryArgs& g)
{
    reg.add(cmd, "--geometry,--kind", g.kind, "geometry.kind", "chain, snake, square or honeycomb");
    reg.add(cmd, "-L,--L", g.sites, "geometry.L", "number of atoms");
    reg.add(cmd, "-d,--d,--spacing", g.spacing, "geometry.spacing", "lattice spacing in um");
    reg.add(cmd, "--row-length", g.row_length, "geometry.row_length", "sites per row for snake/square (0: default)");
    reg.add(cmd, "--sites-file", g.sites_file, "geometry.sites_file", "custom positions, one 'x y' line per atom");
    reg.add(cmd, "--enforce-bounds", g.enforce_bounds, "geometry.enforce_bounds", "reject layouts wider than 75 um");
}

void add_model(Registry& reg, CLI::App* cmd, ModelArgs& m)
{
    reg.add(cmd, "--model", m.kind, "model.kind", "full, pxp or ppxpp");
    reg.add(cmd, "--cutoff", m.cutoff, "model.cutoff", "full-model couplings: all_pairs, nn_only or up_to_nnn");
    reg.add(cmd, "--retain-tail", m.retain_tail, "model.retain_tail", "keep C6 couplings beyond the blockade (pxp)");
}

void add_drive(Registry& reg, CLI::App* cmd, DriveArgs& d, bool with_omega)
{
    reg.add(cmd, "--delta0", d.delta0, "drive.delta0", "detuning amplitude in rad/us");
    reg.add(cmd, "--omega0", d.omega0, "drive.omega0", "Rabi amplitude in rad/us");
    if (with_omega) reg.add(cmd, "--omega", d.omega, "drive.omega", "drive angular frequency in rad/us");
    reg.add(cmd, "--r", d.r, "drive.r", "Rabi modulation harmonic (0: constant Rabi)");
    reg.add(cmd, "--half-cycle", d.half_cycle, "drive.half_cycle", "hold the detuning at -delta0 after T/2");
}

void add_integrator(Registry& reg, CLI::App* cmd, IntegratorArgs& i)
{
    reg.add(cmd, "--steps", i.steps, "integrator.steps", "Trotter steps per drive cycle");
    reg.add(cmd, "--cycles", i.cycles, "integrator.cycles", "number of drive cycles");
    reg.add(cmd, "--backend", i.backend, "integrator.backend", "kernel backend: serial or openmp");
    reg.add(cmd, "--splitting-phase", i.splitting_phase, "integrator.splitting_phase",
            "largest interaction phase per Strang substep at 400 steps/cycle (0: no substeps)");
}

AtomArray make_array(const GeometryArgs& g)
{
    if (!g.sites_file.empty()) {
        std::ifstream in(g.sites_file);
        if (!in) throw UsageError("geometry.sites_file: cannot open '" + g.sites_file + "'");
        return read_sites(in, g.enforce_bounds);
    }
    if (g.sites < 1) throw UsageError("geometry.L (--L) must be at least 1");
    if (!(g.spacing > 0.0)) throw UsageError("geometry.spacing (--spacing) must be positive");
    GeometryOptions options;
    if (g.row_length > 0) options.row_length = g.row_length;
    options.enforce_device_bounds = g.enforce_bounds;
    GeometryKind kind;
    try {
        kind = parse_geometry_kind(g.kind);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("geometry.kind (--geometry): ") + e.what());
    }
    if (kind == GeometryKind::custom) throw UsageError("geometry.kind: custom layouts come from --sites-file");
    return build_geometry(kind, g.sites, g.spacing, options);
}

DriveProtocol make_protocol(const DriveArgs& d)
{
    if (!(d.omega > 0.0)) throw UsageError("drive.omega (--omega) must be positive");
    if (!(d.omega0 >= 0.0)) throw UsageError("drive.omega0 (--omega0) must be non-negative");
    DriveProtocol p;
    p.delta0 = d.delta0;
    p.omega0 = d.omega0;
    p.omega = d.omega;
    p.r = d.r;
    p.half_cycle = d.half_cycle;
    p.validate();
    return p;
}

TrotterOptions make_integrator(const IntegratorArgs& i)
{
    if (i.steps < 2) throw UsageError("integrator.steps (--steps) must be at least 2");
    if (i.cycles < 1) throw UsageError("integrator.cycles (--cycles) must be at least 1");
    if (!(i.splitting_phase >= 0.0)) throw UsageError("integrator.splitting_phase must be non-negative");
    TrotterOptions o;
    o.steps_per_cycle = i.steps;
    o.cycles = i.cycles;
    o.splitting_phase = i.splitting_phase;
    try {
        o.backend = parse_backend(i.backend);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("integrator.backend (--backend): ") + e.what());
    }
    return o;
}

RydbergHamiltonian make_model(const ModelArgs& m, const AtomArray& array)
{
    ModelOptions options;
    options.retain_tail = m.retain_tail;
    ModelKind kind;
    try {
        kind = parse_model_kind(m.kind);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("model.kind (--model): ") + e.what());
    }
    try {
        options.cutoff = parse_cutoff(m.cutoff);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("model.cutoff (--cutoff): ") + e.what());
    }
    if (m.retain_tail && kind != ModelKind::pxp) throw UsageError("model.retain_tail applies to the pxp model only");
    return build_model(kind, array, options);
}

// Runs `write` on the --out file, or on `out` when no path is given.
template <class F>
void emit(const std::string& path, std::ostream& out, F&& write)
{
    if (path.empty()) {
        write(out);
        return;
    }
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    write(file);
    if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

void write_sidecar(const std::string& path, const std::string& command, const json& config, const json& extra)
{
    if (path.empty()) return;
    json meta = {{"version", STUCKELBERG_VERSION}, {"command", command}, {"config", config}};
    meta.update(extra);
    emit(path + ".meta.json", std::cout, [&](std::ostream& o) { o << meta.dump(2) << '\n'; });
}

json fringe_json(const Fringe& f)
{
    return {{"omega_min", f.refined.omega},
            {"n_min", f.sampled.n},
            {"n_min_refined", f.refined.n},
            {"omega_grid_min", f.sampled.omega},
            {"left_max", {{"omega", f.left_max.omega}, {"n", f.left_max.n}}},
            {"right_max", {{"omega", f.right_max.omega}, {"n", f.right_max.n}}},
            {"prominence", f.prominence},
            {"local_range", f.local_range},
            {"visibility", f.visibility}};
}

json report_json(const FringeReport& r)
{
    json minima = json::array();
    json rejected = json::array();
    for (const auto& f : r.minima) minima.push_back(fringe_json(f));
    for (const auto& f : r.rejected) rejected.push_back(fringe_json(f));
    return {{"depth_threshold", r.depth_threshold}, {"minima", minima}, {"rejected", rejected}};
}

SweepResult load_sweep(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open sweep '" + path + "'");
    try {
        return read_sweep_csv(in);
    } catch (const std::invalid_argument& e) {
        throw UsageError(path + ": " + e.what());
    }
}

SpamModel make_spam(const Args& a)
{
    SpamModel spam{a.eps_g, a.eps_r};
    try {
        spam.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("analysis.eps_g / analysis.eps_r: ") + e.what());
    }
    return spam;
}

int cmd_geometry(const Args& a, const json& config, std::ostream& out)
{
    const auto array = make_array(a.geometry);
    if (a.format == "xy") {
        emit(a.out, out, [&](std::ostream& o) { write_sites(o, array); });
    } else if (a.format == "json") {
        json sites = json::array();
        for (const auto& s : array.positions) sites.push_back({s.x, s.y});
        const json doc = {{"description", array.describe()},
                          {"kind", std::string(to_string(array.kind))},
                          {"spacing_um", array.spacing},
                          {"distance_classes_um", distance_classes(array, 3)},
                          {"blockade_radius_um", blockade_radius(kC6, a.drive.omega0, a.drive.delta0)},
                          {"sites_um", sites}};
        emit(a.out, out, [&](std::ostream& o) { o << std::setprecision(17) << doc.dump(2) << '\n'; });
    } else {
        throw UsageError("output.format (--format) must be json or xy");
    }
    write_sidecar(a.out, "geometry", config, {{"sites", array.size()}});
    return 0;
}

int cmd_waveform(const Args& a, const json& config, std::ostream& out, std::ostream& err)
{
    DriveProtocol p = make_protocol(a.drive);
    if (!a.no_ramp) p.ramp = Ramp{a.ramp_rise, a.ramp_fall};
    const auto w = export_hardware_waveform(p, a.resolution, a.integrator.cycles);
    emit(a.out, out, [&](std::ostream& o) { write_waveform_csv(o, w); });
    if (w.ramp_warning) {
        err << "warning: ramp overhead is " << w.ramp_fraction << " of the half period (limit " << kRampFractionLimit
            << ")\n";
    }
    write_sidecar(a.out, "waveform", config,
                  {{"ramp_fraction", w.ramp_fraction}, {"ramp_warning", w.ramp_warning}, {"samples", w.t.size()}});
    return 0;
}

int cmd_trace(const Args& a, const json& config, std::ostream& out)
{
    const auto array = make_array(a.geometry);
    const auto h = make_model(a.model, array);
    const auto p = make_protocol(a.drive);
    auto options = make_integrator(a.integrator);
    if (a.samples < 1 || a.samples > options.steps_per_cycle * options.cycles) {
        throw UsageError("trace.samples (--samples) must lie in [1, steps * cycles]");
    }
    options.n_samples = a.samples;
    const auto r = trotter_cycle(h, p, vacuum_state(h.basis_ptr()), options);
    emit(a.out, out, [&](std::ostream& o) {
        o << "t_us,n_mean";
        for (std::size_t s = 0; s < h.sites(); ++s) o << ",n_site_" << s;
        o << '\n' << std::setprecision(17);
        for (std::size_t k = 0; k < r.sample_times.size(); ++k) {
            o << r.sample_times[k] << ',' << r.mean_density[k];
            for (double v : r.site_density[k]) o << ',' << v;
            o << '\n';
        }
    });
    write_sidecar(a.out, "trace", config,
                  {{"geometry", array.describe()},
                   {"basis_dimension", h.dimension()},
                   {"max_norm_drift", r.max_norm_drift},
                   {"kinetic_error_bound", r.kinetic_error_bound}});
    return 0;
}

int cmd_sweep(const Args& a, const json& config, std::ostream& out, std::ostream& err)
{
    const auto array = make_array(a.geometry);
    const auto h = make_model(a.model, array);
    DriveArgs d = a.drive;
    d.omega = a.omega_min;
    SweepSpec spec;
    spec.protocol = make_protocol(d);
    spec.integrator = make_integrator(a.integrator);
    if (a.points < 2) throw UsageError("sweep.points (--points) must be at least 2");
    if (!(a.omega_max > a.omega_min)) throw UsageError("sweep.omega_max must exceed sweep.omega_min");
    if (a.jobs < 1) throw UsageError("sweep.jobs (--jobs) must be at least 1");
    spec.omega_grid = uniform_grid(a.omega_min, a.omega_max, a.points);
    spec.jobs = a.jobs;
    spec.extended_range = a.extended_range;
    SweepMetadata meta;
    meta.model = a.model.kind;
    meta.geometry = array.describe();
    const auto sweep = frequency_sweep(h, spec, meta);

    emit(a.out, out, [&](std::ostream& o) { write_sweep_csv(o, sweep); });
    json failures = json::array();
    for (std::size_t k = 0; k < sweep.size(); ++k) {
        if (sweep.status[k] == PointStatus::ok) continue;
        failures.push_back({{"omega", sweep.omega_grid[k]}, {"error", sweep.errors[k]}});
        err << "warning: omega=" << sweep.omega_grid[k] << " failed: " << sweep.errors[k] << '\n';
    }
    const auto& m = sweep.metadata;
    write_sidecar(a.out, "sweep", config,
                  {{"metadata",
                    {{"model", m.model},
                     {"geometry", m.geometry},
                     {"sites", m.sites},
                     {"basis_dimension", m.basis_dimension},
                     {"delta0", m.delta0},
                     {"omega0", m.omega0},
                     {"r", m.r},
                     {"half_cycle", m.half_cycle},
                     {"steps_per_cycle", m.steps_per_cycle},
                     {"cycles", m.cycles}}},
                   {"failed_points", failures}});
    return 0;
}

int cmd_predict(const Args& a, const json& config, std::ostream& out)
{
    const auto w = predict_freezing_frequencies(a.drive.delta0, a.predict_min, a.predict_max);
    emit(a.out, out, [&](std::ostream& o) { o << json(w).dump() << '\n'; });
    write_sidecar(a.out, "predict", config, json::object());
    return 0;
}

int cmd_fpt(const Args& a, const json& config, std::ostream& out)
{
    if (!(a.drive.omega > 0.0)) throw UsageError("drive.omega (--omega) must be positive");
    const auto array = make_array(a.geometry);
    const auto couplings = retained_couplings(array);
    json c = json::array();
    for (const auto& k : couplings) c.push_back({{"i", k.i}, {"j", k.j}, {"offset", k.offset()}, {"value", k.value}});
    json doc = {{"order", a.order},
                {"delta0", a.drive.delta0},
                {"omega0", a.drive.omega0},
                {"omega", a.drive.omega},
                {"r", a.drive.r},
                {"x", a.drive.delta0 / a.drive.omega},
                {"convention", "coefficient c multiplies (c/2) sigma^x"}};
    if (a.order == 1) {
        const auto f = fpt_first_order(a.drive.delta0, a.drive.omega0, a.drive.omega, a.drive.r, couplings);
        doc["kinetic_coefficient"] = f.kinetic_coefficient;
        doc["interaction_terms"] = c;
    } else if (a.order == 2) {
        if (a.drive.r != 0) throw UsageError("fpt.order 2 is available for the constant-Rabi drive (r = 0) only");
        std::optional<std::size_t> n_max;
        if (a.n_max > 0) n_max = a.n_max;
        const auto f = fpt_second_order(a.drive.delta0, a.drive.omega0, a.drive.omega, couplings, n_max);
        json terms = json::array();
        for (const auto& t : f.terms) {
            terms.push_back({{"flip_site", t.flip_site},
                             {"occupied_site", t.occupied_site},
                             {"offset", t.offset},
                             {"coefficient", t.coefficient}});
        }
        doc["bessel_sum"] = f.bessel_sum;
        doc["n_max"] = f.n_max;
        doc["tail_bound"] = f.tail_bound;
        doc["is_zero"] = f.is_zero();
        doc["terms"] = terms;
        doc["interaction_terms"] = c;
    } else {
        throw UsageError("fpt.order (--order) must be 1 or 2");
    }
    emit(a.out, out, [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
    write_sidecar(a.out, "fpt", config, json::object());
    return 0;
}

int cmd_analyze(const Args& a, const json& config, std::ostream& out, std::ostream& err)
{
    if (a.inputs.size() != 1) throw UsageError("analyze takes exactly one --in sweep");
    auto sweep = load_sweep(a.inputs.front());
    json warnings = json::array();
    if (a.spam == "correct" || a.spam == "apply") {
        const auto spam = make_spam(a);
        for (std::size_t k = 0; k < sweep.size(); ++k) {
            if (sweep.status[k] != PointStatus::ok) continue;
            if (a.spam == "apply") {
                sweep.n_final[k] = spam_apply(sweep.n_final[k], spam);
                continue;
            }
            const auto c = spam_correct(sweep.n_final[k], spam);
            sweep.n_final[k] = c.value;
            if (c.miscalibrated) {
                warnings.push_back({{"omega", sweep.omega_grid[k]}, {"corrected", c.value}});
                err << "warning: corrected density " << c.value << " at omega=" << sweep.omega_grid[k]
                    << " is negative; check the SPAM calibration\n";
            }
        }
    } else if (a.spam != "none") {
        throw UsageError("analysis.spam (--spam) must be none, correct or apply");
    }
    if (!(a.depth >= 0.0)) throw UsageError("analysis.depth (--depth) must be non-negative");
    json doc = report_json(find_minima(sweep, a.depth));
    doc["input"] = a.inputs.front();
    doc["spam"] = a.spam;
    if (a.spam != "none") {
        doc["eps_g"] = a.eps_g;
        doc["eps_r"] = a.eps_r;
        doc["spam_warnings"] = warnings;
    }
    emit(a.out, out, [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
    write_sidecar(a.out, "analyze", config, json::object());
    return 0;
}

int cmd_compare(const Args& a, const json& config, std::ostream& out)
{
    if (a.inputs.size() < 2) throw UsageError("compare needs at least two --in sweeps");
    std::vector<SweepResult> sweeps;
    for (const auto& path : a.inputs) sweeps.push_back(load_sweep(path));
    if (!(a.depth >= 0.0)) throw UsageError("analysis.depth (--depth) must be non-negative");
    const auto cmp = compare_models(sweeps, a.depth, a.tolerance);
    json fringes = json::array();
    for (std::size_t m = 0; m < sweeps.size(); ++m) {
        json r = report_json(cmp.fringes[m]);
        r["input"] = a.inputs[m];
        fringes.push_back(r);
    }
    json unmatched = json::array();
    for (const auto& u : cmp.unmatched) {
        unmatched.push_back({{"present_in", a.inputs[u.present_in]},
                             {"absent_in", a.inputs[u.absent_in]},
                             {"omega_min", u.fringe.refined.omega},
                             {"n_min", u.fringe.sampled.n}});
    }
    json differences = json::array();
    for (const auto& d : cmp.differences) {
        json row = json::array();
        for (double v : d) row.push_back(std::isfinite(v) ? json(v) : json(nullptr));
        differences.push_back(row);
    }
    const json doc = {{"inputs", a.inputs},
                      {"omega_grid", cmp.omega_grid},
                      {"differences_vs_first", differences},
                      {"max_abs_difference", cmp.max_abs_difference},
                      {"fringes", fringes},
                      {"match_tolerance", a.tolerance},
                      {"unmatched_minima", unmatched}};
    emit(a.out, out, [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
    write_sidecar(a.out, "compare", config, json::object());
    return 0;
}

int cmd_fock(const Args& a, const json& config, std::ostream& out)
{
    if (!(a.drive.omega > 0.0)) throw UsageError("drive.omega (--omega) must be positive");
    if (a.fock_steps < 2) throw UsageError("fock.steps (--steps) must be at least 2");
    const auto r = three_site_fock_check(a.coupling, a.drive.delta0, a.drive.omega0, a.drive.omega, a.fock_steps);
    const json doc = {{"V", a.coupling},
                      {"delta0", a.drive.delta0},
                      {"omega0", a.drive.omega0},
                      {"omega", a.drive.omega},
                      {"simulated_n", r.simulated_density},
                      {"predicted_n", r.predicted_density},
                      {"discrepancy", r.discrepancy},
                      {"j0_channel", r.j0_channel},
                      {"resonance_channel", r.resonance_channel},
                      {"resonance_amplitude", {r.resonance_amplitude.real(), r.resonance_amplitude.imag()}}};
    emit(a.out, out, [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
    write_sidecar(a.out, "fock-check", config, json::object());
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Args a;
    Registry reg;
    CLI::App app{"Driven Rydberg array simulator and Stueckelberg interference analytics", "stuckelberg"};
    app.set_version_flag("--version", std::string("stuckelberg ") + STUCKELBERG_VERSION);
    app.add_option("--config", a.config_path, "JSON file of flat namespaced keys; flags win")
        ->check(CLI::ExistingFile);
    app.require_subcommand(1);
    app.fallthrough();

    auto* geometry = app.add_subcommand("geometry", "build an atom layout");
    add_geometry(reg, geometry, a.geometry);
    reg.add(geometry, "--delta0", a.drive.delta0, "drive.delta0", "detuning for the blockade radius (rad/us)");
    reg.add(geometry, "--omega0", a.drive.omega0, "drive.omega0", "Rabi frequency for the blockade radius (rad/us)");
    reg.add(geometry, "--format", a.format, "output.format", "json or xy");
    reg.add(geometry, "-o,--out", a.out, "output.path", "output file (stdout when empty)");

    auto* waveform = app.add_subcommand("waveform", "export the hardware waveform as CSV");
    add_drive(reg, waveform, a.drive, true);
    reg.add(waveform, "--resolution", a.resolution, "waveform.resolution", "time grid in us");
    reg.add(waveform, "--cycles", a.integrator.cycles, "integrator.cycles", "number of drive cycles");
    reg.add(waveform, "--ramp-rise", a.ramp_rise, "waveform.ramp_rise", "Rabi rise time in us");
    reg.add(waveform, "--ramp-fall", a.ramp_fall, "waveform.ramp_fall", "Rabi fall time in us");
    reg.add(waveform, "--no-ramp", a.no_ramp, "waveform.no_ramp", "omit the Rabi ramps");
    reg.add(waveform, "-o,--out", a.out, "output.path", "output file (stdout when empty)");

    auto* sweep = app.add_subcommand("sweep", "n(T) over a drive-frequency grid");
    add_geometry(reg, sweep, a.geometry);
    add_model(reg, sweep, a.model);
    add_drive(reg, sweep, a.drive, false);
    add_integrator(reg, sweep, a.integrator);
    reg.add(sweep, "--omega-min", a.omega_min, "sweep.omega_min", "first grid frequency in rad/us");
    reg.add(sweep, "--omega-max", a.omega_max, "sweep.omega_max", "last grid frequency in rad/us");
    reg.add(sweep, "--points", a.points, "sweep.points", "grid points");
    reg.add(sweep, "--jobs", a.jobs, "sweep.jobs", "parallel grid workers");
    reg.add(sweep, "--extended-range", a.extended_range, "sweep.extended_range", "allow frequencies outside [1.2, 4.5]");
    reg.add(sweep, "-o,--out", a.out, "output.path", "output CSV (stdout when empty)");

    auto* trace = app.add_subcommand("trace", "time-resolved densities over the drive window");
    add_geometry(reg, trace, a.geometry);
    add_model(reg, trace, a.model);
    add_drive(reg, trace, a.drive, true);
    add_integrator(reg, trace, a.integrator);
    reg.add(trace, "--samples", a.samples, "trace.samples", "sample times after t = 0");
    reg.add(trace, "-o,--out", a.out, "output.path", "output CSV (stdout when empty)");

    auto* predict = app.add_subcommand("predict", "first-order freezing frequencies as JSON");
    reg.add(predict, "--delta0", a.drive.delta0, "drive.delta0", "detuning amplitude in rad/us");
    reg.add(predict, "--omega-min", a.predict_min, "floquet.omega_min", "lower frequency bound in rad/us");
    reg.add(predict, "--omega-max", a.predict_max, "floquet.omega_max", "upper frequency bound in rad/us");
    reg.add(predict, "-o,--out", a.out, "output.path", "output file (stdout when empty)");

    auto* fpt = app.add_subcommand("fpt", "Floquet perturbation coefficients as JSON");
    add_geometry(reg, fpt, a.geometry);
    add_drive(reg, fpt, a.drive, true);
    reg.add(fpt, "--order", a.order, "fpt.order", "1 or 2");
    reg.add(fpt, "--n-max", a.n_max, "fpt.n_max", "Bessel truncation for order 2 (0: automatic)");
    reg.add(fpt, "-o,--out", a.out, "output.path", "output file (stdout when empty)");

    auto* analyze = app.add_subcommand("analyze", "fringe report of a sweep CSV");
    reg.add(analyze, "--in", a.inputs, "analysis.inputs", "sweep CSV")->required();
    reg.add(analyze, "--depth", a.depth, "analysis.depth", "depth threshold as a fraction of the local range");
    reg.add(analyze, "--spam", a.spam, "analysis.spam", "none, correct or apply");
    reg.add(analyze, "--eps-g", a.eps_g, "analysis.eps_g", "false ground detection probability");
    reg.add(analyze, "--eps-r", a.eps_r, "analysis.eps_r", "false Rydberg detection probability");
    reg.add(analyze, "-o,--out", a.out, "output.path", "output file (stdout when empty)");

    auto* compare = app.add_subcommand("compare", "compare sweeps on a shared grid");
    reg.add(compare, "--in", a.inputs, "analysis.inputs", "sweep CSV (repeat)")->required();
    reg.add(compare, "--depth", a.depth, "analysis.depth", "depth threshold as a fraction of the local range");
    reg.add(compare, "--tolerance", a.tolerance, "analysis.match_tolerance", "minimum matching window in rad/us");
    reg.add(compare, "-o,--out", a.out, "output.path", "output file (stdout when empty)");

    auto* fock = app.add_subcommand("fock-check", "three-site resonance diagnostic as JSON");
    reg.add(fock, "--V", a.coupling, "fock.V", "next-nearest coupling in rad/us");
    reg.add(fock, "--delta0", a.drive.delta0, "drive.delta0", "detuning amplitude in rad/us");
    reg.add(fock, "--omega0", a.drive.omega0, "drive.omega0", "Rabi amplitude in rad/us");
    reg.add(fock, "--omega", a.drive.omega, "drive.omega", "drive angular frequency in rad/us");
    reg.add(fock, "--steps", a.fock_steps, "fock.steps", "exact-exponential steps per period");
    reg.add(fock, "-o,--out", a.out, "output.path", "output file (stdout when empty)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        CLI::App* command = app.get_subcommands().front();
        if (!a.config_path.empty()) {
            std::ifstream in(a.config_path);
            if (!in) throw UsageError("cannot open config '" + a.config_path + "'");
            json config;
            try {
                config = json::parse(in);
            } catch (const json::parse_error& e) {
                throw UsageError("config '" + a.config_path + "' is not valid JSON: " + e.what());
            }
            reg.merge(command, config);
        }
        const json echo = reg.echo(command);
        if (command == geometry) return cmd_geometry(a, echo, out);
        if (command == waveform) return cmd_waveform(a, echo, out, err);
        if (command == sweep) return cmd_sweep(a, echo, out, err);
        if (command == trace) return cmd_trace(a, echo, out);
        if (command == predict) return cmd_predict(a, echo, out);
        if (command == fpt) return cmd_fpt(a, echo, out);
        if (command == analyze) return cmd_analyze(a, echo, out, err);
        if (command == compare) return cmd_compare(a, echo, out);
        if (command == fock) return cmd_fock(a, echo, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace stuckelberg::cli
