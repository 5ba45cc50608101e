#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "stuckelberg");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    Result r;
    r.code = stuckelberg::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

struct TempDir {
    TempDir() : path(fs::temp_directory_path() / ("stuckelberg_cli_" + std::to_string(::getpid())))
    {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    fs::path path;
};

}  // namespace

TEST_CASE("version and usage")
{
    const auto v = run({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out.find("stuckelberg 0.3.0") != std::string::npos);
    CHECK(run({}).code != 0);
    CHECK(run({"teleport"}).code != 0);
    CHECK(run({"predict", "--bogus"}).code != 0);
}

TEST_CASE("predict")
{
    const auto r = run({"predict", "--delta0", "20", "--omega-min", "1.5", "--omega-max", "4.5"});
    REQUIRE(r.code == 0);
    const auto w = json::parse(r.out);
    REQUIRE(w.size() == 3);
    CHECK(w[0].get<double>() == doctest::Approx(3.6232).epsilon(3e-5));
    CHECK(w[1].get<double>() == doctest::Approx(2.3112).epsilon(3e-5));
    CHECK(w[2].get<double>() == doctest::Approx(1.6961).epsilon(3e-5));
    CHECK(json::parse(run({"predict", "--delta0", "0"}).out).empty());
    const auto bad = run({"predict", "--delta0", "20", "--omega-min", "3", "--omega-max", "2"});
    CHECK(bad.code == 1);
    CHECK(bad.err.rfind("error: ", 0) == 0);
}

TEST_CASE("sweep writes a CSV and a metadata sidecar")
{
    TempDir tmp;
    const auto csv = tmp.file("pxp.csv");
    const auto r = run({"sweep", "--model", "pxp", "--L", "8", "--delta0", "20", "--omega0", "2", "-o", csv});
    REQUIRE(r.code == 0);
    const auto rows = lines(slurp(csv));
    REQUIRE(rows.size() == 62);
    CHECK(rows[0] == "omega_rad_per_us,n_final,status");
    CHECK(rows[1].rfind("1.5,", 0) == 0);
    CHECK(rows[61].rfind("4.5,", 0) == 0);
    const auto meta = json::parse(slurp(csv + ".meta.json"));
    CHECK(meta["version"] == "0.3.0");
    CHECK(meta["command"] == "sweep");
    CHECK(meta["config"]["model.kind"] == "pxp");
    CHECK(meta["config"]["geometry.L"] == 8);
    CHECK(meta["metadata"]["basis_dimension"] == 55);
    CHECK(meta["failed_points"].empty());

    const auto analysis = run({"analyze", "--in", csv});
    REQUIRE(analysis.code == 0);
    const auto report = json::parse(analysis.out);
    CHECK(report["minima"].size() == 3);
}

TEST_CASE("sweep output does not depend on --jobs")
{
    TempDir tmp;
    const std::vector<std::string> base{"sweep", "--model", "full", "--L", "6", "--delta0", "20", "--points", "9"};
    auto one = base;
    one.insert(one.end(), {"--jobs", "1", "-o", tmp.file("a.csv")});
    auto eight = base;
    eight.insert(eight.end(), {"--jobs", "8", "-o", tmp.file("b.csv")});
    REQUIRE(run(one).code == 0);
    REQUIRE(run(eight).code == 0);
    CHECK(slurp(tmp.file("a.csv")) == slurp(tmp.file("b.csv")));
}

TEST_CASE("config file merges with flags")
{
    TempDir tmp;
    const auto cfg = tmp.file("run.json");
    std::ofstream(cfg) << R"({"model.kind": "pxp", "geometry.L": 6, "drive.delta0": 20, "sweep.points": 5})";
    const auto from_config = run({"--config", cfg, "sweep"});
    REQUIRE(from_config.code == 0);
    CHECK(lines(from_config.out).size() == 6);
    const auto flag_wins = run({"--config", cfg, "sweep", "--points", "7"});
    REQUIRE(flag_wins.code == 0);
    CHECK(lines(flag_wins.out).size() == 8);
    // the option may also follow the subcommand
    CHECK(run({"sweep", "--config", cfg}).code == 0);

    std::ofstream(tmp.file("unknown.json")) << R"({"drive.delta00": 20})";
    const auto unknown = run({"--config", tmp.file("unknown.json"), "sweep"});
    CHECK(unknown.code == 1);
    CHECK(unknown.err.find("drive.delta00") != std::string::npos);

    std::ofstream(tmp.file("typed.json")) << R"({"sweep.points": "many"})";
    const auto typed = run({"--config", tmp.file("typed.json"), "sweep"});
    CHECK(typed.code == 1);
    CHECK(typed.err.find("sweep.points") != std::string::npos);

    std::ofstream(tmp.file("broken.json")) << "{";
    CHECK(run({"--config", tmp.file("broken.json"), "predict"}).code == 1);
    CHECK(run({"--config", tmp.file("missing.json"), "predict"}).code != 0);
}

TEST_CASE("validation fails fast")
{
    CHECK(run({"sweep", "--model", "pxq"}).code == 1);
    CHECK(run({"sweep", "--L", "0"}).code == 1);
    CHECK(run({"sweep", "--omega-min", "0.5"}).code == 1);
    CHECK(run({"sweep", "--points", "1"}).code == 1);
    CHECK(run({"sweep", "--backend", "cuda"}).code == 1);
    CHECK(run({"trace", "--omega", "-1"}).code == 1);
}

TEST_CASE("trace and the half-cycle protocol")
{
    const std::vector<std::string> base{"trace", "--model", "full", "--L", "8", "--delta0", "20", "--omega0", "2",
                                        "--omega", "3.825", "--samples", "20"};
    auto parse = [](const std::string& text) {
        std::vector<double> n;
        const auto rows = lines(text);
        for (std::size_t k = 1; k < rows.size(); ++k) n.push_back(std::stod(rows[k].substr(rows[k].find(',') + 1)));
        return n;
    };
    const auto full = run(base);
    REQUIRE(full.code == 0);
    CHECK(lines(full.out)[0].rfind("t_us,n_mean,n_site_0,", 0) == 0);
    CHECK(lines(full.out)[0].find("n_site_7") != std::string::npos);
    auto half_args = base;
    half_args.push_back("--half-cycle");
    const auto half = run(half_args);
    REQUIRE(half.code == 0);
    const auto nf = parse(full.out);
    const auto nh = parse(half.out);
    REQUIRE(nf.size() == 21);
    REQUIRE(nh.size() == 21);
    for (std::size_t k = 0; k <= 10; ++k) CHECK(nf[k] == nh[k]);
    CHECK(nf.back() < 0.02);
    CHECK(nh.back() > 0.03);
}

TEST_CASE("fpt, fock-check, geometry and waveform")
{
    const auto first = json::parse(run({"fpt", "--delta0", "20", "--omega0", "5", "--omega", "2", "--r", "2", "--L", "4"}).out);
    CHECK(first["kinetic_coefficient"].get<double>() == doctest::Approx(0.021736373084430757).epsilon(1e-10));
    const auto second = json::parse(run({"fpt", "--order", "2", "--delta0", "20", "--omega", "2.5", "--L", "3"}).out);
    CHECK(second["terms"].size() == 2);
    CHECK_FALSE(second["is_zero"].get<bool>());
    CHECK(run({"fpt", "--order", "2", "--omega", "2.5", "--r", "2"}).code == 1);
    CHECK(run({"fpt", "--order", "3", "--omega", "2.5"}).code == 1);

    const auto fock = json::parse(run({"fock-check", "--V", "7.246274", "--delta0", "20", "--omega", "3.623137"}).out);
    CHECK(fock["simulated_n"].get<double>() > 0.0);
    CHECK(fock.contains("discrepancy"));

    const auto xy = lines(run({"geometry", "--kind", "chain", "--L", "3", "--d", "4.7", "--format", "xy"}).out);
    REQUIRE(xy.size() >= 3);
    const auto doc = json::parse(run({"geometry", "--kind", "square", "--L", "16", "--d", "4.7"}).out);
    CHECK(doc.dump().find("4.7") != std::string::npos);

    TempDir tmp;
    const auto wave = tmp.file("w.csv");
    REQUIRE(run({"waveform", "--delta0", "20", "--omega", "4.5", "-o", wave}).code == 0);
    const auto meta = json::parse(slurp(wave + ".meta.json"));
    CHECK(meta["ramp_warning"].get<bool>());
    CHECK(meta["ramp_fraction"].get<double>() == doctest::Approx(0.1432).epsilon(1e-3));
}

TEST_CASE("compare reports unmatched minima")
{
    TempDir tmp;
    std::ofstream(tmp.file("a.csv")) << "omega_rad_per_us,n_final,status\n1.5,0.3,ok\n2,0.01,ok\n2.5,0.3,ok\n3,0.02,ok\n3.5,0.3,ok\n";
    std::ofstream(tmp.file("b.csv")) << "omega_rad_per_us,n_final,status\n1.5,0.3,ok\n2,0.35,ok\n2.5,0.3,ok\n3,0.02,ok\n3.5,0.3,ok\n";
    const auto r = run({"compare", "--in", tmp.file("a.csv"), "--in", tmp.file("b.csv")});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    REQUIRE(doc["unmatched_minima"].size() == 1);
    CHECK(doc["unmatched_minima"][0]["present_in"] == tmp.file("a.csv"));
    CHECK(doc["max_abs_difference"][1].get<double>() == doctest::Approx(0.34));
    CHECK(run({"compare", "--in", tmp.file("a.csv")}).code == 1);

    const auto spam = json::parse(run({"analyze", "--in", tmp.file("a.csv"), "--spam", "correct"}).out);
    CHECK(spam["spam"] == "correct");
    CHECK(spam["spam_warnings"].empty());
}
