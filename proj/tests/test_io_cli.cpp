#include "subdiff/io.hpp"

#include "oracle_mp.hpp"
#include "subdiff/mittag_leffler.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace subdiff;
using testutil::rel_err;
namespace fs = std::filesystem;

namespace {

std::string run_cli(const std::string& args, int* exit_code) {
    const std::string cmd = std::string(SUBDIFF_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[512];
    while (std::size_t n = std::fread(buf, 1, sizeof(buf), p)) out.append(buf, n);
    int st = pclose(p);
    *exit_code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir(const char* name) {
    fs::path d = fs::temp_directory_path() / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

const char* kConfigDir = SUBDIFF_CONFIG_DIR;

} // namespace

TEST_CASE("format_double round-trips doubles exactly") {
    testutil::Rng rng(5);
    for (int i = 0; i < 500; ++i) {
        double v = std::ldexp(rng.uniform(-1, 1), rng.integer(-60, 60));
        CHECK(std::strtod(io::format_double(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("field JSON and CSV round trips") {
    auto f = io::synthetic_decay_field(2, 12.0, 2.0, 1.5, 42);
    auto j = io::field_to_json(f);
    auto f2 = io::field_from_json(j);
    REQUIRE(f2.size() == f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(f2.modes[i] == f.modes[i]);
        CHECK(f2.coeffs[i] == f.coeffs[i]); // bit-exact through JSON
    }
    auto csv = io::field_to_csv(f);
    CHECK(csv.substr(0, 12) == "n1,n2,re,im\n");
}

TEST_CASE("synthetic decay fields are deterministic and real-valued") {
    auto a = io::synthetic_decay_field(2, 20.0, 2.5, 1.0, 7);
    auto b = io::synthetic_decay_field(2, 20.0, 2.5, 1.0, 7);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.coeffs[i] == b.coeffs[i]);
    CHECK(spec::conjugate_symmetric(a, 0.0));
    auto c = io::synthetic_decay_field(2, 20.0, 2.5, 1.0, 8);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) differs = differs || a.coeffs[i] != c.coeffs[i];
    CHECK(differs);
}

TEST_CASE("config parsing is strict") {
    io::json good = {
        {"problem",
         {{"dim", 2},
          {"rho", 0.5},
          {"horizon_t", 1.0},
          {"band_k", 8.0},
          {"phi", {{"type", "modes"}, {"modes", io::json::array({{{"n", {1, 0}}, {"c", {1.0, 0.0}}}})}}},
          {"forcing", {{"type", "none"}}}}},
        {"eval_times", {0.5}}};
    auto cfg = io::config_from_json(good);
    CHECK(cfg.problem.rho == 0.5);
    CHECK(cfg.quadrature.nodes_per_unit == 1024); // default

    auto bad = good;
    bad["problem"]["typo_key"] = 1;
    CHECK_THROWS_AS(io::config_from_json(bad), std::invalid_argument);
    auto bad2 = good;
    bad2["problem"].erase("rho");
    CHECK_THROWS_AS(io::config_from_json(bad2), std::invalid_argument);
    auto bad3 = good;
    bad3["problem"]["rho"] = 1.7;
    CHECK_THROWS_AS(io::config_from_json(bad3), std::domain_error);

    // config -> json -> config is stable
    auto j2 = io::config_to_json(cfg);
    auto cfg2 = io::config_from_json(j2);
    CHECK(io::config_to_json(cfg2).dump() == j2.dump());
}

TEST_CASE("signal CSV parsing") {
    auto s = io::signal_from_csv("t,value\n0,1\n0.5,2\n1,3\n");
    CHECK(s.dt == 0.5);
    REQUIRE(s.samples.size() == 3);
    CHECK(s.samples[2] == 3.0);
    CHECK_THROWS_AS(io::signal_from_csv("t,value\n1,1\n2,2\n"), std::invalid_argument); // t0 != 0
    CHECK_THROWS_AS(io::signal_from_csv("t,value\n0,1\n0.5,2\n1.7,3\n"), std::invalid_argument);
    auto round = io::signal_from_csv(io::signal_to_csv(s));
    CHECK(round.samples == s.samples);
}

TEST_CASE("cli: ml-table golden rows and validation exits") {
    int code = 0;
    auto out = run_cli("ml-table --rho 1 --mu 1 --zmin -1 --zmax 0 --count 2", &code);
    CHECK(code == 0);
    CHECK(out == "z,E\n-1,0.36787944117144233\n0,1\n");

    run_cli("ml-table --rho 0.5 --mu 0.5 --zmin 0 --zmax 0 --count 1", &code);
    CHECK(code == 2); // count < 2
    run_cli("ml-table --rho 1.5 --mu 1 --zmin 0 --zmax 1 --count 3", &code);
    CHECK(code == 2); // rho out of (0, 1]
    run_cli("ml-table --rho 0.2 --mu 1 --zmin 4.9 --zmax 5 --count 2", &code);
    CHECK(code == 3); // overflow: numeric domain exit

    // rows match both the library evaluation and the series oracle
    out = run_cli("ml-table --rho 0.5 --mu 0.5 --zmin -5 --zmax 0 --count 11", &code);
    CHECK(code == 0);
    std::stringstream ss(out);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "z,E");
    int rows = 0;
    while (std::getline(ss, line)) {
        double z, e;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &z, &e) == 2);
        CHECK(rel_err(e, ml::ml_eval(0.5, 0.5, z)) < 1e-15);
        CHECK(rel_err(e, oracle::ml_reference(0.5, 0.5, z)) < 1e-12);
        ++rows;
    }
    CHECK(rows == 11);
}

TEST_CASE("cli: solve demo writes closed-form snapshots and a manifest") {
    auto dir = temp_dir("subdiff_demo");
    int code = 0;
    run_cli("solve --config " + (fs::path(kConfigDir) / "demo.json").string() + " --out " +
                dir.string(),
            &code);
    REQUIRE(code == 0);
    auto j = io::json::parse(slurp(dir / "snapshot_002.json"));
    auto snap = io::snapshot_from_json(j);
    CHECK(snap.t == 1.0);
    // phi = e^{ix1} + e^{-ix1}: coefficient at (1,0) is E_{.5,.5}(-1) at t = 1
    spec::Mode m;
    m.dim = 2;
    m.n = {1, 0, 0, 0, 0, 0};
    CHECK(rel_err(snap.field.at(m).real(), ml::propagator(0.5, 1.0, 1.0)) < 1e-12);
    CHECK(fs::exists(dir / "snapshot_000_grid.csv"));
    auto manifest = io::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["tool"] == "subdiff");

    // manifest re-ingested as config reproduces bit-identical snapshots
    auto dir2 = temp_dir("subdiff_demo2");
    run_cli("solve --config " + (dir / "manifest.json").string() + " --out " + dir2.string(),
            &code);
    REQUIRE(code == 0);
    for (const char* f : {"snapshot_000.json", "snapshot_001.json", "snapshot_002.json",
                          "snapshot_000_grid.csv"})
        CHECK(slurp(dir / f) == slurp(dir2 / f));
}

TEST_CASE("cli: repeated runs are bit-identical") {
    auto d1 = temp_dir("subdiff_det1");
    auto d2 = temp_dir("subdiff_det2");
    int code = 0;
    const std::string cfg = (fs::path(kConfigDir) / "demo.json").string();
    run_cli("solve --config " + cfg + " --out " + d1.string(), &code);
    REQUIRE(code == 0);
    run_cli("solve --config " + cfg + " --out " + d2.string(), &code);
    REQUIRE(code == 0);
    for (const char* f : {"snapshot_000.json", "snapshot_001.json", "snapshot_002.json",
                          "snapshot_000_grid.csv", "snapshot_001_grid.csv"})
        CHECK(slurp(d1 / f) == slurp(d2 / f));
}

TEST_CASE("cli: solve validation failures exit 2") {
    auto dir = temp_dir("subdiff_bad");
    int code = 0;
    run_cli("solve --config /nonexistent.json", &code);
    CHECK(code == 2);
    std::ofstream(dir / "bad.json") << "{\"problem\": }";
    run_cli("solve --config " + (dir / "bad.json").string(), &code);
    CHECK(code == 2);
    std::ofstream(dir / "unknown.json") << R"({"problem": {"dim": 2, "rho": 0.5, "horizon_t": 1,
        "band_k": 4, "phi": {"type": "modes", "modes": []}, "forcing": {"type": "none"}},
        "eval_times": [0.5], "mystery": 1})";
    run_cli("solve --config " + (dir / "unknown.json").string(), &code);
    CHECK(code == 2);
}

TEST_CASE("cli: fracop tabulates an operator") {
    auto dir = temp_dir("subdiff_fracop");
    {
        std::ofstream out(dir / "sig.csv");
        out << "t,value\n";
        for (int k = 0; k <= 64; ++k) out << io::format_double(k / 64.0) << ",1\n";
    }
    int code = 0;
    auto out = run_cli("fracop --op rl-integral --order -1 --input " + (dir / "sig.csv").string(),
                       &code);
    REQUIRE(code == 0);
    auto sig = io::signal_from_csv(out);
    REQUIRE(sig.samples.size() == 65);
    for (int k = 0; k <= 64; ++k) CHECK(std::fabs(sig.samples[k] - k / 64.0) < 1e-12);

    run_cli("fracop --op nope --order 0.5 --input " + (dir / "sig.csv").string(), &code);
    CHECK(code == 2);
}

TEST_CASE("cli: classical and constant-forcing configs hit their closed forms") {
    auto dir = temp_dir("subdiff_closed");
    int code = 0;

    // rho = 1: heat-kernel decay e^{-|n|^2 t}
    io::json heat = {
        {"problem",
         {{"dim", 2},
          {"rho", 1.0},
          {"horizon_t", 1.0},
          {"band_k", 8.0},
          {"phi",
           {{"type", "modes"}, {"modes", io::json::array({{{"n", {2, 1}}, {"c", {1.0, 0.0}}}})}}},
          {"forcing", {{"type", "none"}}}}},
        {"eval_times", {0.25}}};
    std::ofstream(dir / "heat.json") << heat.dump(2);
    run_cli("solve --config " + (dir / "heat.json").string() + " --out " + dir.string(), &code);
    REQUIRE(code == 0);
    auto snap = io::snapshot_from_json(io::json::parse(slurp(dir / "snapshot_000.json")));
    spec::Mode m;
    m.dim = 2;
    m.n = {2, 1, 0, 0, 0, 0};
    CHECK(rel_err(snap.field.at(m).real(), std::exp(-5.0 * 0.25)) < 1e-12);

    // constant forcing: t^rho E_{rho,rho+1}(-lambda t^rho), frozen oracle value
    io::json forced = heat;
    forced["problem"]["rho"] = 0.6;
    forced["problem"]["phi"]["modes"] = io::json::array();
    forced["problem"]["forcing"] = {
        {"type", "constant"},
        {"modes", io::json::array({{{"n", {2, 0}}, {"c", {1.0, 0.0}}}})}};
    forced["eval_times"] = {0.8};
    std::ofstream(dir / "forced.json") << forced.dump(2);
    run_cli("solve --config " + (dir / "forced.json").string() + " --out " + dir.string(), &code);
    REQUIRE(code == 0);
    snap = io::snapshot_from_json(io::json::parse(slurp(dir / "snapshot_000.json")));
    m.n = {2, 0, 0, 0, 0, 0};
    CHECK(rel_err(snap.field.at(m).real(), 2.15771034884929214e-01) < 1e-12);
}

TEST_CASE("cli: disabled verification checks pass vacuously") {
    auto dir = temp_dir("subdiff_vacuous");
    auto j = io::json::parse(slurp((fs::path(kConfigDir) / "verify_demo.json").string()));
    j["verify"]["residual"]["enabled"] = false;
    j["verify"]["initial_limit"]["enabled"] = false;
    j["verify"]["kernel_estimates"]["enabled"] = false;
    std::ofstream(dir / "cfg.json") << j.dump(2);
    int code = -1;
    run_cli("verify --config " + (dir / "cfg.json").string() + " --out " + dir.string(), &code);
    CHECK(code == 0);
    auto summary = io::json::parse(slurp(dir / "verify_summary.json"));
    CHECK(summary["all_pass"] == true);
}

TEST_CASE("cli: verify demo config passes; corrupted snapshot fails") {
    auto dir = temp_dir("subdiff_verify");
    int code = 0;
    const std::string cfg = (fs::path(kConfigDir) / "verify_demo.json").string();
    run_cli("--quiet verify --config " + cfg + " --out " + dir.string(), &code);
    CHECK(code == 0);
    CHECK(fs::exists(dir / "residual_report.json"));
    CHECK(fs::exists(dir / "kernel_report.txt"));
    auto summary = io::json::parse(slurp(dir / "verify_summary.json"));
    CHECK(summary["all_pass"] == true);

    // a corrupted snapshot file makes verification exit non-zero
    std::ofstream(dir / "corrupt.json") << "{\"t\": 0.5, \"rho\":";
    auto j = io::json::parse(slurp(cfg));
    j["verify"]["snapshots"] = {(dir / "corrupt.json").string()};
    j["verify"]["kernel_estimates"]["enabled"] = false;
    j["verify"]["initial_limit"]["enabled"] = false;
    std::ofstream(dir / "cfg.json") << j.dump(2);
    run_cli("verify --config " + (dir / "cfg.json").string() + " --out " + dir.string(), &code);
    CHECK(code == 2);
}
