#include "subdiff/io.hpp"

#include "subdiff/version.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace subdiff::io {

namespace {

using cplx = std::complex<double>;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw std::invalid_argument("config error at " + path + ": " + msg);
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) ok = true;
        if (!ok) fail(path + "/" + it.key(), "unknown key");
    }
}

const json& need(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing key '") + key + "'");
    return *it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

// splitmix64; phases must be identical across platforms and runs
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double unit_double(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

spec::SpectralField field_from_config(const json& j, const std::string& path, int dim_N,
                                      double band_K) {
    check_keys(j, path, {"type", "modes", "s", "amplitude", "seed"});
    const std::string type = need(j, path, "type").get<std::string>();
    if (type == "modes") {
        spec::SpectralField f;
        f.dim_N = dim_N;
        f.band_K = band_K;
        const json& arr = need(j, path, "modes");
        if (!arr.is_array()) fail(path + "/modes", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string mp = path + "/modes/" + std::to_string(i);
            check_keys(arr[i], mp, {"n", "c"});
            const json& nv = need(arr[i], mp, "n");
            const json& cv = need(arr[i], mp, "c");
            if (!nv.is_array() || static_cast<int>(nv.size()) != dim_N)
                fail(mp + "/n", "expected an integer array of length dim");
            if (!cv.is_array() || cv.size() != 2) fail(mp + "/c", "expected [re, im]");
            spec::Mode m;
            m.dim = dim_N;
            for (int d = 0; d < dim_N; ++d) m.n[d] = nv[d].get<int>();
            f.modes.push_back(m);
            f.coeffs.emplace_back(as_number(cv[0], mp), as_number(cv[1], mp));
        }
        f.sort_canonical();
        f.validate();
        return f;
    }
    if (type == "decay") {
        const double s = as_number(need(j, path, "s"), path + "/s");
        const double amp = j.contains("amplitude") ? as_number(j["amplitude"], path) : 1.0;
        const std::uint64_t seed =
            j.contains("seed") ? j["seed"].get<std::uint64_t>() : std::uint64_t{1};
        return synthetic_decay_field(dim_N, band_K, s, amp, seed);
    }
    fail(path + "/type", "expected 'modes' or 'decay'");
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json field_to_json(const spec::SpectralField& f) {
    json modes = json::array();
    for (std::size_t i = 0; i < f.size(); ++i) {
        json n = json::array();
        for (int d = 0; d < f.dim_N; ++d) n.push_back(f.modes[i].n[d]);
        modes.push_back({{"n", n}, {"c", {f.coeffs[i].real(), f.coeffs[i].imag()}}});
    }
    return {{"dim", f.dim_N}, {"band_k", f.band_K}, {"modes", modes}};
}

spec::SpectralField field_from_json(const json& j) {
    check_keys(j, "field", {"dim", "band_k", "modes"});
    const int dim = need(j, "field", "dim").get<int>();
    const double band = as_number(need(j, "field", "band_k"), "field/band_k");
    json wrap = {{"type", "modes"}, {"modes", need(j, "field", "modes")}};
    return field_from_config(wrap, "field", dim, band);
}

std::string field_to_csv(const spec::SpectralField& f) {
    std::string out;
    for (int d = 1; d <= f.dim_N; ++d) out += "n" + std::to_string(d) + ",";
    out += "re,im\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (int d = 0; d < f.dim_N; ++d) out += std::to_string(f.modes[i].n[d]) + ",";
        out += format_double(f.coeffs[i].real()) + "," + format_double(f.coeffs[i].imag()) + "\n";
    }
    return out;
}

std::string grid_to_csv(const spec::PhysicalGrid& g) {
    std::string out;
    for (int d = 1; d <= g.dim_N; ++d) out += "k" + std::to_string(d) + ",";
    out += "re,im\n";
    std::array<int, spec::kMaxDim> idx{};
    for (std::size_t p = 0; p < g.samples.size(); ++p) {
        std::size_t rem = p;
        for (int d = g.dim_N - 1; d >= 0; --d) {
            idx[d] = static_cast<int>(rem % g.points_per_axis);
            rem /= g.points_per_axis;
        }
        for (int d = 0; d < g.dim_N; ++d) out += std::to_string(idx[d]) + ",";
        out += format_double(g.samples[p].real()) + "," + format_double(g.samples[p].imag()) + "\n";
    }
    return out;
}

json snapshot_to_json(const solve_ns::SolutionSnapshot& s) {
    return {{"t", s.t},
            {"rho", s.rho},
            {"regularization_factor", s.regularization_factor},
            {"field", field_to_json(s.field)}};
}

solve_ns::SolutionSnapshot snapshot_from_json(const json& j) {
    check_keys(j, "snapshot", {"t", "rho", "regularization_factor", "field"});
    solve_ns::SolutionSnapshot s;
    s.t = as_number(need(j, "snapshot", "t"), "snapshot/t");
    s.rho = as_number(need(j, "snapshot", "rho"), "snapshot/rho");
    s.regularization_factor =
        as_number(need(j, "snapshot", "regularization_factor"), "snapshot/regularization_factor");
    s.field = field_from_json(need(j, "snapshot", "field"));
    if (!(s.t > 0.0)) fail("snapshot/t", "must be positive");
    return s;
}

json report_to_json(const verify_ns::ResidualReport& r) {
    return {{"kind", "residual"},
            {"dt", r.dt_used},
            {"expected_order", r.expected_order},
            {"times", r.times},
            {"residual_l2", r.residual_l2},
            {"solution_l2", r.solution_l2}};
}

json report_to_json(const verify_ns::InitialLimitReport& r) {
    return {{"kind", "initial_limit"},
            {"probe_times", r.probe_times},
            {"deviation", r.deviation},
            {"fitted_decay_exponent", r.fitted_decay_exponent},
            {"monotone_tail_start", r.monotone_tail_start}};
}

json report_to_json(const verify_ns::TruncationReport& r) {
    return {{"kind", "truncation"},
            {"band_k_values", r.band_K_values},
            {"snapshot_diffs", r.snapshot_diffs},
            {"bound_estimates", r.bound_estimates}};
}

json report_to_json(const verify_ns::KernelSuiteReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"rho", row.rho},
                        {"epsilon", row.epsilon},
                        {"theory_C", row.theory_C},
                        {"decade_sup", row.decade_sup},
                        {"plateau_variation", row.plateau_variation},
                        {"uniformly_bounded", row.uniformly_bounded},
                        {"pass", row.pass}});
    }
    return {{"kind", "kernel_estimates"}, {"rows", rows}};
}

std::string report_to_text(const verify_ns::ResidualReport& r) {
    std::string out = "residual report (dt = " + format_double(r.dt_used) + ")\n";
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%14s %14s %14s %10s\n", "t", "residual_l2", "solution_l2",
                  "ratio");
    out += buf;
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        double ratio = r.solution_l2[i] > 0 ? r.residual_l2[i] / r.solution_l2[i] : 0.0;
        std::snprintf(buf, sizeof(buf), "%14.6e %14.6e %14.6e %10.3e\n", r.times[i],
                      r.residual_l2[i], r.solution_l2[i], ratio);
        out += buf;
    }
    return out;
}

std::string report_to_text(const verify_ns::InitialLimitReport& r) {
    std::string out = "initial-limit report (fitted decay exponent " +
                      format_double(r.fitted_decay_exponent) + ")\n";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%14s %14s\n", "t", "deviation");
    out += buf;
    for (std::size_t i = 0; i < r.probe_times.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%14.6e %14.6e\n", r.probe_times[i], r.deviation[i]);
        out += buf;
    }
    return out;
}

std::string report_to_text(const verify_ns::TruncationReport& r) {
    std::string out = "truncation report\n";
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%10s %14s %14s\n", "band_K", "diff_to_next", "tail_bound");
    out += buf;
    for (std::size_t i = 0; i < r.band_K_values.size(); ++i) {
        std::string diff = i < r.snapshot_diffs.size() ? format_double(r.snapshot_diffs[i]) : "-";
        std::snprintf(buf, sizeof(buf), "%10g %14s %14.6e\n", r.band_K_values[i], diff.c_str(),
                      r.bound_estimates[i]);
        out += buf;
    }
    return out;
}

std::string report_to_text(const verify_ns::KernelSuiteReport& r) {
    std::string out = "kernel estimate suite\n";
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%6s %8s %12s %12s %10s %6s\n", "rho", "eps", "theory_C",
                  "plateau_var", "bounded", "pass");
    out += buf;
    for (const auto& row : r.rows) {
        std::snprintf(buf, sizeof(buf), "%6g %8g %12.6e %12.3e %10s %6s\n", row.rho, row.epsilon,
                      row.theory_C, row.plateau_variation,
                      row.uniformly_bounded ? "yes" : "no", row.pass ? "yes" : "no");
        out += buf;
    }
    return out;
}

spec::SpectralField synthetic_decay_field(int dim_N, double band_K, double s, double amplitude,
                                          std::uint64_t seed) {
    spec::SpectralField f = spec::SpectralField::zeros(dim_N, band_K);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const spec::Mode& m = f.modes[i];
        const int n2 = m.norm2();
        if (n2 == 0) {
            f.coeffs[i] = cplx{amplitude, 0.0};
            continue;
        }
        // canonical representative of the pair {n, -n}: the lexicographically
        // larger one gets the phase, the other its conjugate
        const spec::Mode neg = m.negated();
        const bool canonical = neg < m;
        const spec::Mode& rep = canonical ? m : neg;
        std::uint64_t h = mix(seed);
        for (int d = 0; d < dim_N; ++d)
            h = mix(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(rep.n[d]) + (1 << 20)));
        const double theta = 2.0 * M_PI * unit_double(h);
        const double mag = amplitude * std::pow(static_cast<double>(n2), -0.5 * s);
        f.coeffs[i] = std::polar(mag, canonical ? theta : -theta);
    }
    return f;
}

RunConfig config_from_json(const json& root) {
    const json* cfg = &root;
    if (root.is_object() && root.contains("tool") && root.contains("config"))
        cfg = &root["config"]; // a manifest: re-ingest its embedded config
    const json& j = *cfg;
    check_keys(j, "", {"problem", "eval_times", "quadrature", "verify", "output", "seed"});

    RunConfig c;
    const json& p = need(j, "", "problem");
    check_keys(p, "problem", {"dim", "rho", "horizon_t", "band_k", "phi", "forcing"});
    c.problem.dim_N = need(p, "problem", "dim").get<int>();
    c.problem.rho = as_number(need(p, "problem", "rho"), "problem/rho");
    c.problem.horizon_T = as_number(need(p, "problem", "horizon_t"), "problem/horizon_t");
    const double band_K = as_number(need(p, "problem", "band_k"), "problem/band_k");
    c.problem.phi = field_from_config(need(p, "problem", "phi"), "problem/phi", c.problem.dim_N,
                                      band_K);
    if (p.contains("forcing")) {
        const json& fj = p["forcing"];
        check_keys(fj, "problem/forcing",
                   {"type", "modes", "s", "amplitude", "seed", "closed_form", "dt", "frames"});
        const std::string type = need(fj, "problem/forcing", "type").get<std::string>();
        if (type == "none") {
            c.problem.forcing.kind = solve_ns::Forcing::Kind::none;
        } else if (type == "constant") {
            c.problem.forcing.kind = solve_ns::Forcing::Kind::constant;
            json wrap = {{"type", "modes"}, {"modes", need(fj, "problem/forcing", "modes")}};
            c.problem.forcing.field =
                field_from_config(wrap, "problem/forcing", c.problem.dim_N, band_K);
            if (fj.contains("closed_form"))
                c.problem.forcing.constant_closed_form = fj["closed_form"].get<bool>();
        } else if (type == "sampled") {
            c.problem.forcing.kind = solve_ns::Forcing::Kind::sampled;
            json wrap = {{"type", "modes"}, {"modes", need(fj, "problem/forcing", "modes")}};
            c.problem.forcing.field =
                field_from_config(wrap, "problem/forcing", c.problem.dim_N, band_K);
            c.problem.forcing.sample_dt = as_number(need(fj, "problem/forcing", "dt"),
                                                    "problem/forcing/dt");
            const json& frames = need(fj, "problem/forcing", "frames");
            if (!frames.is_array() || frames.empty())
                fail("problem/forcing/frames", "expected a non-empty array");
            for (std::size_t s = 0; s < frames.size(); ++s) {
                const json& fr = frames[s];
                if (!fr.is_array() || fr.size() != c.problem.forcing.field.size())
                    fail("problem/forcing/frames/" + std::to_string(s),
                         "frame size must match the mode list");
                std::vector<cplx> row;
                for (const json& e : fr) {
                    if (!e.is_array() || e.size() != 2)
                        fail("problem/forcing/frames/" + std::to_string(s), "entries are [re, im]");
                    row.emplace_back(e[0].get<double>(), e[1].get<double>());
                }
                c.problem.forcing.frames.push_back(std::move(row));
            }
        } else {
            fail("problem/forcing/type", "expected 'none', 'constant' or 'sampled'");
        }
    }

    const json& times = need(j, "", "eval_times");
    if (!times.is_array() || times.empty()) fail("eval_times", "expected a non-empty array");
    for (const json& t : times) c.eval_times.push_back(as_number(t, "eval_times"));

    if (j.contains("quadrature")) {
        const json& q = j["quadrature"];
        check_keys(q, "quadrature", {"scheme", "nodes_per_unit", "grading_exponent"});
        if (q.contains("scheme")) {
            const std::string s = q["scheme"].get<std::string>();
            if (s == "product_linear")
                c.quadrature.scheme = solve_ns::DuhamelQuadrature::Scheme::product_linear;
            else if (s == "graded_mesh")
                c.quadrature.scheme = solve_ns::DuhamelQuadrature::Scheme::graded_mesh;
            else
                fail("quadrature/scheme", "expected 'product_linear' or 'graded_mesh'");
        }
        if (q.contains("nodes_per_unit")) c.quadrature.nodes_per_unit = q["nodes_per_unit"].get<int>();
        if (q.contains("grading_exponent"))
            c.quadrature.grading_exponent = as_number(q["grading_exponent"], "quadrature");
    }

    if (j.contains("verify")) {
        const json& v = j["verify"];
        check_keys(v, "verify",
                   {"residual", "initial_limit", "truncation", "kernel_estimates", "snapshots"});
        if (v.contains("residual")) {
            const json& r = v["residual"];
            check_keys(r, "verify/residual", {"enabled", "samples", "tolerance", "order_window"});
            if (r.contains("enabled")) c.verify.residual_enabled = r["enabled"].get<bool>();
            if (r.contains("samples")) c.verify.residual_samples = r["samples"].get<int>();
            if (r.contains("tolerance"))
                c.verify.residual_tolerance = as_number(r["tolerance"], "verify/residual");
            if (r.contains("order_window")) {
                c.verify.residual_order_lo = as_number(r["order_window"][0], "verify/residual");
                c.verify.residual_order_hi = as_number(r["order_window"][1], "verify/residual");
            }
        }
        if (v.contains("initial_limit")) {
            const json& r = v["initial_limit"];
            check_keys(r, "verify/initial_limit", {"enabled", "j_min", "j_max"});
            if (r.contains("enabled")) c.verify.initial_limit_enabled = r["enabled"].get<bool>();
            if (r.contains("j_min")) c.verify.initial_j_min = r["j_min"].get<int>();
            if (r.contains("j_max")) c.verify.initial_j_max = r["j_max"].get<int>();
        }
        if (v.contains("truncation")) {
            const json& r = v["truncation"];
            check_keys(r, "verify/truncation", {"enabled", "band_k_values", "t"});
            if (r.contains("enabled")) c.verify.truncation_enabled = r["enabled"].get<bool>();
            if (r.contains("band_k_values"))
                for (const json& k : r["band_k_values"])
                    c.verify.truncation_band_k.push_back(as_number(k, "verify/truncation"));
            if (r.contains("t")) c.verify.truncation_t = as_number(r["t"], "verify/truncation");
        }
        if (v.contains("kernel_estimates")) {
            const json& r = v["kernel_estimates"];
            check_keys(r, "verify/kernel_estimates", {"enabled", "rho_values", "epsilon_values"});
            if (r.contains("enabled")) c.verify.kernel_enabled = r["enabled"].get<bool>();
            if (r.contains("rho_values")) {
                c.verify.kernel_rho.clear();
                for (const json& x : r["rho_values"])
                    c.verify.kernel_rho.push_back(as_number(x, "verify/kernel_estimates"));
            }
            if (r.contains("epsilon_values")) {
                c.verify.kernel_epsilon.clear();
                for (const json& x : r["epsilon_values"])
                    c.verify.kernel_epsilon.push_back(as_number(x, "verify/kernel_estimates"));
            }
        }
        if (v.contains("snapshots"))
            for (const json& s : v["snapshots"])
                c.verify.snapshot_files.push_back(s.get<std::string>());
    }

    if (j.contains("output")) {
        const json& o = j["output"];
        check_keys(o, "output", {"dir", "prefix", "grid_m"});
        if (o.contains("dir")) c.output.dir = o["dir"].get<std::string>();
        if (o.contains("prefix")) c.output.prefix = o["prefix"].get<std::string>();
        if (o.contains("grid_m")) c.output.grid_m = o["grid_m"].get<int>();
    }
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();

    c.problem.validate();
    c.quadrature.validate();
    return c;
}

json config_to_json(const RunConfig& c) {
    json p = {{"dim", c.problem.dim_N},
              {"rho", c.problem.rho},
              {"horizon_t", c.problem.horizon_T},
              {"band_k", c.problem.phi.band_K},
              {"phi", {{"type", "modes"}, {"modes", field_to_json(c.problem.phi)["modes"]}}}};
    switch (c.problem.forcing.kind) {
        case solve_ns::Forcing::Kind::none:
            p["forcing"] = {{"type", "none"}};
            break;
        case solve_ns::Forcing::Kind::constant:
            p["forcing"] = {{"type", "constant"},
                            {"modes", field_to_json(c.problem.forcing.field)["modes"]},
                            {"closed_form", c.problem.forcing.constant_closed_form}};
            break;
        case solve_ns::Forcing::Kind::sampled: {
            json frames = json::array();
            for (const auto& fr : c.problem.forcing.frames) {
                json row = json::array();
                for (const cplx& z : fr) row.push_back({z.real(), z.imag()});
                frames.push_back(row);
            }
            p["forcing"] = {{"type", "sampled"},
                            {"modes", field_to_json(c.problem.forcing.field)["modes"]},
                            {"dt", c.problem.forcing.sample_dt},
                            {"frames", frames}};
            break;
        }
    }
    json q = {{"scheme", c.quadrature.scheme == solve_ns::DuhamelQuadrature::Scheme::graded_mesh
                             ? "graded_mesh"
                             : "product_linear"},
              {"nodes_per_unit", c.quadrature.nodes_per_unit},
              {"grading_exponent", c.quadrature.grading_exponent}};
    json v = {{"residual",
               {{"enabled", c.verify.residual_enabled},
                {"samples", c.verify.residual_samples},
                {"tolerance", c.verify.residual_tolerance},
                {"order_window", {c.verify.residual_order_lo, c.verify.residual_order_hi}}}},
              {"initial_limit",
               {{"enabled", c.verify.initial_limit_enabled},
                {"j_min", c.verify.initial_j_min},
                {"j_max", c.verify.initial_j_max}}},
              {"truncation",
               {{"enabled", c.verify.truncation_enabled},
                {"band_k_values", c.verify.truncation_band_k},
                {"t", c.verify.truncation_t}}},
              {"kernel_estimates",
               {{"enabled", c.verify.kernel_enabled},
                {"rho_values", c.verify.kernel_rho},
                {"epsilon_values", c.verify.kernel_epsilon}}}};
    if (!c.verify.snapshot_files.empty()) v["snapshots"] = c.verify.snapshot_files;
    return {{"problem", p},
            {"eval_times", c.eval_times},
            {"quadrature", q},
            {"verify", v},
            {"output", {{"dir", c.output.dir}, {"prefix", c.output.prefix}, {"grid_m", c.output.grid_m}}},
            {"seed", c.seed}};
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in); // parse errors carry byte/line positions
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    return config_from_json(j);
}

json make_manifest(const RunConfig& c, const std::vector<std::string>& snapshot_names) {
    std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return {{"tool", "subdiff"},
            {"version", kVersion},
            {"created_utc", stamp}, // the only nondeterministic field
            {"config", config_to_json(c)},
            {"snapshots", snapshot_names}};
}

frac::TimeSignal signal_from_csv(const std::string& text) {
    frac::TimeSignal s;
    auto lines = split_lines(text);
    if (lines.empty()) throw std::invalid_argument("signal CSV: empty input");
    std::size_t start = 0;
    if (lines[0].find("t,") == 0 || lines[0] == "t,value") start = 1;
    std::vector<double> ts;
    for (std::size_t i = start; i < lines.size(); ++i) {
        double t, v;
        if (std::sscanf(lines[i].c_str(), "%lf,%lf", &t, &v) != 2)
            throw std::invalid_argument("signal CSV: bad row '" + lines[i] + "'");
        ts.push_back(t);
        s.samples.push_back(v);
    }
    if (ts.size() < 2) throw std::invalid_argument("signal CSV: need at least 2 samples");
    if (std::fabs(ts[0]) > 1e-12) throw std::invalid_argument("signal CSV: must start at t = 0");
    s.t0 = 0.0;
    s.dt = ts[1] - ts[0];
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (std::fabs(ts[i] - s.dt * static_cast<double>(i)) > 1e-9 * std::max(1.0, ts[i]))
            throw std::invalid_argument("signal CSV: non-uniform time grid");
    return s;
}

std::string signal_to_csv(const frac::TimeSignal& s) {
    std::string out = "t,value\n";
    for (std::size_t i = 0; i < s.samples.size(); ++i)
        out += format_double(s.dt * static_cast<double>(i)) + "," + format_double(s.samples[i]) +
               "\n";
    return out;
}

} // namespace subdiff::io
