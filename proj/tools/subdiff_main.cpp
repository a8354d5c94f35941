#include "subdiff/io.hpp"
#include "subdiff/mittag_leffler.hpp"
#include "subdiff/version.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace subdiff;

namespace {

// 0 success, 2 validation, 3 numeric domain, 4 check failure
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitCheckFailed = 4;

struct Options {
    std::string config_path;
    std::string out_dir;
    bool quiet = false;
};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

void note(const Options& opt, const std::string& msg) {
    if (!opt.quiet) std::cerr << msg << "\n";
}

int cmd_solve(const Options& opt) {
    io::RunConfig cfg = io::load_config(opt.config_path);
    if (!opt.out_dir.empty()) cfg.output.dir = opt.out_dir;
    fs::create_directories(cfg.output.dir);

    std::vector<double> times = cfg.eval_times;
    std::sort(times.begin(), times.end());
    auto snaps = solve_ns::solve(cfg.problem, times, cfg.quadrature, cfg.output.grid_m);

    std::vector<std::string> names;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        char idx[16];
        std::snprintf(idx, sizeof(idx), "%03zu", i);
        const std::string base = cfg.output.prefix + "_" + idx;
        write_file(fs::path(cfg.output.dir) / (base + ".json"),
                   io::snapshot_to_json(snaps[i]).dump(2) + "\n");
        names.push_back(base + ".json");
        if (snaps[i].grid) {
            write_file(fs::path(cfg.output.dir) / (base + "_grid.csv"),
                       io::grid_to_csv(*snaps[i].grid));
            names.push_back(base + "_grid.csv");
        }
    }
    write_file(fs::path(cfg.output.dir) / "manifest.json",
               io::make_manifest(cfg, names).dump(2) + "\n");
    note(opt, "wrote " + std::to_string(snaps.size()) + " snapshot(s) to " + cfg.output.dir);
    return 0;
}

int cmd_verify(const Options& opt) {
    io::RunConfig cfg = io::load_config(opt.config_path);
    if (!opt.out_dir.empty()) cfg.output.dir = opt.out_dir;
    fs::create_directories(cfg.output.dir);
    bool all_pass = true;
    io::json summary = io::json::object();

    if (cfg.verify.residual_enabled) {
        auto run_residual = [&](int samples) {
            const double dt = cfg.problem.horizon_T / samples;
            std::vector<solve_ns::SolutionSnapshot> snaps;
            if (!cfg.verify.snapshot_files.empty() && samples == cfg.verify.residual_samples) {
                for (const std::string& f : cfg.verify.snapshot_files) {
                    std::ifstream in(fs::path(cfg.output.dir) / f);
                    std::ifstream in2(f);
                    std::ifstream& use = in ? in : in2;
                    if (!use) throw std::invalid_argument("cannot open snapshot file: " + f);
                    io::json j;
                    try {
                        j = io::json::parse(use);
                    } catch (const io::json::parse_error& e) {
                        throw std::invalid_argument(std::string("snapshot parse error in ") + f +
                                                    ": " + e.what());
                    }
                    snaps.push_back(io::snapshot_from_json(j));
                }
            } else {
                std::vector<double> times(samples);
                for (int m = 1; m <= samples; ++m) times[m - 1] = dt * m;
                snaps = solve_ns::solve(cfg.problem, times, cfg.quadrature);
            }
            return verify_ns::residual_check(snaps, cfg.problem.forcing, cfg.problem.rho);
        };
        auto worst_ratio = [](const verify_ns::ResidualReport& r) {
            double w = 0.0;
            for (std::size_t i = 0; i < r.times.size(); ++i)
                if (r.solution_l2[i] > 0.0)
                    w = std::max(w, r.residual_l2[i] / r.solution_l2[i]);
            return w;
        };
        auto fine = run_residual(cfg.verify.residual_samples);
        auto coarse = run_residual(cfg.verify.residual_samples / 2);
        const double ratio_fine = worst_ratio(fine), ratio_coarse = worst_ratio(coarse);
        const double order = std::log2(ratio_coarse / ratio_fine);
        const bool tol_ok = ratio_fine <= cfg.verify.residual_tolerance;
        const bool order_ok =
            order >= cfg.verify.residual_order_lo && order <= cfg.verify.residual_order_hi;
        // classical path converges faster than the GL window demands
        const bool pass = tol_ok && (order_ok || order >= cfg.verify.residual_order_hi);
        all_pass = all_pass && pass;
        write_file(fs::path(cfg.output.dir) / "residual_report.json",
                   io::report_to_json(fine).dump(2) + "\n");
        write_file(fs::path(cfg.output.dir) / "residual_report.txt", io::report_to_text(fine));
        summary["residual"] = {{"worst_ratio", ratio_fine},
                               {"observed_order", order},
                               {"pass", pass}};
        note(opt, std::string("residual: ") + (pass ? "pass" : "FAIL"));
    }

    if (cfg.verify.initial_limit_enabled) {
        std::vector<double> probes;
        for (int j = cfg.verify.initial_j_min; j <= cfg.verify.initial_j_max; ++j)
            probes.push_back(std::ldexp(1.0, -j));
        auto rep = verify_ns::initial_limit_check(cfg.problem, probes, cfg.quadrature);
        // pass when the deviations settle into a monotone decreasing tail
        const bool pass = rep.monotone_tail_start <= rep.deviation.size() / 2 &&
                          rep.deviation.back() <= rep.deviation.front();
        all_pass = all_pass && pass;
        write_file(fs::path(cfg.output.dir) / "initial_limit_report.json",
                   io::report_to_json(rep).dump(2) + "\n");
        write_file(fs::path(cfg.output.dir) / "initial_limit_report.txt", io::report_to_text(rep));
        summary["initial_limit"] = {{"fitted_decay_exponent", rep.fitted_decay_exponent},
                                    {"pass", pass}};
        note(opt, std::string("initial-limit: ") + (pass ? "pass" : "FAIL"));
    }

    if (cfg.verify.truncation_enabled && cfg.verify.truncation_band_k.size() >= 2) {
        auto rep = verify_ns::truncation_study(cfg.problem, cfg.verify.truncation_band_k,
                                               cfg.verify.truncation_t, cfg.quadrature);
        bool pass = true;
        for (std::size_t i = 0; i < rep.snapshot_diffs.size(); ++i)
            if (rep.snapshot_diffs[i] > rep.bound_estimates[i] + 1e-14) pass = false;
        all_pass = all_pass && pass;
        write_file(fs::path(cfg.output.dir) / "truncation_report.json",
                   io::report_to_json(rep).dump(2) + "\n");
        write_file(fs::path(cfg.output.dir) / "truncation_report.txt", io::report_to_text(rep));
        summary["truncation"] = {{"pass", pass}};
        note(opt, std::string("truncation: ") + (pass ? "pass" : "FAIL"));
    }

    if (cfg.verify.kernel_enabled) {
        auto rep = verify_ns::kernel_estimate_suite(cfg.verify.kernel_rho, cfg.verify.kernel_epsilon);
        const bool pass = rep.all_pass();
        all_pass = all_pass && pass;
        write_file(fs::path(cfg.output.dir) / "kernel_report.json",
                   io::report_to_json(rep).dump(2) + "\n");
        write_file(fs::path(cfg.output.dir) / "kernel_report.txt", io::report_to_text(rep));
        summary["kernel_estimates"] = {{"pass", pass}};
        note(opt, std::string("kernel estimates: ") + (pass ? "pass" : "FAIL"));
    }

    summary["all_pass"] = all_pass;
    write_file(fs::path(cfg.output.dir) / "verify_summary.json", summary.dump(2) + "\n");
    return all_pass ? 0 : kExitCheckFailed;
}

int cmd_ml_table(double rho, double mu, double z_min, double z_max, int count) {
    if (count < 2) throw std::invalid_argument("ml-table: count must be >= 2");
    if (!(z_min < z_max)) throw std::invalid_argument("ml-table: require z_min < z_max");
    if (!(rho > 0.0) || rho > 1.0) throw std::invalid_argument("ml-table: rho must lie in (0, 1]");
    if (!(mu > 0.0)) throw std::invalid_argument("ml-table: mu must be positive");
    std::string out = "z,E\n";
    for (int i = 0; i < count; ++i) {
        const double z = z_min + (z_max - z_min) * i / static_cast<double>(count - 1);
        out += io::format_double(z) + "," + io::format_double(ml::ml_eval(rho, mu, z)) + "\n";
    }
    std::cout << out;
    return 0;
}

int cmd_fracop(const std::string& op, double order, const std::string& input_path) {
    std::string text;
    if (input_path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else {
        std::ifstream in(input_path);
        if (!in) throw std::invalid_argument("fracop: cannot open " + input_path);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    frac::TimeSignal h = io::signal_from_csv(text);
    frac::TimeSignal out;
    if (op == "rl-integral")
        out = frac::rl_integral(h, frac::FracOrderParam{order});
    else if (op == "rl-derivative")
        out = frac::rl_derivative(h, frac::FracOrderParam{order});
    else if (op == "caputo")
        out = frac::caputo_derivative(h, frac::FracOrderParam{order});
    else if (op == "gl")
        out = frac::gl_derivative(h, frac::FracOrderParam{order});
    else
        throw std::invalid_argument("fracop: unknown operator '" + op + "'");
    std::cout << io::signal_to_csv(out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourier-Mittag-Leffler solver for the time-fractional subdiffusion equation "
                 "on the torus"};
    app.set_version_flag("--version", kVersion);
    Options opt;
    app.add_flag("--quiet", opt.quiet, "suppress progress output");

    auto* solve_cmd = app.add_subcommand("solve", "solve a problem from a JSON config");
    solve_cmd->add_option("--config", opt.config_path, "config file")->required();
    solve_cmd->add_option("--out", opt.out_dir, "output directory (overrides config)");

    auto* verify_cmd = app.add_subcommand("verify", "run the verification checks of a config");
    verify_cmd->add_option("--config", opt.config_path, "config file")->required();
    verify_cmd->add_option("--out", opt.out_dir, "output directory (overrides config)");

    double rho = 0.5, mu = 1.0, z_min = -5.0, z_max = 0.0;
    int count = 11;
    auto* ml_cmd = app.add_subcommand("ml-table", "tabulate E_{rho,mu}(z) as CSV on stdout");
    ml_cmd->add_option("--rho", rho, "order rho in (0, 1]")->required();
    ml_cmd->add_option("--mu", mu, "second parameter mu > 0")->required();
    ml_cmd->add_option("--zmin", z_min, "left end")->required();
    ml_cmd->add_option("--zmax", z_max, "right end")->required();
    ml_cmd->add_option("--count", count, "number of points (>= 2)")->required();

    std::string op, input_path = "-";
    double order = 0.5;
    auto* frac_cmd = app.add_subcommand("fracop", "apply a fractional operator to a CSV signal");
    frac_cmd->add_option("--op", op, "rl-integral | rl-derivative | caputo | gl")->required();
    frac_cmd->add_option("--order", order, "operator order")->required();
    frac_cmd->add_option("--input", input_path, "CSV file with header t,value ('-' = stdin)");

    app.require_subcommand(1);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (solve_cmd->parsed()) return cmd_solve(opt);
        if (verify_cmd->parsed()) return cmd_verify(opt);
        if (ml_cmd->parsed()) return cmd_ml_table(rho, mu, z_min, z_max, count);
        if (frac_cmd->parsed()) return cmd_fracop(op, order, input_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::range_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
