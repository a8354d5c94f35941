#pragma once

#include "subdiff/fracops.hpp"
#include "subdiff/solver.hpp"
#include "subdiff/verify.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace subdiff::io {

using json = nlohmann::json;

// %.17g, locale-independent: guarantees exact double round-trips in CSV.
std::string format_double(double v);

json field_to_json(const spec::SpectralField& f);
spec::SpectralField field_from_json(const json& j);
std::string field_to_csv(const spec::SpectralField& f);
std::string grid_to_csv(const spec::PhysicalGrid& g);

json snapshot_to_json(const solve_ns::SolutionSnapshot& s);
solve_ns::SolutionSnapshot snapshot_from_json(const json& j);

json report_to_json(const verify_ns::ResidualReport& r);
json report_to_json(const verify_ns::InitialLimitReport& r);
json report_to_json(const verify_ns::TruncationReport& r);
json report_to_json(const verify_ns::KernelSuiteReport& r);
std::string report_to_text(const verify_ns::ResidualReport& r);
std::string report_to_text(const verify_ns::InitialLimitReport& r);
std::string report_to_text(const verify_ns::TruncationReport& r);
std::string report_to_text(const verify_ns::KernelSuiteReport& r);

struct VerifySettings {
    bool residual_enabled = true;
    int residual_samples = 4096;
    double residual_tolerance = 5e-3;       // residual L2 <= tol * solution L2
    double residual_order_lo = 0.8;
    double residual_order_hi = 1.2;
    bool initial_limit_enabled = true;
    int initial_j_min = 3;
    int initial_j_max = 20;
    bool truncation_enabled = false;
    std::vector<double> truncation_band_k;
    double truncation_t = 1.0;
    bool kernel_enabled = true;
    std::vector<double> kernel_rho = {0.3, 0.5, 0.7};
    std::vector<double> kernel_epsilon = {0.25, 0.5, 0.75};
    std::vector<std::string> snapshot_files; // optional: verify stored snapshots instead
};

struct OutputSettings {
    std::string dir = ".";
    std::string prefix = "snapshot";
    int grid_m = 0; // > 0: synthesize and write grid CSVs
};

struct RunConfig {
    solve_ns::ProblemSpec problem;
    std::vector<double> eval_times;
    solve_ns::DuhamelQuadrature quadrature;
    VerifySettings verify;
    OutputSettings output;
    std::uint64_t seed = 0;
};

// Strict parse: unknown keys are rejected with their JSON path; all numeric
// domains are validated by the consuming modules. Accepts either a bare
// config or a manifest produced by a previous run (its "config" entry).
RunConfig config_from_json(const json& j);
json config_to_json(const RunConfig& c);
RunConfig load_config(const std::string& path);

json make_manifest(const RunConfig& c, const std::vector<std::string>& snapshot_names);

// Deterministic synthetic field with |n|^{-s} moduli and seed-controlled
// phases, conjugate-symmetric (real-valued in physical space).
spec::SpectralField synthetic_decay_field(int dim_N, double band_K, double s, double amplitude,
                                          std::uint64_t seed);

// Time signal CSV for the fracop subcommand: header "t,value" (or
// "t,re,im"), uniformly spaced, starting at 0.
frac::TimeSignal signal_from_csv(const std::string& text);
std::string signal_to_csv(const frac::TimeSignal& s);

} // namespace subdiff::io
