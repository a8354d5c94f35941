#pragma once

#include "subdiff/solver.hpp"

#include <span>
#include <vector>

namespace subdiff::verify_ns {

// Grid-L2 PDE residual per snapshot time, with the time-fractional
// derivative taken by the Grunwald-Letnikov oracle (independent of the
// Mittag-Leffler path that produced the solution).
struct ResidualReport {
    std::vector<double> times;
    std::vector<double> residual_l2; // || d_t^rho u + A u - f ||_{L2} per time
    std::vector<double> solution_l2; // || u ||_{L2} per time, same normalization
    double dt_used = 0.0;
    double expected_order = 1.0; // GL: 1; classical rho = 1 path: 2
};

// Deviation || t^{1-rho} u(.,t) - phi/Gamma(rho) ||_{L2} along probe times
// decreasing toward zero.
struct InitialLimitReport {
    std::vector<double> probe_times; // strictly decreasing
    std::vector<double> deviation;
    double fitted_decay_exponent = 0.0; // slope of log(dev) vs log(t) on the tail
    std::size_t monotone_tail_start = 0; // deviations non-increasing from this index on
};

// Empirical truncation differences against the kernel-estimate tail bound.
struct TruncationReport {
    std::vector<double> band_K_values;   // increasing
    std::vector<double> snapshot_diffs;  // sup-norm diff between consecutive bands
    std::vector<double> bound_estimates; // analytic tail bound from each K
};

// Per (rho, epsilon) sweep of the coarse kernel estimate over lambda decades.
struct KernelSuiteReport {
    struct Row {
        double rho = 0.0;
        double epsilon = 0.0;
        double theory_C = 0.0;            // padded sup of v^{1-eps}|E_{rho,rho}(-v)|
        std::vector<double> decade_sup;   // empirical constant per lambda decade
        std::vector<bool> decade_covers_peak;
        double plateau_variation = 0.0;   // relative spread over peak-covering decades
        bool uniformly_bounded = false;   // every decade_sup <= theory_C
        bool pass = false;
    };
    std::vector<Row> rows;
    bool all_pass() const;
};

// snapshots must sit on the uniform grid t_m = m dt, m = 1..M. The known
// t^{rho-1}(c0 + c1 t^rho + c2 t^{2rho}) short-time structure is fitted from
// the first three snapshots per mode and differentiated analytically; the
// GL oracle handles the remainder. rho = 1 uses classical centered
// differences instead.
ResidualReport residual_check(std::span<const solve_ns::SolutionSnapshot> snapshots,
                              const solve_ns::Forcing& forcing, double rho);

InitialLimitReport initial_limit_check(const solve_ns::ProblemSpec& problem,
                                       std::span<const double> probe_times,
                                       const solve_ns::DuhamelQuadrature& quad);
// default probes 2^{-j}, j = 3..20
std::vector<double> default_probe_times();

TruncationReport truncation_study(const solve_ns::ProblemSpec& problem,
                                  std::span<const double> band_K_values, double t,
                                  const solve_ns::DuhamelQuadrature& quad);

KernelSuiteReport kernel_estimate_suite(std::span<const double> rho_values,
                                        std::span<const double> epsilon_values);

} // namespace subdiff::verify_ns
