#pragma once

#include "subdiff/spectral.hpp"

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace subdiff::solve_ns {

// Quadrature controls for the singular Duhamel convolution.
// graded_mesh (default): cells xi_i = t (i/M)^gamma with gamma = 2/rho
// unless overridden, which restores second order against the xi^{rho-1}
// endpoint. product_linear keeps uniform cells; exact kernel moments
// still handle the weight, but the Mittag-Leffler factor's xi^rho kink
// at 0 caps the observed order near 2*rho.
struct DuhamelQuadrature {
    enum class Scheme { product_linear, graded_mesh };
    Scheme scheme = Scheme::graded_mesh;
    int nodes_per_unit = 1024;      // cells for t <= 1; scaled with t above
    double grading_exponent = 0.0;  // 0 = automatic 2/rho (clamped to >= 1)
    void validate() const;
};

// Forcing term: absent, constant in time, or uniformly sampled in time.
// Sampled frames share the spatial mode layout of `field`.
struct Forcing {
    enum class Kind { none, constant, sampled };
    Kind kind = Kind::none;
    spec::SpectralField field;       // constant: F(x); sampled: mode layout + frame 0
    bool constant_closed_form = true; // constant forcing via t^rho E_{rho,rho+1}
    double sample_dt = 0.0;
    // frames[s] holds the coefficients at time s * sample_dt, parallel to field.modes
    std::vector<std::vector<std::complex<double>>> frames;
    double coverage() const; // last sampled time (inf for none/constant)
};

struct ProblemSpec {
    int dim_N = 0;
    double rho = 0.0;     // (0, 1]
    double horizon_T = 0.0;
    spec::SpectralField phi;
    Forcing forcing;
    void validate() const;
};

struct SolutionSnapshot {
    double t = 0.0;
    double rho = 0.0;
    spec::SpectralField field;
    double regularization_factor = 0.0; // t^{1-rho}; scaled coefficients stay bounded as t -> 0
    std::optional<spec::PhysicalGrid> grid;
};

// phi_n t^{rho-1} E_{rho,rho}(-lambda t^rho)
std::complex<double> homogeneous_mode(std::complex<double> phi_n, double lambda, double rho,
                                      double t);

// int_0^t f_n(t-xi) xi^{rho-1} E_{rho,rho}(-lambda xi^rho) dxi by product
// integration: f and the Mittag-Leffler factor interpolated linearly on
// each cell, the xi^{rho-1} weight integrated exactly.
std::complex<double> duhamel_mode(std::span<const std::complex<double>> f_samples,
                                  double sample_dt, double lambda, double rho, double t,
                                  const DuhamelQuadrature& quad);

// Closed form for f_n constant in time: f_n t^rho E_{rho,rho+1}(-lambda t^rho).
std::complex<double> duhamel_constant(std::complex<double> f_n, double lambda, double rho,
                                      double t);

// Assemble the solution series per mode at each requested time.
// eval_times must be sorted, positive, and <= horizon_T. grid_M > 0 adds
// physical-grid samples to every snapshot. Output is deterministic and
// independent of the number of threads.
std::vector<SolutionSnapshot> solve(const ProblemSpec& problem,
                                    std::span<const double> eval_times,
                                    const DuhamelQuadrature& quad, int grid_M = 0);

// rho = 1 specialization (classical heat flow); cross-check path.
std::vector<SolutionSnapshot> solve_classical_limit(const ProblemSpec& problem,
                                                    std::span<const double> eval_times,
                                                    const DuhamelQuadrature& quad,
                                                    int grid_M = 0);

} // namespace subdiff::solve_ns
