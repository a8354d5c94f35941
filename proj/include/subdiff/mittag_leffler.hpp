#pragma once

#include <span>
#include <vector>

namespace subdiff::ml {

// Order pair of the two-parameter Mittag-Leffler function E_{rho,mu}.
struct MLParams {
    double rho; // 0 < rho <= 1
    double mu;  // mu > 0
    void validate() const; // throws std::domain_error
};

// A certified-on-grid bound constant for the kernel estimates.
// m1_global:  |E_{rho,rho}(-t)| <= C / (1 + t^2) on the verification grid.
// m2_coarse:  |t^{rho-1} E_{rho,rho}(-lambda t^rho)| <= C lambda^{eps-1} t^{eps rho - 1}.
struct KernelBound {
    enum class Regime { m1_global, m2_coarse };
    double constant_C = 0.0;
    Regime regime = Regime::m1_global;
    double epsilon = 0.0; // only meaningful for m2_coarse
};

// E_{rho,mu}(z) = sum_k z^k / Gamma(rho k + mu) on the real line.
// Accuracy: relative error <= 1e-12 for |z| <= 5 and <= 1e-9 on
// z in [-1e8, 5]. Internally switches between the defining series
// (compensated quad-precision accumulation), an integral representation,
// and the negative-axis asymptotic expansion; the switch points are
// seamless at these tolerances.
// Throws std::domain_error for invalid (rho, mu), std::range_error when
// the value overflows double (large positive z).
double ml_eval(const MLParams& params, double z);
double ml_eval(double rho, double mu, double z);

// Leading negative-axis term: E_{rho,rho}(-t) ~ -t^{-2}/Gamma(-rho).
// Meaningful for large t (the O(t^{-3}) correction decides how large;
// t >= 10 gives a few digits, t >= 1e3 about six).
// rho = 1 is a pole of Gamma(-rho) and is rejected.
double ml_neg_asymptotic(double rho, double t);

// Solution kernel t^{rho-1} E_{rho,rho}(-lambda t^rho); equals
// exp(-lambda t) at rho = 1.
double propagator(double rho, double lambda, double t);

// C = 1.01 * sup over the grid {0} U {10^(-6 + j/64), j = 0..768} of
// (1 + t^2)|E_{rho,rho}(-t)|. The 1.01 pad makes the grid inequality
// strict at every grid point.
KernelBound bound_constant_m1(double rho);

// Smallest C' with |propagator(rho,lambda,t)| <= C' lambda^{eps-1} t^{eps rho-1}
// at every grid point. Empty grid or non-positive entries are argument errors.
KernelBound check_m2(double rho, double epsilon, double lambda,
                     std::span<const double> t_grid);

// The m1 verification grid (shared with bound_constant_m1): t = 0 plus a
// logarithmic grid, 64 points per decade on [1e-6, 1e6].
std::vector<double> m1_grid();

} // namespace subdiff::ml
