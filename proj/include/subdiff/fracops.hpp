#pragma once

#include <complex>
#include <vector>

namespace subdiff::frac {

// Uniformly sampled signal h(t0 + k dt). A non-finite sample at t = 0
// marks an integrable power singularity h ~ c t^p, p in (-1, 0); the
// operators then split off the power part fitted from the first two
// finite samples and treat it analytically (exact for pure powers).
template <class T>
struct Signal {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<T> samples;

    std::size_t size() const { return samples.size(); }
    double time(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
};

using TimeSignal = Signal<double>;
using ComplexSignal = Signal<std::complex<double>>;

// Order parameter: order < 0 selects fractional integration of |order|,
// order in (0, 1] a derivative.
struct FracOrderParam {
    double order = 0.0;
};

// Riemann-Liouville fractional integral of order -sigma.order > 0, based at
// t = 0, evaluated at the sample points by product-trapezoidal quadrature
// (piecewise-linear signal against exact kernel moments). Second-order
// accurate in dt for smooth signals.
TimeSignal rl_integral(const TimeSignal& h, FracOrderParam sigma);
ComplexSignal rl_integral(const ComplexSignal& h, FracOrderParam sigma);

// Riemann-Liouville derivative: d/dt applied to the integral of order
// rho - 1. Centered differences inside, one-sided second-order stencils at
// the ends. The t = 0 sample is outside the accuracy claims (the kernel is
// singular there).
TimeSignal rl_derivative(const TimeSignal& h, FracOrderParam rho);
ComplexSignal rl_derivative(const ComplexSignal& h, FracOrderParam rho);

// Caputo derivative: fractional integral of order rho - 1 applied to the
// finite-difference derivative. Requires finite samples throughout.
TimeSignal caputo_derivative(const TimeSignal& h, FracOrderParam rho);
ComplexSignal caputo_derivative(const ComplexSignal& h, FracOrderParam rho);

// Grunwald-Letnikov approximation dt^{-rho} sum_j w_j h(t_{m-j}) with
// w_0 = 1, w_j = w_{j-1} (1 - (rho+1)/j). First-order accurate; serves as
// the independent oracle for the verification harness.
TimeSignal gl_derivative(const TimeSignal& h, FracOrderParam rho);
ComplexSignal gl_derivative(const ComplexSignal& h, FracOrderParam rho);

// GL weights w_0..w_{n-1}.
std::vector<double> gl_weights(double rho, std::size_t n);

// Serial reference implementations (independent direct loops, no pow
// tables); used by the tests and the benchmark.
TimeSignal rl_integral_ref(const TimeSignal& h, FracOrderParam sigma);
TimeSignal gl_derivative_ref(const TimeSignal& h, FracOrderParam rho);

} // namespace subdiff::frac
