#include "subdiff/fracops.hpp"

#include "subdiff/gammafn.hpp"
#include "subdiff/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace subdiff::frac {

namespace {

bool finite_sample(double x) { return std::isfinite(x); }
bool finite_sample(const std::complex<double>& x) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
}

template <class T>
void require_uniform_base(const Signal<T>& h) {
    if (h.samples.empty()) throw std::domain_error("fracops: empty signal");
    if (!(h.dt > 0.0)) throw std::domain_error("fracops: dt must be positive");
    if (h.t0 != 0.0) throw std::domain_error("fracops: signals must start at t0 = 0");
}

// Product-trapezoidal quadrature for (1/Gamma(a)) int_0^{t_m} v(xi) (t_m-xi)^{a-1} dxi:
// v piecewise linear, kernel moments exact per cell.
template <class T>
std::vector<T> pt_integral(const std::vector<T>& v, double dt, double a) {
    const std::size_t n = v.size();
    std::vector<double> p0(n), p1(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = dt * static_cast<double>(i);
        p0[i] = std::pow(s, a);
        p1[i] = std::pow(s, a + 1.0);
    }
    const double inv_gamma = 1.0 / math::gamma_fn(a);
    std::vector<T> out(n);
    par::for_each_index(static_cast<std::ptrdiff_t>(n), true, [&](std::ptrdiff_t m) {
        T acc{};
        for (std::ptrdiff_t j = 0; j < m; ++j) {
            const std::ptrdiff_t i = m - j; // s2 = i dt, s1 = (i-1) dt
            const double m0 = (p0[i] - p0[i - 1]) / a;
            const double m1 = (p1[i] - p1[i - 1]) / (a + 1.0);
            const double s1 = dt * static_cast<double>(i - 1);
            acc += v[j + 1] * m0 + (v[j] - v[j + 1]) * ((m1 - s1 * m0) / dt);
        }
        out[m] = acc * inv_gamma;
    });
    return out;
}

// Power fit c xi^p through the first two finite samples; exact when the
// signal is a pure power.
template <class T>
void fit_power(const Signal<T>& h, T& c, double& p) {
    if (h.size() < 3) throw std::domain_error("fracops: singular signal needs at least 3 samples");
    const T h1 = h.samples[1], h2 = h.samples[2];
    if (!finite_sample(h1) || !finite_sample(h2) || std::abs(h1) == 0.0 || std::abs(h2) == 0.0)
        throw std::domain_error("fracops: cannot fit the singular part from samples 1, 2");
    p = std::log2(std::abs(h2) / std::abs(h1));
    if (p <= -1.0) throw std::domain_error("fracops: non-integrable origin singularity");
    if (p > 4.0) p = 4.0;
    c = h1 / std::pow(h.dt, p);
}

template <class T>
Signal<T> rl_integral_impl(const Signal<T>& h, FracOrderParam sigma) {
    require_uniform_base(h);
    if (!(sigma.order < 0.0)) throw std::domain_error("rl_integral: order must be negative");
    const double a = -sigma.order;
    const std::size_t n = h.size();

    Signal<T> out;
    out.t0 = 0.0;
    out.dt = h.dt;

    if (finite_sample(h.samples[0])) {
        out.samples = pt_integral(h.samples, h.dt, a);
        return out;
    }

    // singular origin: h = c xi^p + r, I^a[c xi^p] = c Gamma(p+1)/Gamma(p+1+a) t^{p+a}
    T c{};
    double p = 0.0;
    fit_power(h, c, p);
    std::vector<T> r(n);
    r[0] = T{};
    for (std::size_t k = 1; k < n; ++k)
        r[k] = h.samples[k] - c * std::pow(h.dt * static_cast<double>(k), p);
    out.samples = pt_integral(r, h.dt, a);
    const double fac = math::gamma_fn(p + 1.0) / math::gamma_fn(p + 1.0 + a);
    // p is fitted; when p + a is zero up to fit noise the power part is a
    // constant and pow(0, +/-1e-16) at the first sample must not kick in
    double q = p + a;
    if (std::fabs(q) < 1e-10) q = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        out.samples[k] += c * fac * std::pow(h.dt * static_cast<double>(k), q);
    return out;
}

// Second-order stencils; one-sided at the two ends.
template <class T>
Signal<T> differentiate(const Signal<T>& g) {
    const std::size_t n = g.size();
    Signal<T> out;
    out.t0 = g.t0;
    out.dt = g.dt;
    out.samples.resize(n);
    const double w = 1.0 / (2.0 * g.dt);
    out.samples[0] = (g.samples[0] * -3.0 + g.samples[1] * 4.0 - g.samples[2]) * w;
    for (std::size_t k = 1; k + 1 < n; ++k)
        out.samples[k] = (g.samples[k + 1] - g.samples[k - 1]) * w;
    out.samples[n - 1] =
        (g.samples[n - 1] * 3.0 - g.samples[n - 2] * 4.0 + g.samples[n - 3]) * w;
    return out;
}

template <class T>
Signal<T> rl_derivative_impl(const Signal<T>& h, FracOrderParam rho) {
    require_uniform_base(h);
    if (!(rho.order > 0.0) || rho.order > 1.0)
        throw std::domain_error("rl_derivative: order must lie in (0, 1]");
    if (h.size() < 3) throw std::domain_error("rl_derivative: need at least 3 samples");
    if (rho.order == 1.0) return differentiate(h);
    return differentiate(rl_integral_impl(h, FracOrderParam{rho.order - 1.0}));
}

template <class T>
Signal<T> caputo_impl(const Signal<T>& h, FracOrderParam rho) {
    require_uniform_base(h);
    if (!(rho.order > 0.0) || rho.order > 1.0)
        throw std::domain_error("caputo_derivative: order must lie in (0, 1]");
    if (h.size() < 3) throw std::domain_error("caputo_derivative: need at least 3 samples");
    if (!finite_sample(h.samples[0]))
        throw std::domain_error("caputo_derivative: requires finite samples");
    Signal<T> d = differentiate(h);
    if (rho.order == 1.0) return d;
    return rl_integral_impl(d, FracOrderParam{rho.order - 1.0});
}

template <class T>
Signal<T> gl_impl(const Signal<T>& h, FracOrderParam rho) {
    require_uniform_base(h);
    if (!(rho.order > 0.0) || rho.order > 1.0)
        throw std::domain_error("gl_derivative: order must lie in (0, 1]");
    for (const T& s : h.samples)
        if (!finite_sample(s)) throw std::domain_error("gl_derivative: requires finite samples");
    const std::size_t n = h.size();
    const std::vector<double> w = gl_weights(rho.order, n);
    const double scale = std::pow(h.dt, -rho.order);
    Signal<T> out;
    out.t0 = 0.0;
    out.dt = h.dt;
    out.samples.resize(n);
    par::for_each_index(static_cast<std::ptrdiff_t>(n), true, [&](std::ptrdiff_t m) {
        T acc{};
        for (std::ptrdiff_t j = 0; j <= m; ++j) acc += h.samples[m - j] * w[j];
        out.samples[m] = acc * scale;
    });
    return out;
}

} // namespace

std::vector<double> gl_weights(double rho, std::size_t n) {
    std::vector<double> w(n);
    if (n == 0) return w;
    w[0] = 1.0;
    for (std::size_t j = 1; j < n; ++j)
        w[j] = w[j - 1] * (1.0 - (rho + 1.0) / static_cast<double>(j));
    return w;
}

TimeSignal rl_integral(const TimeSignal& h, FracOrderParam s) { return rl_integral_impl(h, s); }
ComplexSignal rl_integral(const ComplexSignal& h, FracOrderParam s) { return rl_integral_impl(h, s); }
TimeSignal rl_derivative(const TimeSignal& h, FracOrderParam r) { return rl_derivative_impl(h, r); }
ComplexSignal rl_derivative(const ComplexSignal& h, FracOrderParam r) { return rl_derivative_impl(h, r); }
TimeSignal caputo_derivative(const TimeSignal& h, FracOrderParam r) { return caputo_impl(h, r); }
ComplexSignal caputo_derivative(const ComplexSignal& h, FracOrderParam r) { return caputo_impl(h, r); }
TimeSignal gl_derivative(const TimeSignal& h, FracOrderParam r) { return gl_impl(h, r); }
ComplexSignal gl_derivative(const ComplexSignal& h, FracOrderParam r) { return gl_impl(h, r); }

TimeSignal rl_integral_ref(const TimeSignal& h, FracOrderParam sigma) {
    require_uniform_base(h);
    if (!(sigma.order < 0.0)) throw std::domain_error("rl_integral_ref: order must be negative");
    if (!finite_sample(h.samples[0]))
        throw std::domain_error("rl_integral_ref: finite samples only");
    const double a = -sigma.order, dt = h.dt;
    const std::size_t n = h.size();
    TimeSignal out;
    out.dt = dt;
    out.samples.assign(n, 0.0);
    for (std::size_t m = 1; m < n; ++m) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            double s2 = dt * static_cast<double>(m - j);
            double s1 = s2 - dt;
            double m0 = (std::pow(s2, a) - std::pow(s1, a)) / a;
            double m1 = (std::pow(s2, a + 1.0) - std::pow(s1, a + 1.0)) / (a + 1.0);
            acc += h.samples[j + 1] * m0 + (h.samples[j] - h.samples[j + 1]) * (m1 - s1 * m0) / dt;
        }
        out.samples[m] = acc / math::gamma_fn(a);
    }
    return out;
}

TimeSignal gl_derivative_ref(const TimeSignal& h, FracOrderParam rho) {
    require_uniform_base(h);
    const std::size_t n = h.size();
    TimeSignal out;
    out.dt = h.dt;
    out.samples.assign(n, 0.0);
    for (std::size_t m = 0; m < n; ++m) {
        double w = 1.0, acc = h.samples[m];
        for (std::size_t j = 1; j <= m; ++j) {
            w *= 1.0 - (rho.order + 1.0) / static_cast<double>(j);
            acc += w * h.samples[m - j];
        }
        out.samples[m] = acc * std::pow(h.dt, -rho.order);
    }
    return out;
}

} // namespace subdiff::frac
