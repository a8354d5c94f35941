#include "subdiff/solver.hpp"

#include "subdiff/gammafn.hpp"
#include "subdiff/mittag_leffler.hpp"
#include "subdiff/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace subdiff::solve_ns {

using cplx = std::complex<double>;

void DuhamelQuadrature::validate() const {
    if (nodes_per_unit < 8)
        throw std::domain_error("DuhamelQuadrature: nodes_per_unit must be >= 8");
    if (grading_exponent != 0.0 && grading_exponent < 1.0)
        throw std::domain_error("DuhamelQuadrature: grading_exponent must be >= 1 (or 0 = auto)");
}

double Forcing::coverage() const {
    if (kind != Kind::sampled) return std::numeric_limits<double>::infinity();
    if (frames.empty()) return 0.0;
    return sample_dt * static_cast<double>(frames.size() - 1);
}

void ProblemSpec::validate() const {
    if (!(rho > 0.0) || rho > 1.0) throw std::domain_error("ProblemSpec: rho must lie in (0, 1]");
    if (!(horizon_T > 0.0)) throw std::domain_error("ProblemSpec: horizon_T must be positive");
    phi.validate();
    if (phi.dim_N != dim_N) throw std::domain_error("ProblemSpec: phi dimension mismatch");
    if (forcing.kind != Forcing::Kind::none) {
        forcing.field.validate();
        if (forcing.field.dim_N != dim_N || forcing.field.band_K != phi.band_K)
            throw std::domain_error("ProblemSpec: forcing must share dim and band with phi");
        if (forcing.kind == Forcing::Kind::sampled) {
            if (!(forcing.sample_dt > 0.0) || forcing.frames.empty())
                throw std::domain_error("ProblemSpec: sampled forcing needs dt > 0 and frames");
            for (const auto& fr : forcing.frames)
                if (fr.size() != forcing.field.size())
                    throw std::domain_error("ProblemSpec: forcing frame size mismatch");
        }
    }
}

cplx homogeneous_mode(cplx phi_n, double lambda, double rho, double t) {
    return phi_n * ml::propagator(rho, lambda, t);
}

cplx duhamel_constant(cplx f_n, double lambda, double rho, double t) {
    if (!(t > 0.0)) throw std::domain_error("duhamel_constant: t must be positive");
    return f_n * std::pow(t, rho) * ml::ml_eval(rho, rho + 1.0, -lambda * std::pow(t, rho));
}

cplx duhamel_mode(std::span<const cplx> f_samples, double sample_dt, double lambda, double rho,
                  double t, const DuhamelQuadrature& quad) {
    quad.validate();
    if (!(t > 0.0)) throw std::domain_error("duhamel_mode: t must be positive");
    if (f_samples.empty() || !(sample_dt > 0.0))
        throw std::domain_error("duhamel_mode: forcing samples required");
    if (sample_dt * static_cast<double>(f_samples.size() - 1) < t * (1.0 - 1e-12))
        throw std::domain_error("duhamel_mode: forcing samples do not cover [0, t]");

    auto f_at = [&](double s) -> cplx {
        const double pos = std::min(s, t) / sample_dt;
        const auto last = static_cast<double>(f_samples.size() - 1);
        if (pos <= 0.0) return f_samples[0];
        if (pos >= last) return f_samples.back();
        const auto i0 = static_cast<std::size_t>(pos);
        const double w = pos - static_cast<double>(i0);
        return f_samples[i0] * (1.0 - w) + f_samples[i0 + 1] * w;
    };

    const int cells = std::max(16, static_cast<int>(std::ceil(
                               quad.nodes_per_unit * std::max(1.0, t))));
    const double gamma = (quad.scheme == DuhamelQuadrature::Scheme::product_linear)
                             ? 1.0
                             : (quad.grading_exponent > 0.0 ? quad.grading_exponent
                                                            : std::max(1.0, 2.0 / rho));

    // nodes xi_i = t (i/M)^gamma; q(xi) = f(t - xi) E_{rho,rho}(-lambda xi^rho)
    std::vector<double> xi(static_cast<std::size_t>(cells) + 1);
    std::vector<cplx> q(xi.size());
    for (int i = 0; i <= cells; ++i) {
        double frac = static_cast<double>(i) / cells;
        xi[i] = (i == cells) ? t : t * std::pow(frac, gamma);
        double e = (xi[i] == 0.0) ? math::rgamma(rho)
                                  : ml::ml_eval(rho, rho, -lambda * std::pow(xi[i], rho));
        q[i] = f_at(t - xi[i]) * e;
    }

    // exact moments of xi^{rho-1} against the linear interpolant of q
    cplx acc{0.0, 0.0};
    double pa = 0.0, pa1 = 0.0; // a^rho, a^{rho+1} carried across cells
    for (int i = 0; i < cells; ++i) {
        const double a = xi[i], b = xi[i + 1];
        const double h = b - a;
        if (!(h > 0.0)) continue;
        const double pb = std::pow(b, rho), pb1 = std::pow(b, rho + 1.0);
        const double m0 = (pb - pa) / rho;
        const double m1 = (pb1 - pa1) / (rho + 1.0);
        acc += q[i + 1] * m0 + (q[i] - q[i + 1]) * ((m1 - a * m0) / h);
        pa = pb;
        pa1 = pb1;
    }
    return acc;
}

std::vector<SolutionSnapshot> solve(const ProblemSpec& problem, std::span<const double> eval_times,
                                    const DuhamelQuadrature& quad, int grid_M) {
    problem.validate();
    quad.validate();
    if (eval_times.empty()) return {};
    for (std::size_t i = 0; i < eval_times.size(); ++i) {
        if (!(eval_times[i] > 0.0))
            throw std::domain_error("solve: evaluation times must be positive"); // t=0 is singular
        if (eval_times[i] > problem.horizon_T * (1.0 + 1e-12))
            throw std::domain_error("solve: evaluation time beyond horizon_T");
        if (i > 0 && eval_times[i] < eval_times[i - 1])
            throw std::domain_error("solve: evaluation times must be sorted");
    }
    const Forcing& frc = problem.forcing;
    if (frc.kind == Forcing::Kind::sampled && frc.coverage() < eval_times.back() * (1.0 - 1e-12))
        throw std::domain_error("solve: forcing samples do not cover the evaluation horizon");

    // output mode layout: union of phi and forcing modes (lexicographic)
    spec::SpectralField layout = problem.phi;
    if (frc.kind != Forcing::Kind::none) {
        for (std::size_t i = 0; i < frc.field.size(); ++i) {
            if (layout.find(frc.field.modes[i]) == spec::SpectralField::npos) {
                layout.modes.push_back(frc.field.modes[i]);
                layout.coeffs.push_back({0.0, 0.0});
            }
        }
        layout.sort_canonical();
    }
    const std::size_t nmodes = layout.size();

    std::vector<SolutionSnapshot> out(eval_times.size());
    for (std::size_t ti = 0; ti < eval_times.size(); ++ti) {
        const double t = eval_times[ti];
        SolutionSnapshot snap;
        snap.t = t;
        snap.rho = problem.rho;
        snap.regularization_factor = std::pow(t, 1.0 - problem.rho);
        snap.field = layout;

        par::for_each_index(static_cast<std::ptrdiff_t>(nmodes), true, [&](std::ptrdiff_t mi) {
            const spec::Mode& mode = snap.field.modes[mi];
            const double lambda = static_cast<double>(mode.norm2());
            cplx u = homogeneous_mode(problem.phi.at(mode), lambda, problem.rho, t);
            if (frc.kind == Forcing::Kind::constant) {
                const cplx fn = frc.field.at(mode);
                if (std::abs(fn) != 0.0) {
                    if (frc.constant_closed_form) {
                        u += duhamel_constant(fn, lambda, problem.rho, t);
                    } else {
                        const cplx two[2] = {fn, fn};
                        u += duhamel_mode(std::span<const cplx>(two, 2), t, lambda, problem.rho, t,
                                          quad);
                    }
                }
            } else if (frc.kind == Forcing::Kind::sampled) {
                const std::size_t fi = frc.field.find(mode);
                if (fi != spec::SpectralField::npos) {
                    std::vector<cplx> series(frc.frames.size());
                    bool nonzero = false;
                    for (std::size_t s = 0; s < frc.frames.size(); ++s) {
                        series[s] = frc.frames[s][fi];
                        nonzero = nonzero || std::abs(series[s]) != 0.0;
                    }
                    if (nonzero)
                        u += duhamel_mode(series, frc.sample_dt, lambda, problem.rho, t, quad);
                }
            }
            snap.field.coeffs[mi] = u;
        });

        if (grid_M > 0) snap.grid = spec::synthesize(snap.field, grid_M);
        out[ti] = std::move(snap);
    }
    return out;
}

std::vector<SolutionSnapshot> solve_classical_limit(const ProblemSpec& problem,
                                                    std::span<const double> eval_times,
                                                    const DuhamelQuadrature& quad, int grid_M) {
    if (problem.rho != 1.0)
        throw std::domain_error("solve_classical_limit: requires rho = 1");
    return solve(problem, eval_times, quad, grid_M);
}

} // namespace subdiff::solve_ns
