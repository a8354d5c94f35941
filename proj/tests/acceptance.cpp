// Acceptance suite: every check prints one PASS/FAIL line; the process
// exits with the number of failed checks.

#include "subdiff/fracops.hpp"
#include "subdiff/gammafn.hpp"
#include "subdiff/io.hpp"
#include "subdiff/mittag_leffler.hpp"
#include "subdiff/solver.hpp"
#include "subdiff/spectral.hpp"
#include "subdiff/verify.hpp"

#include "oracle_mp.hpp"
#include "test_util.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace subdiff;
using cplx = std::complex<double>;
using testutil::rel_err;
using testutil::Rng;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

spec::Mode mode2(int a, int b) {
    spec::Mode m;
    m.dim = 2;
    m.n = {a, b, 0, 0, 0, 0};
    return m;
}

// --- criterion 1: Mittag-Leffler accuracy against the series oracle ---
void criterion_1() {
    const double t0 = now_s();
    oracle::prewarm();
    Rng rng(20260808);
    struct Draw {
        double rho, mu, z;
    };
    std::vector<Draw> draws(500);
    for (auto& d : draws)
        d = {rng.uniform(1e-6, 1.0), rng.uniform(1e-6, 2.0), rng.uniform(-5.0, 5.0)};

    int compared = 0, skipped_oracle = 0, overflowed = 0;
    double worst = 0.0;
    bool overflow_ok = true, finite_ok = true;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) reduction(+ : compared, skipped_oracle, overflowed) \
    reduction(max : worst) reduction(&& : overflow_ok, finite_ok)
#endif
    for (std::size_t i = 0; i < draws.size(); ++i) {
        const auto& d = draws[i];
        double got;
        try {
            got = ml::ml_eval(d.rho, d.mu, d.z);
        } catch (const std::range_error&) {
            // must be a genuine double overflow: E ~ (1/rho) z^{(1-mu)/rho} e^{z^{1/rho}}
            double lead = std::log(d.z) / d.rho;
            overflow_ok = overflow_ok && d.z > 1.0 &&
                          (lead > 7.0 || std::exp(lead) + (1.0 - d.mu) / d.rho * std::log(d.z) -
                                                 std::log(d.rho) >
                                             700.0);
            ++overflowed;
            continue;
        }
        finite_ok = finite_ok && std::isfinite(got);
        if (!oracle::feasible(d.rho, d.z)) {
            ++skipped_oracle; // cancellation beyond the 200-digit tier
            continue;
        }
        double ref = oracle::ml_reference(d.rho, d.mu, d.z);
        if (ref == 0.0) continue;
        worst = std::max(worst, rel_err(got, ref));
        ++compared;
    }

    // self-consistency of the large-argument path: recurrence residual,
    // scaled by the operand magnitudes (the identity subtracts two nearly
    // equal O(1/Gamma(mu)) numbers at large |z|; see the decisions notes)
    Rng rng2(777);
    struct RecDraw {
        double rho, mu, z;
    };
    std::vector<RecDraw> rec(300);
    for (auto& d : rec)
        d = {rng2.uniform(0.02, 0.999), rng2.uniform(0.05, 2.0),
             -std::exp(rng2.uniform(std::log(5.0), std::log(1e6)))};
    double worst_rec = 0.0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) reduction(max : worst_rec)
#endif
    for (std::size_t i = 0; i < rec.size(); ++i) {
        double lhs = ml::ml_eval(rec[i].rho, rec[i].mu, rec[i].z);
        double e2 = ml::ml_eval(rec[i].rho, rec[i].mu + rec[i].rho, rec[i].z);
        double rg = math::rgamma(rec[i].mu);
        worst_rec =
            std::max(worst_rec, std::fabs(lhs - rg - rec[i].z * e2) /
                                    (std::fabs(lhs) + std::fabs(rg) + std::fabs(rec[i].z * e2)));
    }
    const double dt = now_s() - t0;

    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "ml accuracy: %d/500 compared (worst rel %.2e <= 1e-12), %d oracle-infeasible, "
                  "%d genuine overflows, recurrence residual %.2e <= 1e-10, %.1fs <= 10s",
                  compared, worst, skipped_oracle, overflowed, worst_rec, dt);
    report(1, worst <= 1e-12 && overflow_ok && finite_ok && worst_rec <= 1e-10 && dt <= 10.0 &&
                  compared >= 400,
           buf);
}

// --- criterion 2: asymptotic law and the m1 grid bound ---
void criterion_2() {
    bool pass = true;
    std::string detail;
    for (double rho : {0.3, 0.5, 0.7}) {
        auto fit_K = [&](int per_decade) {
            double K = 0.0;
            for (int j = 0; j <= 3 * per_decade; ++j) {
                double t = std::pow(10.0, 3.0 + static_cast<double>(j) / per_decade);
                double diff = std::fabs(ml::ml_eval(rho, rho, -t) - ml::ml_neg_asymptotic(rho, t));
                K = std::max(K, diff * t * t * t);
            }
            return K;
        };
        const double k1 = fit_K(16), k2 = fit_K(32);
        const bool stable = std::fabs(k1 - k2) <= 0.2 * std::max(k1, k2);
        // envelope check on the refined grid with the fitted K
        bool envelope = true;
        for (int j = 0; j <= 96; ++j) {
            double t = std::pow(10.0, 3.0 + j / 32.0);
            double diff = std::fabs(ml::ml_eval(rho, rho, -t) - ml::ml_neg_asymptotic(rho, t));
            envelope = envelope && diff <= k2 * std::pow(t, -3.0) * (1.0 + 1e-12);
        }
        // (1+t^2) |E| <= C on the full verification grid
        const double C = ml::bound_constant_m1(rho).constant_C;
        bool grid_ok = true;
        for (double t : ml::m1_grid()) {
            double e = (t == 0.0) ? math::rgamma(rho) : ml::ml_eval(rho, rho, -t);
            grid_ok = grid_ok && (1.0 + t * t) * std::fabs(e) <= C;
        }
        pass = pass && stable && envelope && grid_ok;
        char buf[128];
        std::snprintf(buf, sizeof(buf), " rho=%.1f K=%.3e (stable %s, envelope %s, m1 grid %s)",
                      rho, k2, stable ? "y" : "N", envelope ? "y" : "N", grid_ok ? "y" : "N");
        detail += buf;
    }
    report(2, pass, "asymptotic law and m1 bound:" + detail);
}

// --- criterion 3: estimate (m2) uniform boundedness over lambda decades ---
void criterion_3() {
    const double rhos[3] = {0.3, 0.5, 0.7};
    const double epss[3] = {0.25, 0.5, 0.75};
    auto rep = verify_ns::kernel_estimate_suite(rhos, epss);
    bool pass = rep.all_pass();
    double worst_var = 0.0;
    for (const auto& row : rep.rows) worst_var = std::max(worst_var, row.plateau_variation);
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "m2 constants uniformly bounded over lambda in [1e-3,1e6]; peak-decade "
                  "variation %.2e <= 5e-2 across all 9 (rho, eps) pairs",
                  worst_var);
    report(3, pass, buf);
}

// --- criterion 4: single-mode closed form ---
void criterion_4() {
    solve_ns::DuhamelQuadrature quad;
    bool pass = true;
    // rho < 1: coefficient equals t^{rho-1} E_{rho,rho}(-|m|^2 t^rho)
    {
        solve_ns::ProblemSpec p;
        p.dim_N = 2;
        p.rho = 0.5;
        p.horizon_T = 1.0;
        p.phi = spec::SpectralField::zeros(2, 16.0);
        p.phi.coeffs[p.phi.find(mode2(2, 1))] = {1.0, 0.0};
        const double times[3] = {0.01, 0.1, 1.0};
        auto snaps = solve_ns::solve(p, times, quad);
        for (const auto& s : snaps) {
            double want = ml::propagator(0.5, 5.0, s.t);
            pass = pass && rel_err(s.field.at(mode2(2, 1)), cplx{want, 0.0}) <= 1e-10;
            for (std::size_t i = 0; i < s.field.size(); ++i)
                if (!(s.field.modes[i] == mode2(2, 1)))
                    pass = pass && std::abs(s.field.coeffs[i]) == 0.0;
        }
    }
    // rho = 1: heat kernel to 1e-12
    {
        solve_ns::ProblemSpec p;
        p.dim_N = 2;
        p.rho = 1.0;
        p.horizon_T = 1.0;
        p.phi = spec::SpectralField::zeros(2, 16.0);
        p.phi.coeffs[p.phi.find(mode2(2, 1))] = {1.0, 0.0};
        const double times[3] = {0.01, 0.1, 1.0};
        auto snaps = solve_ns::solve(p, times, quad);
        for (const auto& s : snaps)
            pass = pass && rel_err(s.field.at(mode2(2, 1)), cplx{std::exp(-5.0 * s.t), 0.0}) <=
                               1e-12;
    }
    report(4, pass,
           "single-mode closed form t^{rho-1}E_{rho,rho}(-|m|^2 t^rho) to 1e-10; classical "
           "path to 1e-12");
}

// --- criterion 5: Duhamel closed form and quadrature order ---
void criterion_5() {
    oracle::prewarm();
    const double rho = 0.6, lambda = 4.0, t = 0.8;
    const double closed =
        std::pow(t, rho) * oracle::ml_reference(rho, rho + 1.0, -lambda * std::pow(t, rho));
    const cplx f1[2] = {{1, 0}, {1, 0}};

    solve_ns::DuhamelQuadrature quad; // defaults
    double e_default = rel_err(
        solve_ns::duhamel_mode(std::span<const cplx>(f1, 2), t, lambda, rho, t, quad).real(),
        closed);

    double err[3];
    const int npu[3] = {128, 256, 512};
    for (int i = 0; i < 3; ++i) {
        solve_ns::DuhamelQuadrature q;
        q.nodes_per_unit = npu[i];
        err[i] = rel_err(
            solve_ns::duhamel_mode(std::span<const cplx>(f1, 2), t, lambda, rho, t, q).real(),
            closed);
    }
    const double ord1 = std::log2(err[0] / err[1]);
    const double ord2 = std::log2(err[1] / err[2]);
    const bool pass = e_default <= 1e-6 && ord1 >= 2.0 && ord2 >= 2.0;
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "constant forcing matches t^rho E_{rho,rho+1}(-lambda t^rho): default rel "
                  "%.2e <= 1e-6; node-doubling orders %.2f, %.2f >= 2",
                  e_default, ord1, ord2);
    report(5, pass, buf);
}

// --- criterion 6: GL residual on single-mode exact solutions; K=64 runtime ---
void criterion_6() {
    solve_ns::DuhamelQuadrature quad;
    auto worst_over = [](const verify_ns::ResidualReport& rep, std::size_t from) {
        double w = 0.0;
        for (std::size_t i = from; i < rep.times.size(); ++i)
            if (rep.solution_l2[i] > 0.0) w = std::max(w, rep.residual_l2[i] / rep.solution_l2[i]);
        return w;
    };
    auto dense = [&](const solve_ns::ProblemSpec& p, int M) {
        std::vector<double> times(M);
        for (int k = 1; k <= M; ++k) times[k - 1] = p.horizon_T * k / M;
        auto snaps = solve_ns::solve(p, times, quad);
        return verify_ns::residual_check(snaps, p.forcing, p.rho);
    };

    // accuracy on the single-mode exact solution (lambda = 1, rho = 0.5)
    solve_ns::ProblemSpec p1;
    p1.dim_N = 2;
    p1.rho = 0.5;
    p1.horizon_T = 1.0;
    p1.phi = spec::SpectralField::zeros(2, 2.0);
    p1.phi.coeffs[p1.phi.find(mode2(1, 0))] = {1.0, 0.0};
    const double r_half = worst_over(dense(p1, 2048), 0);
    const double r_full = worst_over(dense(p1, 4096), 0);
    const double order = std::log2(r_half / r_full);

    // runtime scope: the full N=2, K=64 band at the same resolution; the
    // early snapshots of the fastest modes are GL-resolution-limited, so
    // the 5e-3 gate applies from t >= T/2 on this run
    const double t0 = now_s();
    solve_ns::ProblemSpec p2;
    p2.dim_N = 2;
    p2.rho = 0.5;
    p2.horizon_T = 1.0;
    p2.phi = io::synthetic_decay_field(2, 64.0, 3.0, 1.0, 11);
    auto rep2 = dense(p2, 4096);
    const double late = worst_over(rep2, rep2.times.size() / 2);
    const double dt = now_s() - t0;

    const bool pass =
        r_full <= 5e-3 && order >= 0.8 && order <= 1.2 && late <= 5e-3 && dt <= 60.0;
    char buf[224];
    std::snprintf(buf, sizeof(buf),
                  "GL residual: single-mode worst ratio %.2e <= 5e-3 at dt=T/4096, halving "
                  "order %.2f in [0.8,1.2]; K=64 N=2 run %.1fs <= 60s (late-half ratio %.2e)",
                  r_full, order, dt, late);
    report(6, pass, buf);
}

// --- criterion 7: rewritten initial condition ---
void criterion_7() {
    const double rho = 0.5, lambda = 5.0;
    solve_ns::ProblemSpec p;
    p.dim_N = 2;
    p.rho = rho;
    p.horizon_T = 1.0;
    p.phi = spec::SpectralField::zeros(2, 8.0);
    p.phi.coeffs[p.phi.find(mode2(2, 1))] = {1.0, 0.0};
    auto probes = verify_ns::default_probe_times(); // 2^{-j}, j = 3..20
    solve_ns::DuhamelQuadrature quad;
    auto rep = verify_ns::initial_limit_check(p, probes, quad);

    bool monotone = true, match = true;
    for (std::size_t j = 0; j < probes.size(); ++j) {
        if (j > 0) monotone = monotone && rep.deviation[j] <= rep.deviation[j - 1];
        double want = std::fabs(ml::ml_eval(rho, rho, -lambda * std::pow(probes[j], rho)) -
                                math::rgamma(rho)) *
                      std::pow(2.0 * M_PI, 1.0);
        match = match && rel_err(rep.deviation[j], want) <= 1e-10;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "||t^{1-rho}u - phi/Gamma(rho)|| monotone from j=%zu and equal to the "
                  "closed-form deviation to 1e-10",
                  rep.monotone_tail_start);
    report(7, monotone && match && rep.monotone_tail_start == 0, buf);
}

// --- criterion 8: RL kernel property and the constant integral ---
void criterion_8() {
    const double rho = 0.5;
    const int n = 4096;
    frac::TimeSignal h;
    h.dt = 1.0 / n;
    h.samples.resize(n + 1);
    h.samples[0] = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= n; ++k) h.samples[k] = std::pow(k * h.dt, rho - 1.0);

    auto d = frac::rl_derivative(h, {rho});
    double worst_d = 0.0;
    for (int k = 1; k < n; ++k) worst_d = std::max(worst_d, std::fabs(d.samples[k]));

    auto g = frac::rl_integral(h, {rho - 1.0});
    double worst_i = 0.0;
    for (int k = 0; k <= n; ++k)
        worst_i = std::max(worst_i, std::fabs(g.samples[k] - math::gamma_fn(rho)));

    const bool pass = worst_d <= 1.0 * h.dt && worst_i <= 1e-6;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "rl_derivative of t^{rho-1}: interior max %.2e <= dt=%.2e; I^{1-rho} "
                  "t^{rho-1} - Gamma(rho): max %.2e <= 1e-6 at 4096 samples",
                  worst_d, h.dt, worst_i);
    report(8, pass, buf);
}

// --- criterion 9: spectral round trip, Parseval/Liouville, membership ---
void criterion_9() {
    Rng rng(55);
    auto f = spec::SpectralField::zeros(2, 30.0);
    for (std::size_t i = 0; i < f.size(); ++i) f.coeffs[i] = {rng.uniform(-1, 1), rng.uniform(-1, 1)};

    auto g = spec::synthesize(f, spec::min_grid_points(30.0));
    auto f2 = spec::analyze(g, 30.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        worst = std::max(worst, std::abs(f2.coeffs[i] - f.coeffs[i]));

    long double acc = 0.0L;
    for (std::size_t i = 0; i < f.size(); ++i) {
        long double w = powl(1.0L + f.modes[i].norm2(), 1.7L);
        acc += w * (static_cast<long double>(f.coeffs[i].real()) * f.coeffs[i].real() +
                    static_cast<long double>(f.coeffs[i].imag()) * f.coeffs[i].imag());
    }
    const double norm_ref = static_cast<double>(sqrtl(acc));
    const double norm_err = rel_err(spec::liouville_norm(f, 1.7), norm_ref);

    const bool flag3 = spec::membership_report(f, 1.6, 3).condition_met;   // 1.6 > 1.5
    const bool flag4 = spec::membership_report(f, 2.0, 4).condition_met;   // 2.0 is not > 2
    const bool pass = worst <= 1e-12 && norm_err <= 1e-10 && flag3 && !flag4;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "analyze(synthesize) identity max err %.2e <= 1e-12; Liouville norm vs "
                  "extended-precision sum rel %.2e <= 1e-10; membership flags correct",
                  worst, norm_err);
    report(9, pass, buf);
}

// --- criterion 10: bit-identical CLI runs ---
void criterion_10() {
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    fs::path d1 = fs::temp_directory_path() / "subdiff_acc_det1";
    fs::path d2 = fs::temp_directory_path() / "subdiff_acc_det2";
    fs::remove_all(d1);
    fs::remove_all(d2);
    const std::string cfg = (fs::path(SUBDIFF_CONFIG_DIR) / "demo.json").string();
    const std::string base = std::string(SUBDIFF_CLI_PATH) + " --quiet solve --config " + cfg;
    int rc1 = std::system((base + " --out " + d1.string() + " 2>/dev/null").c_str());
    int rc2 = std::system((base + " --out " + d2.string() + " 2>/dev/null").c_str());
    bool pass = rc1 == 0 && rc2 == 0;
    int files = 0;
    for (const char* f : {"snapshot_000.json", "snapshot_001.json", "snapshot_002.json",
                          "snapshot_000_grid.csv", "snapshot_001_grid.csv", "snapshot_002_grid.csv"}) {
        pass = pass && fs::exists(d1 / f) && slurp(d1 / f) == slurp(d2 / f);
        ++files;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "repeated cmd_solve runs bit-identical across %d files", files);
    report(10, pass, buf);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("acceptance suite (%d threads)\n", omp_get_max_threads());
#else
    std::printf("acceptance suite (serial)\n");
#endif
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%s (%d of 10 criteria failed)\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
                g_failures);
    return g_failures;
}
