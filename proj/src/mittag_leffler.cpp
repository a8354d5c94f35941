#include "subdiff/mittag_leffler.hpp"

#include "subdiff/errors.hpp"
#include "subdiff/gammafn.hpp"

#include <cmath>
#include <limits>
#include <quadmath.h>
#include <stdexcept>

namespace subdiff::ml {

using math::cos_pi;
using math::gamma_fn;
using math::rgamma;
using math::sin_pi;

namespace {

constexpr int kTermCap = 200000;
// Series is used while |z|^{1/rho} <= kSeriesLimit; the alternating-sum
// cancellation is then at most ~e^40, which the compensated
// quad-precision accumulator keeps near 1e-16 even on term formation.
constexpr double kSeriesLimit = 40.0;
// Asymptotic expansion is used once both its optimal-truncation error and
// (for rho > 2/3) the exponentially small saddle contribution
// ~exp(t^{1/rho} cos(pi/rho)) are below ~e^-40.
constexpr double kAsymFloor = 40.0;

// Reciprocal gamma tables 1/Gamma(mu + k rho) per order pair. The solver
// sweeps huge (lambda, t) families at a fixed (rho, mu), so the gamma
// ladder is the same for every evaluation. Thread-local: safe under any
// outer parallelism without locks.
class RgammaLadder {
  public:
    static RgammaLadder& bind(double rho, double mu) {
        thread_local RgammaLadder slots[4];
        thread_local int clock = 0;
        for (auto& s : slots)
            if (s.rho_ == rho && s.mu_ == mu) return s;
        RgammaLadder& s = slots[clock];
        clock = (clock + 1) % 4;
        s.rho_ = rho;
        s.mu_ = mu;
        s.q_.clear();
        s.d_.clear();
        return s;
    }
    __float128 q(std::size_t k) {
        while (q_.size() <= k) {
            __float128 y = (__float128)mu_ + (__float128)rho_ * (__float128)q_.size();
            __float128 g = tgammaq(y);
            q_.push_back(isinfq(g) ? (__float128)0 : 1 / g);
        }
        return q_[k];
    }
    double d(std::size_t k) {
        while (d_.size() <= k) d_.push_back(rgamma(mu_ + rho_ * static_cast<double>(d_.size())));
        return d_[k];
    }

  private:
    double rho_ = -1.0, mu_ = -1.0;
    std::vector<__float128> q_;
    std::vector<double> d_;
};

// Compensated (TwoSum) accumulator on top of __float128.
struct CompensatedQ {
    __float128 s = 0;
    __float128 c = 0;
    void add(__float128 x) {
        __float128 t = s + x;
        if (fabsq(s) >= fabsq(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    __float128 value() const { return s + c; }
};

double series_double(double rho, double mu, double z, double* max_term = nullptr) {
    // plain Kahan; fully accurate only when cancellation stays mild
    // (caller checks max_term against the sum)
    RgammaLadder& lad = RgammaLadder::bind(rho, mu);
    double sum = 0.0, comp = 0.0;
    double zp = 1.0, peak = 0.0;
    for (int k = 0; k < kTermCap; ++k) {
        double g = lad.d(static_cast<std::size_t>(k));
        double term = zp * g;
        peak = std::max(peak, std::fabs(term));
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        zp *= z;
        if (!std::isfinite(zp) || !std::isfinite(sum))
            throw std::range_error("ml_eval: series overflow");
        if (k > 2 && std::fabs(term) <= 1e-19 * std::fabs(sum) && std::fabs(zp) * g < 1e-19 * std::fabs(sum)) {
            if (max_term) *max_term = peak;
            return sum;
        }
    }
    throw accuracy_error("ml_eval: series term cap reached");
}

double series_quad(double rho, double mu, double z) {
    RgammaLadder& lad = RgammaLadder::bind(rho, mu);
    const __float128 zq = z;
    CompensatedQ acc;
    __float128 zp = 1;
    // past the largest term (rho k + mu > |z|^{1/rho}) the term ratio
    // falls below 1 and the tail is dominated by a geometric envelope
    const double smax = std::pow(std::fabs(z), 1.0 / rho);
    for (int k = 0; k < kTermCap; ++k) {
        __float128 term = zp * lad.q(static_cast<std::size_t>(k));
        acc.add(term);
        zp *= zq;
        if (k > 2 && rho * k + mu > smax) {
            __float128 s = acc.value();
            if (fabsq(term) <= fabsq(s) * (__float128)1e-30) return (double)s;
        }
    }
    throw accuracy_error("ml_eval: series term cap reached");
}

// sum_{k>=1} (-1)^{k+1} t^{-k} / Gamma(mu - rho k), truncated where the
// pole-free envelope t^{-k} Gamma(1 + rho k - mu) / pi starts to grow.
double asymptotic_neg(double rho, double mu, double t) {
    const double lt = std::log(t);
    double sum = 0.0, comp = 0.0;
    double prev_env = std::numeric_limits<double>::infinity();
    // small rho needs ~t^{1/rho}/rho terms to reach the optimal truncation
    for (int k = 1; k <= 10000; ++k) {
        double a = mu - rho * k;
        double term, env;
        if (a > 0.5) {
            term = std::exp(-k * lt - std::lgamma(a));
            env = term;
        } else {
            int sg = 1;
            double lg = math::lgamma_signed(1.0 - a, sg);
            double ln_env = -k * lt + lg - std::log(M_PI);
            env = (ln_env > -745.0) ? std::exp(ln_env) : 0.0;
            term = env * sin_pi(a); // reflection: 1/Gamma(a) = Gamma(1-a) sin(pi a)/pi
        }
        if (k > 2 && env > prev_env) break; // optimal truncation
        prev_env = env;
        term *= (k % 2 == 1) ? 1.0 : -1.0;
        double y = term - comp;
        double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        if (env <= 1e-18 * std::fabs(sum)) break;
    }
    return sum;
}

// Integral representation for z < 0, 0 < a < 1, 0 < b <= 1 (Gorenflo,
// Loutchko & Luchko). After the substitution u = chi^{1/a}:
//   E_{a,b}(z) = (1/pi) int_0^inf u^{a-b} e^{-u} N(u^a) / D(u^a) du,
//   N(x) = x sin(pi(1-b)) - z sin(pi(1-b+a)),
//   D(x) = x^2 - 2 x z cos(pi a) + z^2.
// The integrand decays like e^{-u} and has an integrable u^{a-b}
// singularity at 0; an exp-sinh transformed trapezoid rule converges
// geometrically in the refinement level.
double gll_integral_base(double a, double b, double z) {
    const double s1 = sin_pi(1.0 - b);
    const double s2 = sin_pi(1.0 - b + a);
    const double cp = cos_pi(a);
    auto integrand = [&](double u) {
        double x = std::pow(u, a);
        double dd = (x - z) * (x - z) + 2.0 * x * (-z) * (cp - 1.0);
        double nn = x * s1 - z * s2;
        return std::pow(u, a - b) * std::exp(-u) * nn / dd;
    };
    double prev = 0.0, result = 0.0;
    for (int lev = 2; lev <= 13; ++lev) {
        const double h = std::ldexp(1.0, -lev) * 4.0;
        double sum = 0.0;
        for (int k = -20000; k <= 20000; ++k) {
            double w = k * h;
            double sh = std::sinh(w);
            if (sh > 6.80) break;      // u > ~900: e^{-u} below 1e-390
            if (sh < -700.0) continue; // u underflows
            double u = std::exp(sh);
            double v = integrand(u) * u * std::cosh(w);
            if (std::isfinite(v)) sum += v;
        }
        sum *= h / M_PI;
        if (lev > 5 && std::fabs(sum - prev) <= 5e-16 * std::fabs(sum)) return sum;
        prev = sum;
        result = sum;
    }
    return result;
}

// Reduce to b0 <= 1 via E_{a,b}(z) = 1/Gamma(b-a)... inverted: with
// b0 = b - m a, E at b0+ (j+1) a is recovered from E at b0 + j a by
//   E_{a,beta+a}(z) = (E_{a,beta}(z) - 1/Gamma(beta)) / z.
// Keeping b0 <= 1 keeps the u^{a-b0} endpoint singularity away from the
// non-integrable boundary (exponent >= a - 1 > -1/3 in the region where
// this path is taken).
double gll_integral(double a, double b, double z) {
    int m = 0;
    double b0 = b;
    while (b0 > 1.0) {
        b0 -= a;
        ++m;
    }
    double e = gll_integral_base(a, b0, z);
    for (int j = 0; j < m; ++j) {
        e = (e - rgamma(b0)) / z;
        b0 += a;
    }
    return e;
}

// ln E_{rho,mu}(z) ~ z^{1/rho} + ((1-mu)/rho) ln z - ln rho for z >> 1.
bool overflows_double(double rho, double mu, double z) {
    if (z <= 1.0) return false;
    double lnz = std::log(z);
    double s = lnz / rho;
    if (s > 709.0) return true; // z^{1/rho} alone overflows
    double ln_e = std::exp(s) + (1.0 - mu) / rho * lnz - std::log(rho);
    return ln_e > 708.5;
}

} // namespace

void MLParams::validate() const {
    if (!std::isfinite(rho) || !(rho > 0.0) || rho > 1.0)
        throw std::domain_error("MLParams: rho must lie in (0, 1]");
    if (!std::isfinite(mu) || !(mu > 0.0))
        throw std::domain_error("MLParams: mu must be positive");
}

double ml_eval(const MLParams& params, double z) {
    params.validate();
    if (!std::isfinite(z)) throw std::domain_error("ml_eval: non-finite argument");
    const double rho = params.rho, mu = params.mu;

    if (z == 0.0) return rgamma(mu);
    if (rho == 1.0 && mu == 1.0) {
        if (z > 709.0) throw std::range_error("ml_eval: overflow");
        return std::exp(z);
    }
    if (z > 0.0) {
        if (overflows_double(rho, mu, z)) throw std::range_error("ml_eval: overflow");
        // positive terms: no cancellation at any rho
        double smax = (z > 1.0) ? std::exp(std::log(z) / rho) : 1.0;
        return (smax <= 30.0) ? series_double(rho, mu, z) : series_quad(rho, mu, z);
    }

    const double t = -z;
    const double ln_smax = std::log(t) / rho;
    const double smax = (ln_smax < 700.0) ? std::exp(ln_smax) : std::numeric_limits<double>::infinity();
    if (smax <= kSeriesLimit) {
        if (smax <= 2.0) {
            double peak = 0.0;
            double v = series_double(rho, mu, z, &peak);
            if (std::fabs(v) >= 0.05 * peak) return v; // cancellation mild: done
        }
        return series_quad(rho, mu, z); // near a zero of E or a deep alternating sum
    }

    // exponentially small saddle term exists for rho > 2/3 and decays like
    // exp(t^{1/rho} cos(pi/rho)); below 2/3 the negative axis is purely algebraic
    const double c = (rho <= 2.0 / 3.0) ? 1.0 : std::max(0.0, -cos_pi(1.0 / rho));
    if (smax * c >= kAsymFloor) return asymptotic_neg(rho, mu, t);
    if (rho <= 0.95) return gll_integral(rho, mu, z);
    // rho in (0.95, 1]: the gap above the series limit is the sliver
    // smax < kAsymFloor / c(rho) <= 40.6; the quad series still holds 1e-9 there
    return series_quad(rho, mu, z);
}

double ml_eval(double rho, double mu, double z) { return ml_eval(MLParams{rho, mu}, z); }

double ml_neg_asymptotic(double rho, double t) {
    if (!std::isfinite(rho) || !(rho > 0.0) || rho >= 1.0)
        throw std::domain_error("ml_neg_asymptotic: rho must lie in (0, 1)"); // Gamma(-1) pole at rho = 1
    if (!(t > 0.0)) throw std::domain_error("ml_neg_asymptotic: t must be positive");
    return -1.0 / (t * t * gamma_fn(-rho));
}

double propagator(double rho, double lambda, double t) {
    if (!std::isfinite(rho) || !(rho > 0.0) || rho > 1.0)
        throw std::domain_error("propagator: rho must lie in (0, 1]");
    if (!(lambda >= 0.0)) throw std::domain_error("propagator: lambda must be non-negative");
    if (!(t > 0.0)) throw std::domain_error("propagator: t must be positive"); // kernel singular at 0
    if (rho == 1.0) return std::exp(-lambda * t);
    return std::pow(t, rho - 1.0) * ml_eval(rho, rho, -lambda * std::pow(t, rho));
}

std::vector<double> m1_grid() {
    std::vector<double> g;
    g.reserve(770);
    g.push_back(0.0);
    for (int j = 0; j <= 12 * 64; ++j) g.push_back(std::pow(10.0, -6.0 + j / 64.0));
    return g;
}

KernelBound bound_constant_m1(double rho) {
    if (!std::isfinite(rho) || !(rho > 0.0) || !(rho < 1.0))
        throw std::domain_error("bound_constant_m1: rho must lie in (0, 1)");
    double sup = 0.0;
    for (double t : m1_grid()) {
        double e = (t == 0.0) ? rgamma(rho) : ml_eval(rho, rho, -t);
        sup = std::max(sup, (1.0 + t * t) * std::fabs(e));
    }
    return KernelBound{1.01 * sup, KernelBound::Regime::m1_global, 0.0};
}

KernelBound check_m2(double rho, double epsilon, double lambda,
                     std::span<const double> t_grid) {
    if (!std::isfinite(rho) || !(rho > 0.0) || !(rho < 1.0))
        throw std::domain_error("check_m2: rho must lie in (0, 1)");
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::domain_error("check_m2: epsilon must lie in (0, 1)");
    if (!(lambda > 0.0)) throw std::domain_error("check_m2: lambda must be positive");
    if (t_grid.empty()) throw std::invalid_argument("check_m2: empty t grid");
    double sup = 0.0;
    for (double t : t_grid) {
        if (!(t > 0.0)) throw std::invalid_argument("check_m2: grid entries must be positive");
        double lhs = std::fabs(propagator(rho, lambda, t));
        double rhs = std::pow(lambda, epsilon - 1.0) * std::pow(t, epsilon * rho - 1.0);
        sup = std::max(sup, lhs / rhs);
    }
    return KernelBound{sup, KernelBound::Regime::m2_coarse, epsilon};
}

} // namespace subdiff::ml
