#include "subdiff/gammafn.hpp"

#include <cmath>
#include <stdexcept>

namespace subdiff::math {

namespace {

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

} // namespace

double sin_pi(double x) {
    if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
    // reduce to r in [-0.5, 0.5]; exact as long as |x| < 2^52
    double m = std::nearbyint(x);
    double r = x - m;
    double s = std::sin(M_PI * r);
    return (std::fmod(std::fabs(m), 2.0) == 1.0) ? -s : s;
}

double cos_pi(double x) {
    if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
    double m = std::nearbyint(x);
    double r = x - m;
    double c = std::cos(M_PI * r);
    return (std::fmod(std::fabs(m), 2.0) == 1.0) ? -c : c;
}

double gamma_fn(double x) {
    if (!std::isfinite(x)) throw std::domain_error("gamma_fn: non-finite argument");
    if (is_nonpositive_integer(x)) throw std::domain_error("gamma_fn: pole at non-positive integer");
    return std::tgamma(x);
}

double lgamma_signed(double x, int& sign) {
    if (!std::isfinite(x) || is_nonpositive_integer(x))
        throw std::domain_error("lgamma_signed: argument outside domain");
    int sg = 1;
    double v = ::lgamma_r(x, &sg);
    sign = sg;
    return v;
}

double rgamma(double x) {
    if (!std::isfinite(x)) return 0.0;
    if (is_nonpositive_integer(x)) return 0.0;
    if (x > 0.0) {
        // Gamma overflows past ~171.62; 1/Gamma underflows to 0 there.
        if (x > 178.0) return 0.0;
        return 1.0 / std::tgamma(x);
    }
    // reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi, stable for x < 0
    int sg = 1;
    double lg = ::lgamma_r(1.0 - x, &sg);
    double s = sin_pi(x);
    if (s == 0.0) return 0.0;
    double ln = lg + std::log(std::fabs(s)) - std::log(M_PI);
    if (ln > 709.0) return (sg * s > 0) ? std::numeric_limits<double>::infinity()
                                        : -std::numeric_limits<double>::infinity();
    double mag = std::exp(ln);
    return (sg * s > 0) ? mag : -mag;
}

} // namespace subdiff::math
