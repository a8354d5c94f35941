#pragma once

namespace subdiff::math {

// Real-argument gamma function, defined for all non-pole arguments
// (negative non-integers included). Throws std::domain_error at the
// poles 0, -1, -2, ...
double gamma_fn(double x);

// log|Gamma(x)| with the sign of Gamma(x) returned separately.
// Thread-safe (does not touch the global signgam).
double lgamma_signed(double x, int& sign);

// 1/Gamma(x). Zero at the poles of Gamma, never throws for finite x.
double rgamma(double x);

// sin(pi x) and cos(pi x) with argument reduction done on x itself, so
// sin_pi(n) == 0 exactly for integer n. Needed wherever reflection
// formulas meet near-integer arguments.
double sin_pi(double x);
double cos_pi(double x);

} // namespace subdiff::math
