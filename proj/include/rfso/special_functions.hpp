#ifndef RFSO_SPECIAL_FUNCTIONS_HPP
#define RFSO_SPECIAL_FUNCTIONS_HPP

#include <complex>

#include "rfso/errors.hpp"

namespace rfso {

/// Natural log of the gamma function for x > 0 (Lanczos approximation).
/// Relative accuracy better than 1e-13 over the positive axis.
double ln_gamma(double x);

/// Confluent hypergeometric function 1F1(a; b; z).
///
/// b must not be a non-positive integer. Negative arguments are routed
/// through the Kummer transform 1F1(a;b;z) = e^z 1F1(b-a;b;-z) so the
/// series is summed with non-negative argument; accumulation is done in
/// double-double arithmetic to survive sign-alternating prefixes.
double hyp1f1(double a, double b, double z);

/// log(1F1(a; b; z)) for a, b > 0 and z >= 0, where the series is a sum of
/// positive terms and the value can exceed the double range.
double hyp1f1_ln(double a, double b, double z);

/// Gauss hypergeometric function 2F1(a, b; c; z) for |z| < 1.
double hyp2f1(double a, double b, double c, double z);

namespace detail {

// lgamma for arbitrary real x (reflection below 0.5); sign receives the
// sign of Gamma(x). At a pole the result is +inf and sign is 0.
double lgamma_signed(double x, int& sign);

// Principal-branch Lanczos log-gamma on the complex plane. Used inside
// exp(sum of lgammas); only correct modulo 2*pi*i, which suffices there.
std::complex<double> lgamma_complex(std::complex<double> z);

// Double-double accumulator (error-free two-sum compensation).
struct dd {
    double hi = 0.0;
    double lo = 0.0;
    void add(double v) {
        double s = hi + v;
        double bb = s - hi;
        double err = (hi - (s - bb)) + (v - bb);
        hi = s;
        lo += err;
    }
    double value() const { return hi + lo; }
};

} // namespace detail

} // namespace rfso

#endif
