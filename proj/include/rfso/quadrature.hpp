#ifndef RFSO_QUADRATURE_HPP
#define RFSO_QUADRATURE_HPP

#include <functional>

namespace rfso {

struct QuadResult {
    double value = 0.0;
    double err_estimate = 0.0;
    bool converged = false;
};

/// Adaptive Gauss-Kronrod (G7/K15) on a finite interval.
QuadResult integrate(const std::function<double(double)>& f, double lo, double hi,
                     double rel_tol = 1e-9, double abs_tol = 0.0, int max_depth = 48);

/// Integral over [lo, inf) of a decaying integrand: maps the tail through
/// t -> lo + s/(1-s) panels after an initial finite stretch.
QuadResult integrate_to_inf(const std::function<double(double)>& f, double lo,
                            double rel_tol = 1e-9, double abs_tol = 0.0);

} // namespace rfso

#endif
