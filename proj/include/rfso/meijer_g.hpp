#ifndef RFSO_MEIJER_G_HPP
#define RFSO_MEIJER_G_HPP

#include <memory>
#include <vector>

#include "rfso/errors.hpp"

namespace rfso {

/// Full parameter specification of a real Meijer G instance
/// G^{m,n}_{p,q}(x | a_1..a_p ; b_1..b_q).
struct MeijerGSpec {
    int m = 0;
    int n = 0;
    std::vector<double> a_params;
    std::vector<double> b_params;

    MeijerGSpec(int m_, int n_, std::vector<double> a, std::vector<double> b);

    int p() const { return static_cast<int>(a_params.size()); }
    int q() const { return static_cast<int>(b_params.size()); }
};

/// Compiled evaluator for one Meijer G instance.
///
/// Primary path is the residue series over the poles of Gamma(b_j - s),
/// j <= m (reflected to the a-side series via G reversal when p > q, or
/// when p == q with argument above 1). Gamma products are assembled in
/// log space with sign tracking. Integer-spaced b parameters (the
/// logarithmic cases) are handled by evaluating small symmetric
/// perturbations of the coalescing parameters and extrapolating. A
/// Mellin-Barnes contour quadrature along a vertical line backs the
/// series wherever the series loses too many digits or cannot converge.
///
/// Immutable after construction; evaluation is thread-safe.
class MeijerG {
public:
    struct Eval {
        double value = 0.0;
        double err_estimate = 0.0;
    };

    explicit MeijerG(const MeijerGSpec& spec, double target_rel_err = 1e-10);

    double operator()(double x) const { return eval(x).value; }
    Eval eval(double x) const;

    const MeijerGSpec& spec() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

/// One-shot evaluation (compiles the spec each call).
double meijer_g(const MeijerGSpec& spec, double x);

} // namespace rfso

#endif
