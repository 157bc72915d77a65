#include "rfso/quadrature.hpp"

#include <cmath>
#include <queue>
#include <vector>

namespace rfso {

namespace {

// Gauss 7 / Kronrod 15 abscissae and weights (positive half, symmetric).
constexpr double kKronrodX[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0,
};
constexpr double kKronrodW[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
};
constexpr double kGaussW[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
};

struct Segment {
    double lo, hi;
    double integral;
    double error;
    bool splittable;
};

Segment gk15(const std::function<double(double)>& f, double lo, double hi) {
    double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    double fk = 0.0, fg = 0.0;
    for (int i = 0; i < 8; ++i) {
        double v1 = f(c - h * kKronrodX[i]);
        double v2 = (i < 7) ? f(c + h * kKronrodX[i]) : 0.0;
        double s = (i < 7) ? v1 + v2 : v1;
        fk += kKronrodW[i] * s;
        if (i % 2 == 1) fg += kGaussW[i / 2] * s;
    }
    double ik = fk * h, ig = fg * h;
    double err = std::abs(ik - ig);
    // a segment at the rounding floor or below representable width cannot
    // usefully be split further
    bool splittable = err > 4e-16 * std::abs(ik) + 1e-305 &&
                      hi - lo > 8.0 * std::abs(c) * 2.2e-16 + 1e-300;
    return {lo, hi, ik, err, splittable};
}

struct WorseError {
    bool operator()(const Segment& a, const Segment& b) const {
        return a.error < b.error;
    }
};

} // namespace

QuadResult integrate(const std::function<double(double)>& f, double lo, double hi,
                     double rel_tol, double abs_tol, int max_depth) {
    QuadResult out;
    if (lo == hi) {
        out.converged = true;
        return out;
    }
    const int max_segments = std::max(64, max_depth * 64);
    std::priority_queue<Segment, std::vector<Segment>, WorseError> active;
    double done_integral = 0.0, done_error = 0.0;

    Segment s0 = gk15(f, lo, hi);
    double total_i = s0.integral, total_e = s0.error;
    if (s0.splittable)
        active.push(s0);
    else {
        done_integral = s0.integral;
        done_error = s0.error;
    }

    int n_segments = 1;
    while (!active.empty() && n_segments < max_segments) {
        double tol = std::max(abs_tol, rel_tol * std::abs(total_i));
        if (total_e <= tol) break;
        Segment worst = active.top();
        active.pop();
        double mid = 0.5 * (worst.lo + worst.hi);
        Segment a = gk15(f, worst.lo, mid);
        Segment b = gk15(f, mid, worst.hi);
        total_i += a.integral + b.integral - worst.integral;
        total_e += a.error + b.error - worst.error;
        ++n_segments;
        for (const Segment& s : {a, b}) {
            if (s.splittable) {
                active.push(s);
            } else {
                done_integral += s.integral;
                done_error += s.error;
            }
        }
    }
    out.value = total_i;
    out.err_estimate = total_e;
    double tol = std::max(abs_tol, rel_tol * std::abs(total_i));
    out.converged = total_e <= tol || active.empty();
    return out;
}

QuadResult integrate_to_inf(const std::function<double(double)>& f, double lo,
                            double rel_tol, double abs_tol) {
    // geometric panels until the contribution fades
    QuadResult total;
    total.converged = true;
    double a = lo, width = std::max(1.0, std::abs(lo));
    int idle = 0;
    for (int k = 0; k < 200; ++k) {
        QuadResult seg = integrate(f, a, a + width, rel_tol, abs_tol, 40);
        total.value += seg.value;
        total.err_estimate += seg.err_estimate;
        total.converged = total.converged && seg.converged;
        if (std::abs(seg.value) < std::max(abs_tol, rel_tol * std::abs(total.value)) * 0.1) {
            if (++idle >= 3) return total;
        } else {
            idle = 0;
        }
        a += width;
        width *= 2.0;
    }
    total.converged = false;
    return total;
}

} // namespace rfso
