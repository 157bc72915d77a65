#include "rfso/meijer_g.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include "rfso/special_functions.hpp"

namespace rfso {

namespace {

constexpr double kIntTol = 1e-9;      // "differs by an integer" detection
constexpr int kSeriesCap = 10000;     // hard cap per pole family
constexpr int kQuietRun = 20;         // consecutive sub-threshold terms to stop
constexpr double kLnBand = 0.01;      // |ln z| band around 1 handled by quadrature (p == q)

bool integer_spaced(double diff, long long& d) {
    double r = std::round(diff);
    if (std::abs(diff - r) < kIntTol) {
        d = static_cast<long long>(r);
        return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// residue series over the b_j (j < m) pole families
// ---------------------------------------------------------------------------

struct SpecData {
    int m = 0, n = 0;
    std::vector<double> a, b;
    int p() const { return static_cast<int>(a.size()); }
    int q() const { return static_cast<int>(b.size()); }
};

SpecData reflect(const SpecData& s) {
    SpecData r;
    r.m = s.n;
    r.n = s.m;
    r.a.reserve(s.b.size());
    for (double v : s.b) r.a.push_back(1.0 - v);
    r.b.reserve(s.a.size());
    for (double v : s.a) r.b.push_back(1.0 - v);
    return r;
}

struct Family {
    double b_h = 0.0;
    long long k0 = 0;              // first non-vanishing term
    long long k_stop = -1;         // series terminates at this k (-1: none)
    double ln_c0 = 0.0;            // log |(-1)^k0 / k0! * gamma products(k0)|
    int sign0 = 1;
    bool pole = false;             // numerator gamma pole: unhandled coalescence
    std::vector<double> db;        // b_j - b_h, j != h, j < m
    std::vector<double> na;        // 1 - a_i + b_h, i < n
    std::vector<double> qb;        // 1 - b_j + b_h, j >= m
    std::vector<double> pa;        // a_i - b_h, i >= n
};

struct SeriesPlan {
    std::vector<Family> families;
    bool valid = false;            // route exists (m > 0 or trivially zero)
};

Family build_family(const SpecData& s, int h) {
    Family f;
    f.b_h = s.b[h];
    for (int j = 0; j < s.m; ++j)
        if (j != h) f.db.push_back(s.b[j] - f.b_h);
    for (int i = 0; i < s.n; ++i) f.na.push_back(1.0 - s.a[i] + f.b_h);
    for (int j = s.m; j < s.q(); ++j) f.qb.push_back(1.0 - s.b[j] + f.b_h);
    for (int i = s.n; i < s.p(); ++i) f.pa.push_back(s.a[i] - f.b_h);

    long long d = 0;
    for (int j = s.m; j < s.q(); ++j)
        if (integer_spaced(s.b[j] - f.b_h, d) && d >= 1) f.k0 = std::max(f.k0, d);
    for (int i = s.n; i < s.p(); ++i)
        if (integer_spaced(s.a[i] - f.b_h, d)) {
            long long stop = std::max<long long>(d, 0);
            f.k_stop = (f.k_stop < 0) ? stop : std::min(f.k_stop, stop);
        }
    if (f.k_stop >= 0 && f.k_stop <= f.k0) return f; // family vanishes entirely

    detail::dd ln_acc;
    int sign = (f.k0 % 2 == 0) ? 1 : -1;
    ln_acc.add(-ln_gamma(static_cast<double>(f.k0) + 1.0));
    int gs = 0;
    for (double v : f.db) {
        ln_acc.add(detail::lgamma_signed(v - static_cast<double>(f.k0), gs));
        if (gs == 0) { f.pole = true; return f; }
        sign *= gs;
    }
    for (double v : f.na) {
        ln_acc.add(detail::lgamma_signed(v + static_cast<double>(f.k0), gs));
        if (gs == 0) { f.pole = true; return f; }
        sign *= gs;
    }
    for (double v : f.qb) {
        ln_acc.add(-detail::lgamma_signed(v + static_cast<double>(f.k0), gs));
        sign *= gs; // denominator pole cannot happen at k0 by construction
    }
    for (double v : f.pa) {
        ln_acc.add(-detail::lgamma_signed(v - static_cast<double>(f.k0), gs));
        sign *= gs;
    }
    f.ln_c0 = ln_acc.value();
    f.sign0 = sign;
    return f;
}

SeriesPlan build_plan(const SpecData& s) {
    SeriesPlan plan;
    plan.valid = true;
    plan.families.reserve(s.m);
    for (int h = 0; h < s.m; ++h) plan.families.push_back(build_family(s, h));
    return plan;
}

struct SeriesStatus {
    double value = 0.0;
    double max_mag = 0.0;
    bool capped = false;
    bool pole_hit = false;
};

SeriesStatus eval_series(const SeriesPlan& plan, double z) {
    SeriesStatus st;
    const double lnz = std::log(z);
    detail::dd total;
    for (const Family& f : plan.families) {
        if (f.pole) { st.pole_hit = true; return st; }
        if (f.k_stop >= 0 && f.k_stop <= f.k0) continue;
        long long k = f.k0;
        double ln_t = f.ln_c0 + (f.b_h + static_cast<double>(k)) * lnz;
        double term = (ln_t < -745.0) ? 0.0 : f.sign0 * std::exp(ln_t);
        int quiet = 0;
        while (true) {
            if (term != 0.0) {
                total.add(term);
                double at = std::max(std::abs(term), std::abs(total.value()));
                if (at > st.max_mag) st.max_mag = at;
                if (at < std::abs(total.value()) * 1e-16 + 1e-320) {
                    if (++quiet >= kQuietRun) break;
                } else {
                    quiet = 0;
                }
            } else if (++quiet >= kQuietRun && k > f.k0 + 4) {
                break;
            }
            if (f.k_stop >= 0 && k + 1 >= f.k_stop) break;
            if (k - f.k0 >= kSeriesCap) { st.capped = true; break; }
            // rational one-step update of the term; a p-n zero terminates
            // the family (the next denominator gamma sits on a pole)
            double num = -z / static_cast<double>(k + 1);
            for (double v : f.na) num *= v + static_cast<double>(k);
            for (double v : f.pa) num *= v - static_cast<double>(k + 1);
            double den = 1.0;
            for (double v : f.db) den *= v - static_cast<double>(k + 1);
            for (double v : f.qb) den *= v + static_cast<double>(k);
            if (den == 0.0) { st.pole_hit = true; return st; }
            term *= num / den;
            if (!std::isfinite(term)) { st.capped = true; break; }
            ++k;
        }
        if (st.capped) break;
    }
    st.value = total.value();
    return st;
}

// ---------------------------------------------------------------------------
// Mellin-Barnes quadrature along a vertical contour (fallback path)
// ---------------------------------------------------------------------------

// Legendre nodes/weights by Newton iteration, cached per order.
struct GlRule {
    std::vector<double> x, w;
    explicit GlRule(int n) {
        x.resize(n);
        w.resize(n);
        for (int i = 0; i < n; ++i) {
            double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = n * (t * p1 - p0) / (t * t - 1.0);
                double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-15) break;
            }
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            x[i] = t;
            w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};

const GlRule& gl32() {
    static const GlRule rule(32);
    return rule;
}

struct MbIntegrand {
    const SpecData* s = nullptr;
    double lnz = 0.0;

    std::complex<double> ln_at(std::complex<double> t) const {
        std::complex<double> acc = t * lnz;
        for (int j = 0; j < s->m; ++j) acc += detail::lgamma_complex(s->b[j] - t);
        for (int i = 0; i < s->n; ++i) acc += detail::lgamma_complex(1.0 - s->a[i] + t);
        for (int j = s->m; j < s->q(); ++j) acc -= detail::lgamma_complex(1.0 - s->b[j] + t);
        for (int i = s->n; i < s->p(); ++i) acc -= detail::lgamma_complex(s->a[i] - t);
        return acc;
    }
};

double mb_line_magnitude(const MbIntegrand& f, double c) {
    std::complex<double> v = f.ln_at(std::complex<double>(c, 0.0));
    return v.real();
}

// contour position: between the pole families when both exist, otherwise
// chased toward the integrand magnitude minimum (saddle) on the free side
double mb_pick_contour(const SpecData& s, const MbIntegrand& f) {
    double max_left = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < s.n; ++i) max_left = std::max(max_left, s.a[i] - 1.0);
    double min_right = std::numeric_limits<double>::infinity();
    for (int j = 0; j < s.m; ++j) min_right = std::min(min_right, s.b[j]);

    if (s.n == 0) {
        double c_hi = min_right - 0.2;
        double best_c = c_hi, best = mb_line_magnitude(f, c_hi);
        double off = 0.05;
        for (int k = 0; k < 80 && off < 4000.0; ++k, off *= 1.30) {
            double c = c_hi - off;
            double v = mb_line_magnitude(f, c);
            if (v < best) { best = v; best_c = c; }
        }
        return best_c;
    }
    if (!(max_left < min_right))
        throw domain_error("meijer_g: no vertical contour separates the pole families");
    double lo = max_left, hi = min_right;
    // stay away from both pole families so no narrow spike hides between
    // quadrature nodes on the line
    double pad = std::min(0.3, 0.25 * (hi - lo));
    double best_c = 0.5 * (lo + hi), best = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 32; ++k) {
        double c = lo + pad + (hi - lo - 2 * pad) * k / 32.0;
        double v = mb_line_magnitude(f, c);
        if (v < best) { best = v; best_c = c; }
    }
    return best_c;
}

double mb_integrate(const SpecData& s, double z, double& err) {
    MbIntegrand f{&s, std::log(z)};
    const double c = mb_pick_contour(s, f);
    const double ln0 = mb_line_magnitude(f, c); // normalization to avoid overflow

    // panel widths grow once the oscillation is resolved; the decay of the
    // gamma products limits the useful range to a handful of panels
    const double h_max = std::min(4.0, 12.0 / (1.0 + std::abs(f.lnz)));
    auto sweep = [&](double h0) {
        const GlRule& r = gl32();
        detail::dd acc;
        double t0 = 0.0, h = h0;
        int idle = 0;
        for (int panel = 0; panel < 400; ++panel) {
            double t1 = t0 + h;
            double mid = 0.5 * (t0 + t1), half = 0.5 * h;
            double psum = 0.0;
            for (int i = 0; i < 32; ++i) {
                std::complex<double> lf =
                    f.ln_at(std::complex<double>(c, mid + half * r.x[i]));
                psum += r.w[i] * (std::exp(lf - ln0)).real();
            }
            psum *= half;
            acc.add(psum);
            if (std::abs(psum) < std::abs(acc.value()) * 1e-18 + 1e-310) {
                if (++idle >= 3) break;
            } else {
                idle = 0;
            }
            t0 = t1;
            h = std::min(h * 1.6, h_max);
        }
        return acc.value();
    };

    double h = std::min(0.5, 3.0 / (1.0 + std::abs(f.lnz)));
    double v1 = sweep(h);
    double v2 = sweep(0.5 * h);
    err = std::abs(v1 - v2);
    // halves of the symmetric contour are conjugate: value = (1/pi) Re int_0^inf
    double scale = std::exp(ln0) / M_PI;
    err *= scale / (std::abs(v2 * scale) + 1e-300);
    return v2 * scale;
}

} // namespace

// ---------------------------------------------------------------------------

MeijerGSpec::MeijerGSpec(int m_, int n_, std::vector<double> a, std::vector<double> b)
    : m(m_), n(n_), a_params(std::move(a)), b_params(std::move(b)) {
    if (m < 0 || n < 0 || n > p() || m > q())
        throw domain_error("MeijerGSpec: require 0 <= n <= p and 0 <= m <= q");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            long long d = 0;
            if (integer_spaced(a_params[i] - b_params[j], d) && d >= 1)
                throw domain_error("MeijerGSpec: a_i - b_j is a positive integer (undefined instance)");
        }
    if (m == 0 && n == 0)
        throw domain_error("MeijerGSpec: m = n = 0 has no pole family");
}

struct MeijerG::Impl {
    MeijerGSpec spec;
    double target;

    SpecData direct;
    SpecData reversed;

    // exact plan, or four perturbed variants with extrapolation weights
    struct RoutePlans {
        std::vector<SeriesPlan> plans;
        std::vector<double> weights;
        double perturb_err = 0.0;
        int cluster_max = 1;
    };
    RoutePlans direct_plans;
    RoutePlans reversed_plans;

    explicit Impl(const MeijerGSpec& s, double target_rel)
        : spec(s), target(target_rel) {
        direct.m = s.m;
        direct.n = s.n;
        direct.a = s.a_params;
        direct.b = s.b_params;
        reversed = reflect(direct);
        direct_plans = make_plans(direct);
        reversed_plans = make_plans(reversed);
    }

    // clusters of integer-spaced b_j (j < m); cluster size drives delta
    static RoutePlans make_plans(const SpecData& s) {
        RoutePlans rp;
        std::vector<int> cluster(s.m, -1);
        int n_clusters = 0;
        int c_max = 1;
        for (int j = 0; j < s.m; ++j) {
            if (cluster[j] >= 0) continue;
            cluster[j] = n_clusters;
            int size = 1;
            for (int k = j + 1; k < s.m; ++k) {
                long long d = 0;
                if (cluster[k] < 0 && integer_spaced(s.b[j] - s.b[k], d)) {
                    cluster[k] = n_clusters;
                    ++size;
                }
            }
            c_max = std::max(c_max, size);
            ++n_clusters;
        }
        if (c_max == 1) {
            rp.plans.push_back(build_plan(s));
            rp.weights.push_back(1.0);
            rp.perturb_err = 0.0;
            return rp;
        }
        // dyadic offsets: integer-spaced cluster members stay integer-spaced
        // plus an exactly representable delta, so the near-pole gamma
        // arguments carry no subtraction error
        rp.cluster_max = c_max;
        double delta = (c_max == 2) ? 0x1p-13 : (c_max == 3 ? 0x1p-10 : 0x1p-8);
        rp.perturb_err = (c_max == 2) ? 1e-11 : (c_max == 3 ? 2e-8 : 1e-7);
        // members of a cluster get offsets 0, t*delta, 2t*delta, ... ;
        // evaluate at +-delta and +-2delta, then Richardson-extrapolate
        for (double scale : {1.0, -1.0, 2.0, -2.0}) {
            SpecData ps = s;
            std::vector<int> rank(n_clusters, 0);
            for (int j = 0; j < s.m; ++j) {
                int t = rank[cluster[j]]++;
                ps.b[j] += scale * delta * t;
            }
            rp.plans.push_back(build_plan(ps));
        }
        rp.weights = {2.0 / 3.0, 2.0 / 3.0, -1.0 / 6.0, -1.0 / 6.0};
        return rp;
    }

    Eval eval_route(const RoutePlans& rp, double z) const {
        double value = 0.0;
        double cancel = 0.0;
        for (size_t i = 0; i < rp.plans.size(); ++i) {
            SeriesStatus st = eval_series(rp.plans[i], z);
            if (st.capped || st.pole_hit)
                return {0.0, std::numeric_limits<double>::infinity()};
            value += rp.weights[i] * st.value;
            cancel = std::max(cancel, st.max_mag);
        }
        // the gamma-product stack behind each family is good to ~2e-15
        // relative, so cancellation across families amplifies that floor
        double est = 1e-15 + 2e-15 * cancel / (std::abs(value) + 1e-300) + rp.perturb_err;
        return {value, est};
    }

    Eval eval(double x) const {
        if (!(x > 0.0)) throw domain_error("meijer_g: argument must be positive");
        const int p = direct.p(), q = direct.q();
        Eval best{0.0, std::numeric_limits<double>::infinity()};
        double accept = target;

        auto acceptance = [&](const RoutePlans& rp) {
            // a pair of coalescing parameters extrapolates cleanly; wider
            // clusters are kept only if the contour integral cannot do better
            if (rp.cluster_max <= 2)
                return std::max(target, 1.5 * rp.perturb_err + 1e-14);
            return target;
        };
        bool series_ok = true;
        if (p < q) {
            best = eval_route(direct_plans, x);
            accept = acceptance(direct_plans);
        } else if (p > q) {
            best = eval_route(reversed_plans, 1.0 / x);
            accept = acceptance(reversed_plans);
        } else {
            double lnx = std::log(x);
            if (std::abs(lnx) < kLnBand) {
                series_ok = false; // p == q too close to the unit circle
            } else if (lnx < 0.0) {
                best = eval_route(direct_plans, x);
                accept = acceptance(direct_plans);
            } else {
                best = eval_route(reversed_plans, 1.0 / x);
                accept = acceptance(reversed_plans);
            }
        }
        if (series_ok && best.err_estimate <= accept) return best;

        double mb_err = 0.0;
        double mb_val = mb_integrate(direct, x, mb_err);
        if (!series_ok || mb_err < best.err_estimate) return {mb_val, mb_err};
        return best;
    }
};

MeijerG::MeijerG(const MeijerGSpec& spec, double target_rel_err)
    : impl_(std::make_shared<const Impl>(spec, target_rel_err)) {}

MeijerG::Eval MeijerG::eval(double x) const { return impl_->eval(x); }

const MeijerGSpec& MeijerG::spec() const { return impl_->spec; }

double meijer_g(const MeijerGSpec& spec, double x) { return MeijerG(spec)(x); }

} // namespace rfso
