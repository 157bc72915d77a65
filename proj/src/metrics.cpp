#include "rfso/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rfso/quadrature.hpp"
#include "rfso/special_functions.hpp"

namespace rfso {

namespace {

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

bool integer_spaced(double diff) {
    return std::abs(diff - std::round(diff)) < 1e-9;
}

// gamma-ratio coefficient of one expansion term; full product ranges
// (upper through s_M + 1, lower through s_E + 1 entries)
double asym_term(const std::vector<double>& l1, const std::vector<double>& l2,
                 int n_top, int m_low, int p) {
    detail::dd ln_acc;
    int sign = 1, gs = 0;
    for (int l = 0; l < n_top; ++l) {
        if (l == p) continue;
        ln_acc.add(detail::lgamma_signed(l1[p] - l1[l], gs));
        if (gs == 0) return std::numeric_limits<double>::quiet_NaN(); // coalescence
        sign *= gs;
    }
    for (int l = 0; l < m_low; ++l) {
        ln_acc.add(detail::lgamma_signed(1.0 + l2[l] - l1[p], gs));
        if (gs == 0) return std::numeric_limits<double>::quiet_NaN();
        sign *= gs;
    }
    for (std::size_t l = n_top; l < l1.size(); ++l) {
        ln_acc.add(-detail::lgamma_signed(1.0 + l1[l] - l1[p], gs));
        if (gs == 0) return 0.0; // denominator pole kills the term
        sign *= gs;
    }
    for (std::size_t l = m_low; l < l2.size(); ++l) {
        ln_acc.add(-detail::lgamma_signed(l1[p] - l2[l], gs));
        if (gs == 0) return 0.0;
        sign *= gs;
    }
    return sign * std::exp(ln_acc.value());
}

} // namespace

void ScenarioConfig::validate() const {
    rf.validate();
    fso_d.validate();
    fso_e.validate();
    if (!(target_rate >= 0.0))
        throw domain_error("ScenarioConfig: target_rate must be non-negative");
}

struct SecrecyEngine::Impl {
    ScenarioConfig cfg;
    RfDerived rfd;
    FsoDerived dd;
    FsoDerived ed;
    std::vector<MeijerG> mix_g; // (q_d, q_e) row-major: index (qd-1)*b_e + (qe-1)
    std::vector<double> mix_coeff;

    explicit Impl(const ScenarioConfig& c)
        : cfg(c), rfd(rf_derive(c.rf)), dd(fso_derive(c.fso_d)), ed(fso_derive(c.fso_e)) {
        cfg.validate();
        const int sd = cfg.fso_d.s, se = cfg.fso_e.s;
        for (int qd = 1; qd <= cfg.fso_d.b; ++qd) {
            std::vector<double> ld2 = dd.l2(qd);
            for (int qe = 1; qe <= cfg.fso_e.b; ++qe) {
                std::vector<double> upper;
                upper.reserve(3 * sd + 1 + se);
                for (double v : ld2) upper.push_back(1.0 - v);
                upper.push_back(1.0);
                for (double v : ed.l1()) upper.push_back(v);
                std::vector<double> lower = ed.l2(qe);
                lower.push_back(0.0);
                for (double v : dd.l1()) lower.push_back(1.0 - v);
                mix_g.emplace_back(MeijerGSpec(3 * se + 1, 3 * sd, upper, lower));
                mix_coeff.push_back(dd.cdf_coeff(qd) * ed.cdf_coeff(qe));
            }
        }
    }

    double mix_arg(double phi) const {
        // C4 U_d / (B4 phi U_e); C is the eavesdropper family, B the main one
        return ed.z4 * cfg.fso_d.u_elec / (dd.z4 * phi * cfg.fso_e.u_elec);
    }

    double mix_probability(double phi) const {
        double z = mix_arg(phi);
        detail::dd acc;
        for (std::size_t i = 0; i < mix_g.size(); ++i)
            acc.add(mix_coeff[i] * mix_g[i](z));
        return clamp01(acc.value());
    }

    // expansion of the mix probability for U_d -> infinity
    double mix_probability_asymptotic(double phi) const {
        const int sd = cfg.fso_d.s, se = cfg.fso_e.s;
        const int n_top = 3 * sd, m_low = 3 * se + 1;
        const double z = mix_arg(phi);
        const double lnz = std::log(z);
        detail::dd acc;
        std::size_t idx = 0;
        for (int qd = 1; qd <= cfg.fso_d.b; ++qd) {
            std::vector<double> base_l1;
            for (double v : dd.l2(qd)) base_l1.push_back(1.0 - v);
            base_l1.push_back(1.0);
            for (double v : ed.l1()) base_l1.push_back(v);
            // perturb integer-spaced leading entries (a_d, q_d integer cases)
            std::vector<int> cluster(n_top, -1);
            int nc = 0, cmax = 1;
            for (int i = 0; i < n_top; ++i) {
                if (cluster[i] >= 0) continue;
                cluster[i] = nc;
                int size = 1;
                for (int k = i + 1; k < n_top; ++k)
                    if (cluster[k] < 0 && integer_spaced(base_l1[i] - base_l1[k])) {
                        cluster[k] = nc;
                        ++size;
                    }
                cmax = std::max(cmax, size);
                ++nc;
            }
            std::vector<std::pair<std::vector<double>, double>> variants;
            if (cmax == 1) {
                variants.push_back({base_l1, 1.0});
            } else {
                double delta = cmax == 2 ? 1e-4 : 1e-3;
                for (double dir : {1.0, -1.0}) {
                    std::vector<double> v = base_l1;
                    std::vector<int> rank(nc, 0);
                    for (int i = 0; i < n_top; ++i) v[i] += dir * delta * rank[cluster[i]]++;
                    variants.push_back({v, 0.5});
                }
            }
            for (int qe = 1; qe <= cfg.fso_e.b; ++qe, ++idx) {
                std::vector<double> l2 = ed.l2(qe);
                l2.push_back(0.0);
                for (double v : dd.l1()) l2.push_back(1.0 - v);
                double sum = 0.0;
                for (const auto& [l1, w] : variants) {
                    double s = 0.0;
                    for (int p = 0; p < n_top; ++p) {
                        double t = asym_term(l1, l2, n_top, m_low, p);
                        if (std::isnan(t))
                            throw convergence_error(
                                "asymptotic term hit an unhandled gamma pole", 0.0, 1.0);
                        if (t != 0.0) s += t * std::exp((l1[p] - 1.0) * lnz);
                    }
                    sum += w * s;
                }
                acc.add(mix_coeff[idx] * sum);
            }
        }
        return acc.value();
    }

    double rf_survival(double phi) const { return 1.0 - rf_cdf(rfd, phi - 1.0); }

    // integral of F_d(phi*gamma + shift) f_e(gamma) dgamma in the e-link
    // root-argument variable, which flattens the IM/DD endpoint singularity
    double cross_integral(double phi, double shift, double rel_tol) const {
        const double ue = cfg.fso_e.u_elec;
        const int se = cfg.fso_e.s;
        const double t_max = 700.0 / ed.z2; // e-link density ~ 1e-23 beyond
        auto f = [&](double t) {
            if (t <= 0.0) return 0.0;
            double g = ue * std::pow(t, se);
            double x = phi * g + shift;
            double fd_val = x > 0.0 ? dd.cdf(x) : 0.0;
            if (fd_val == 0.0) return 0.0;
            return fd_val * ed.pdf(g) * ue * se * std::pow(t, se - 1);
        };
        // geometric panels so each covers a comparable share of the mass
        std::vector<double> knots{0.0};
        for (double t = std::min(0.125, t_max / 1024.0); t < t_max; t *= 2.0)
            knots.push_back(t);
        knots.push_back(t_max);
        std::vector<double> rough(knots.size() - 1);
        double scale = 0.0;
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            rough[i] = integrate(f, knots[i], knots[i + 1], 1e-3, 1e-14, 24).value;
            scale += std::abs(rough[i]);
        }
        double abs_tol = std::max(1e-300, rel_tol * scale / (2.0 * rough.size()));
        double total = 0.0, err = 0.0;
        bool ok = true;
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            QuadResult qr = integrate(f, knots[i], knots[i + 1], rel_tol, abs_tol, 40);
            total += qr.value;
            err += qr.err_estimate;
            ok = ok && qr.converged;
        }
        if (!ok || err > 10.0 * rel_tol * std::max(std::abs(total), 1e-12))
            throw convergence_error("secrecy quadrature did not converge", total, err);
        return total;
    }
};

SecrecyEngine::SecrecyEngine(const ScenarioConfig& cfg)
    : impl_(std::make_shared<const Impl>(cfg)) {}

const ScenarioConfig& SecrecyEngine::config() const { return impl_->cfg; }
const RfDerived& SecrecyEngine::rf() const { return impl_->rfd; }
const FsoDerived& SecrecyEngine::fso_d() const { return impl_->dd; }
const FsoDerived& SecrecyEngine::fso_e() const { return impl_->ed; }

double SecrecyEngine::mix_probability(double phi) const {
    return impl_->mix_probability(phi);
}
double SecrecyEngine::mix_probability_asymptotic(double phi) const {
    return impl_->mix_probability_asymptotic(phi);
}
double SecrecyEngine::rf_survival() const { return impl_->rf_survival(impl_->cfg.phi()); }

SecrecyResult SecrecyEngine::sop_lower() const {
    double phi = impl_->cfg.phi();
    double v = 1.0 - impl_->rf_survival(phi) * (1.0 - impl_->mix_probability(phi));
    return {clamp01(v), Method::closed_form, 1e-9, true};
}

SecrecyResult SecrecyEngine::sop_lower_asymptotic() const {
    double phi = impl_->cfg.phi();
    double v = 1.0 - impl_->rf_survival(phi) * (1.0 - impl_->mix_probability_asymptotic(phi));
    return {v, Method::asymptotic, 0.0, v >= 0.0 && v <= 1.0};
}

SecrecyResult SecrecyEngine::sop_exact_quadrature(double rel_tol) const {
    double phi = impl_->cfg.phi();
    double fr = 1.0 - impl_->rf_survival(phi);
    double integral = impl_->cross_integral(phi, phi - 1.0, rel_tol);
    double v = fr + (1.0 - fr) * integral;
    return {clamp01(v), Method::quadrature_oracle, rel_tol, true};
}

SecrecyResult SecrecyEngine::spsc() const {
    return {clamp01(1.0 - impl_->mix_probability(1.0)), Method::closed_form, 1e-9, true};
}

SecrecyResult SecrecyEngine::spsc_asymptotic() const {
    double v = 1.0 - impl_->mix_probability_asymptotic(1.0);
    return {v, Method::asymptotic, 0.0, v >= 0.0 && v <= 1.0};
}

SecrecyResult SecrecyEngine::ip() const {
    return {clamp01(impl_->mix_probability(1.0)), Method::closed_form, 1e-9, true};
}

SecrecyResult SecrecyEngine::ip_asymptotic() const {
    // shares every term with the SPSC expansion; complement by construction
    double v = impl_->mix_probability_asymptotic(1.0);
    return {v, Method::asymptotic, 0.0, v >= 0.0 && v <= 1.0};
}

SecrecyResult SecrecyEngine::ip_quadrature(double rel_tol) const {
    double v = impl_->cross_integral(1.0, 0.0, rel_tol);
    return {clamp01(v), Method::quadrature_oracle, rel_tol, true};
}

SecrecyResult SecrecyEngine::spsc_quadrature(double rel_tol) const {
    double v = 1.0 - impl_->cross_integral(1.0, 0.0, rel_tol);
    return {clamp01(v), Method::quadrature_oracle, rel_tol, true};
}

AsymptoticTerms SecrecyEngine::asymptotic_terms(int q_d, int q_e) const {
    const auto& impl = *impl_;
    if (q_d < 1 || q_d > impl.cfg.fso_d.b || q_e < 1 || q_e > impl.cfg.fso_e.b)
        throw domain_error("asymptotic_terms: q indices out of range");
    const int sd = impl.cfg.fso_d.s, se = impl.cfg.fso_e.s;
    AsymptoticTerms t;
    t.s_combined_m = se + 3 * sd;
    t.s_combined_e = 3 * se + sd;
    for (double v : impl.dd.l2(q_d)) t.upper.push_back(1.0 - v);
    t.upper.push_back(1.0);
    for (double v : impl.ed.l1()) t.upper.push_back(v);
    t.lower = impl.ed.l2(q_e);
    t.lower.push_back(0.0);
    for (double v : impl.dd.l1()) t.lower.push_back(1.0 - v);
    t.term_count = 3 * sd;
    t.r_total = impl.rf_survival(impl.cfg.phi());
    return t;
}

SecrecyResult sop_lower(const ScenarioConfig& cfg) { return SecrecyEngine(cfg).sop_lower(); }
SecrecyResult sop_lower_asymptotic(const ScenarioConfig& cfg) {
    return SecrecyEngine(cfg).sop_lower_asymptotic();
}
SecrecyResult sop_exact_quadrature(const ScenarioConfig& cfg, double rel_tol) {
    return SecrecyEngine(cfg).sop_exact_quadrature(rel_tol);
}
SecrecyResult spsc(const ScenarioConfig& cfg) { return SecrecyEngine(cfg).spsc(); }
SecrecyResult spsc_asymptotic(const ScenarioConfig& cfg) {
    return SecrecyEngine(cfg).spsc_asymptotic();
}
SecrecyResult ip(const ScenarioConfig& cfg) { return SecrecyEngine(cfg).ip(); }
SecrecyResult ip_asymptotic(const ScenarioConfig& cfg) {
    return SecrecyEngine(cfg).ip_asymptotic();
}

} // namespace rfso
