#include "rfso/rf_channel.hpp"

#include <cmath>

#include "rfso/special_functions.hpp"

namespace rfso {

namespace {

double kappa_ratio(const RfParams& p) {
    // mu*kappa / (mu*kappa + x); zero when kappa == 0
    return p.mu * p.kappa / (p.mu * p.kappa + p.x_shadow);
}

// log of x^x / (mu kappa + x)^x
double ln_shadow_ratio(const RfParams& p) {
    return p.x_shadow * std::log(p.x_shadow / (p.mu * p.kappa + p.x_shadow));
}

// E[(W/Omega)^nu] of the unit-mean kappa-mu shadowed power W/Omega
double shadowed_power_moment(const RfParams& p, double nu) {
    double zk = kappa_ratio(p);
    double mu = p.mu, x = p.x_shadow;
    double ln_d2 = x * std::log((p.mu * p.kappa + x) / x) + ln_gamma(mu) -
                   ln_gamma(mu + 1.0) - std::log(hyp2f1(x, mu + 1.0, mu, zk));
    return std::exp(nu * ln_d2 + ln_shadow_ratio(p) + ln_gamma(mu + nu) - ln_gamma(mu)) *
           hyp2f1(x, mu + nu, mu, zk);
}

} // namespace

void RfParams::validate() const {
    if (!(alpha > 0.0)) throw domain_error("RfParams: alpha must be positive");
    if (!(kappa >= 0.0)) throw domain_error("RfParams: kappa must be non-negative");
    if (mu < 1) throw domain_error("RfParams: mu must be a positive integer");
    if (!(x_shadow > 0.0)) throw domain_error("RfParams: x_shadow must be positive");
    if (!(phi_r > 0.0)) throw domain_error("RfParams: phi_r must be positive");
}

RfDerived rf_derive(const RfParams& params, int i_max) {
    params.validate();
    RfDerived d;
    d.params = params;
    const double alpha = params.alpha, x = params.x_shadow, phi = params.phi_r;
    const double mu = params.mu;
    const double zk = kappa_ratio(params);

    double ln_d = 0.5 * alpha *
                  (x * std::log((mu * params.kappa + x) / x) + ln_gamma(mu) -
                   ln_gamma(mu + 2.0 / alpha) -
                   std::log(hyp2f1(x, mu + 2.0 / alpha, mu, zk)));
    d.d_const = std::exp(ln_d);
    double ln_a1 = ln_shadow_ratio(params) + std::log(alpha) -
                   0.5 * alpha * mu * std::log(phi) - std::log(2.0) - mu * ln_d -
                   ln_gamma(mu);
    d.a1 = std::exp(ln_a1);
    d.a2 = std::exp(-ln_d - 0.5 * alpha * std::log(phi));
    d.a3 = zk * d.a2;

    // t_weights[0] = 1 for kappa = 0 (single term); ratio (x+i)/(i+1) * zk
    double t = std::exp(std::log(2.0 / alpha) + ln_a1 + ln_gamma(mu) -
                        mu * std::log(d.a2));
    d.t_weights.push_back(t);
    double total = t;
    d.series_converged = (zk == 0.0);
    d.series_tail_bound = 0.0;
    if (zk > 0.0) {
        for (int i = 0; i + 1 < i_max; ++i) {
            t *= (x + i) / (i + 1.0) * zk;
            d.t_weights.push_back(t);
            total += t;
            double r = (x + i + 1) / (i + 2.0) * zk;
            if (r < 1.0) {
                d.series_tail_bound = t * r / (1.0 - r);
                if (d.series_tail_bound < 1e-12 * total) {
                    d.series_converged = true;
                    break;
                }
            }
        }
    }
    std::size_t k = d.t_weights.size();
    d.tail_from.assign(k + 1, 0.0);
    d.tail_from[k] = d.series_tail_bound;
    for (std::size_t i = k; i-- > 0;) d.tail_from[i] = d.tail_from[i + 1] + d.t_weights[i];
    return d;
}

double RfDerived::a4_of(int i) const {
    if (i == 0) return 1.0;
    const double x = params.x_shadow, mu = params.mu;
    return std::exp(ln_gamma(x + i) - ln_gamma(x) - ln_gamma(mu + i) + ln_gamma(mu) +
                    i * std::log(a3) - ln_gamma(i + 1.0));
}

double RfDerived::a5_of(int i, int j) const {
    const double mu = params.mu;
    return a4_of(i) * std::exp(ln_gamma(mu + i) - ln_gamma(j + 1.0) -
                               (mu + i - j) * std::log(a2));
}

double rf_pdf(const RfDerived& d, double gamma) {
    if (!(gamma > 0.0)) throw domain_error("rf_pdf: gamma must be positive");
    const RfParams& p = d.params;
    double u = std::pow(gamma, 0.5 * p.alpha);
    double ln_f = std::log(d.a1) + (0.5 * p.alpha * p.mu - 1.0) * std::log(gamma) -
                  d.a2 * u;
    if (d.a3 > 0.0) ln_f += hyp1f1_ln(p.x_shadow, p.mu, d.a3 * u);
    return std::exp(ln_f);
}

double rf_pdf(const RfParams& params, double gamma) {
    return rf_pdf(rf_derive(params), gamma);
}

double rf_pdf_series(const RfDerived& d, double gamma, int i_terms) {
    if (!(gamma > 0.0)) throw domain_error("rf_pdf_series: gamma must be positive");
    const RfParams& p = d.params;
    double u = std::pow(gamma, 0.5 * p.alpha);
    double term = std::exp((0.5 * p.alpha * p.mu - 1.0) * std::log(gamma) - d.a2 * u);
    detail::dd sum;
    for (int i = 0; i < i_terms; ++i) {
        sum.add(term);
        term *= (p.x_shadow + i) * d.a3 * u / ((p.mu + i) * (i + 1.0));
        if (term < sum.value() * 1e-17) break;
    }
    return d.a1 * sum.value();
}

double rf_cdf(const RfDerived& d, double gamma) {
    if (gamma < 0.0) throw domain_error("rf_cdf: gamma must be non-negative");
    if (!d.series_converged)
        throw convergence_error("rf_cdf: i-series tail bound not met at i_max",
                                0.0, d.series_tail_bound);
    if (gamma == 0.0) return 0.0;
    const RfParams& p = d.params;
    const double lam = d.a2 * std::pow(gamma, 0.5 * p.alpha); // Poisson rate A2 * gamma^(alpha/2)
    const long long kmax = static_cast<long long>(d.tail_from.size()) - 1;

    // survival = sum_j Pois(j; lam) * tail_from[max(0, j - mu + 1)],
    // swept outward from the Poisson mode in both directions
    auto tail_at = [&](long long j) {
        long long idx = j - p.mu + 1;
        if (idx < 0) idx = 0;
        if (idx > kmax) idx = kmax;
        return d.tail_from[static_cast<std::size_t>(idx)];
    };
    long long j0 = static_cast<long long>(lam);
    double lp0 = -lam + j0 * std::log(lam) - ln_gamma(static_cast<double>(j0) + 1.0);
    double p0 = std::exp(lp0);
    detail::dd surv;
    double pj = p0;
    for (long long j = j0; j >= 0; --j) {
        surv.add(pj * tail_at(j));
        if (pj < 1e-18 && j < j0) break;
        pj *= j / lam;
    }
    pj = p0;
    for (long long j = j0 + 1;; ++j) {
        pj *= lam / j;
        if (pj < 1e-18 && j > j0 + 4) break;
        surv.add(pj * tail_at(j));
    }
    double f = 1.0 - surv.value();
    if (f < 0.0) f = 0.0;
    if (f > 1.0) f = 1.0;
    return f;
}

double rf_cdf(const RfParams& params, double gamma, int i_max) {
    return rf_cdf(rf_derive(params, i_max), gamma);
}

RfSampler::RfSampler(const RfParams& params) : p_(params) {
    params.validate();
    dominant_ = std::sqrt(params.kappa);
    omega_ = 2.0 * params.mu * (1.0 + params.kappa);
    inv_alpha2_ = 2.0 / params.alpha;
    scale_ = params.phi_r / shadowed_power_moment(params, inv_alpha2_);
}

double RfSampler::draw(RandomStream& rng) const {
    double xi = std::sqrt(rng.gamma(p_.x_shadow, 1.0 / p_.x_shadow));
    double w = 0.0;
    for (int c = 0; c < p_.mu; ++c) {
        double in_phase = rng.normal() + xi * dominant_;
        double quad = rng.normal() + xi * dominant_;
        w += in_phase * in_phase + quad * quad;
    }
    return scale_ * std::pow(w / omega_, inv_alpha2_);
}

std::vector<double> rf_sample(const RfParams& params, uint64_t seed, std::size_t n) {
    if (n < 1) throw domain_error("rf_sample: n must be at least 1");
    RfSampler sampler(params);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        RandomStream rng(seed, i);
        out[i] = sampler.draw(rng);
    }
    return out;
}

} // namespace rfso
