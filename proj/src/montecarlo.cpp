#include "rfso/montecarlo.hpp"

#include <cmath>

namespace rfso {

void McConfig::validate() const {
    if (n_trials < 1000)
        throw domain_error("McConfig: fewer than 1000 trials cannot report a standard error");
    if (batch < 1) throw domain_error("McConfig: batch must be positive");
}

McEstimate estimate(const ScenarioConfig& cfg, const McConfig& mc) {
    cfg.validate();
    mc.validate();
    RfSampler rf(cfg.rf);
    FsoSampler fso_d(fso_derive(cfg.fso_d));
    FsoSampler fso_e(fso_derive(cfg.fso_e));

    const double tc = cfg.target_rate;
    const double phi = cfg.phi();
    const double rf_gate = phi - 1.0;

    uint64_t c_sop = 0, c_bound = 0, c_spsc = 0, c_ip = 0;
    for (uint64_t i = 0; i < mc.n_trials; ++i) {
        RandomStream rng(mc.seed, i);
        double g_r = rf.draw(rng);
        double g_d = fso_d.draw(rng);
        double g_e = fso_e.draw(rng);

        double t_sr = 0.5 * std::log2(1.0 + g_r);
        double t_rd = 0.5 * (std::log2(1.0 + g_d) - std::log2(1.0 + g_e));
        if (t_rd < 0.0) t_rd = 0.0; // [z]+ clip
        double t_sd = std::min(t_sr, t_rd);

        if (t_sd < tc) ++c_sop;
        if (g_r <= rf_gate || g_d < phi * g_e) ++c_bound;
        if (g_d > g_e) ++c_spsc;
        if (g_d < g_e) ++c_ip;
    }

    auto finish = [&](uint64_t c) {
        return static_cast<double>(c) / static_cast<double>(mc.n_trials);
    };
    auto se_of = [&](double p) {
        return std::sqrt(p * (1.0 - p) / static_cast<double>(mc.n_trials));
    };

    McEstimate est;
    est.n = mc.n_trials;
    est.sop_hat = finish(c_sop);
    est.sop_lower_hat = finish(c_bound);
    est.spsc_hat = finish(c_spsc);
    est.ip_hat = finish(c_ip);
    est.se_sop = se_of(est.sop_hat);
    est.se_sop_lower = se_of(est.sop_lower_hat);
    est.se_spsc = se_of(est.spsc_hat);
    est.se_ip = se_of(est.ip_hat);
    const double probs[4] = {est.sop_hat, est.sop_lower_hat, est.spsc_hat, est.ip_hat};
    for (int k = 0; k < 4; ++k)
        if (probs[k] == 0.0 || probs[k] == 1.0) est.degenerate_mask |= 1u << k;
    return est;
}

} // namespace rfso
