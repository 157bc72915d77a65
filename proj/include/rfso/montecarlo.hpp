#ifndef RFSO_MONTECARLO_HPP
#define RFSO_MONTECARLO_HPP

#include <cstdint>

#include "rfso/metrics.hpp"

namespace rfso {

struct McConfig {
    uint64_t n_trials = 100000;
    uint64_t seed = 1;
    uint64_t batch = 65536;

    void validate() const;
};

struct McEstimate {
    double sop_hat = 0.0;
    double sop_lower_hat = 0.0;
    double spsc_hat = 0.0;
    double ip_hat = 0.0;
    double se_sop = 0.0;
    double se_sop_lower = 0.0;
    double se_spsc = 0.0;
    double se_ip = 0.0;
    uint64_t n = 0;
    // bit set when the corresponding estimate saw zero variance
    // (order: sop, sop_lower, spsc, ip)
    unsigned degenerate_mask = 0;
};

/// Event-level simulation of the secrecy metrics. Trial i draws its three
/// channel gains from stream (seed, i), so the estimate depends only on
/// (seed, n_trials), never on batching or thread schedule.
McEstimate estimate(const ScenarioConfig& cfg, const McConfig& mc);

} // namespace rfso

#endif
