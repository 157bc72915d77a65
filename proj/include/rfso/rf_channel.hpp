#ifndef RFSO_RF_CHANNEL_HPP
#define RFSO_RF_CHANNEL_HPP

#include <cstdint>
#include <vector>

#include "rfso/errors.hpp"
#include "rfso/rng.hpp"

namespace rfso {

/// Shape and scale parameters of the alpha-kappa-mu shadowed RF link.
struct RfParams {
    double alpha = 2.0;    // envelope non-linearity
    double kappa = 0.0;    // dominant-to-scattered power ratio
    int mu = 1;            // number of multipath clusters
    double x_shadow = 1.0; // shadowing severity
    double phi_r = 1.0;    // average SNR, linear

    void validate() const;
};

/// Closed-form constants of the SNR distribution plus the compiled series
/// tables used by the CDF. Construct via rf_derive.
struct RfDerived {
    RfParams params;

    double d_const = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;

    /// i-th coefficient of the 1F1 expansion (Pochhammer ratio form);
    /// a4_of(0) == 1.
    double a4_of(int i) const;
    /// series CDF coefficient for term (i, j), j <= mu + i - 1
    double a5_of(int i, int j) const;

    // normalized weights of the expansion: t_weights[i] = (2 A1/alpha)
    // * A4(i) Gamma(mu+i) / A2^(mu+i); they sum to 1
    std::vector<double> t_weights;
    std::vector<double> tail_from; // tail_from[k] = sum_{i >= k} t_weights[i]
    double series_tail_bound = 0.0;
    bool series_converged = false;
};

RfDerived rf_derive(const RfParams& params, int i_max = 200);

/// SNR density via the confluent-hypergeometric closed form (log-space).
double rf_pdf(const RfDerived& d, double gamma);
double rf_pdf(const RfParams& params, double gamma);

/// Density via truncation of the expanded series; cross-check path.
double rf_pdf_series(const RfDerived& d, double gamma, int i_terms = 60);

/// Distribution function via the double series collapsed over i.
double rf_cdf(const RfDerived& d, double gamma);
double rf_cdf(const RfParams& params, double gamma, int i_max = 200);

/// Generative sampler: Nakagami-shadowed dominant clusters plus Gaussian
/// scatter, power-law mapped to SNR and mean-calibrated analytically.
class RfSampler {
public:
    explicit RfSampler(const RfParams& params);
    double draw(RandomStream& rng) const;
    double calibration() const { return scale_; } // phi_r / E[(W/Omega)^(2/alpha)]

private:
    RfParams p_;
    double dominant_ = 0.0; // per-cluster in-phase dominant amplitude
    double omega_ = 0.0;    // E[W]
    double scale_ = 0.0;
    double inv_alpha2_ = 0.0;
};

/// n i.i.d. SNR samples, reproducible from (seed); trial i uses stream
/// (seed, i) so any prefix of the sequence is schedule-independent.
std::vector<double> rf_sample(const RfParams& params, uint64_t seed, std::size_t n);

} // namespace rfso

#endif
