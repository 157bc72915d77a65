#ifndef RFSO_METRICS_HPP
#define RFSO_METRICS_HPP

#include <memory>
#include <vector>

#include "rfso/fso_channel.hpp"
#include "rfso/rf_channel.hpp"

namespace rfso {

/// One full system description: RF feeder hop, legitimate FSO hop (d),
/// eavesdropper FSO hop (e), and the target secrecy rate.
struct ScenarioConfig {
    RfParams rf;
    FsoParams fso_d;
    FsoParams fso_e;
    double target_rate = 0.5; // bits/sec/Hz

    double phi() const { return std::exp2(2.0 * target_rate); }
    void validate() const;
};

enum class Method { closed_form, asymptotic, quadrature_oracle, monte_carlo };

struct SecrecyResult {
    double value = 0.0;
    Method method = Method::closed_form;
    double error_estimate = 0.0;
    bool in_range = true; // asymptotic values may exit [0,1]; reported unclamped
};

/// Structure of the high-SNR expansion for one (q_d, q_e) pair.
struct AsymptoticTerms {
    int s_combined_m = 0; // s_e + 3 s_d
    int s_combined_e = 0; // 3 s_e + s_d
    std::vector<double> upper; // length s_combined_m + 1
    std::vector<double> lower; // length s_combined_e + 1
    int term_count = 0;        // expansion runs over 3 s_d leading poles
    double r_total = 0.0;      // the summed R prefactor = 1 - F_r(phi - 1)
};

/// Compiled evaluator for one scenario; caches channel derivations and the
/// per-(q_d, q_e) Meijer G instances. All methods are pure and thread-safe.
class SecrecyEngine {
public:
    explicit SecrecyEngine(const ScenarioConfig& cfg);

    SecrecyResult sop_lower() const;
    SecrecyResult sop_lower_asymptotic() const;
    SecrecyResult sop_exact_quadrature(double rel_tol = 1e-7) const;
    SecrecyResult spsc() const;
    SecrecyResult spsc_asymptotic() const;
    SecrecyResult ip() const;
    SecrecyResult ip_asymptotic() const;
    SecrecyResult ip_quadrature(double rel_tol = 1e-9) const;
    SecrecyResult spsc_quadrature(double rel_tol = 1e-9) const;

    /// Pr{gamma_d < phi * gamma_e} by the closed form (phi >= 1).
    double mix_probability(double phi) const;
    /// Same probability from the high-SNR expansion.
    double mix_probability_asymptotic(double phi) const;
    /// 1 - F_r(phi - 1)
    double rf_survival() const;

    AsymptoticTerms asymptotic_terms(int q_d, int q_e) const;

    const ScenarioConfig& config() const;
    const RfDerived& rf() const;
    const FsoDerived& fso_d() const;
    const FsoDerived& fso_e() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

SecrecyResult sop_lower(const ScenarioConfig& cfg);
SecrecyResult sop_lower_asymptotic(const ScenarioConfig& cfg);
SecrecyResult sop_exact_quadrature(const ScenarioConfig& cfg, double rel_tol = 1e-7);
SecrecyResult spsc(const ScenarioConfig& cfg);
SecrecyResult spsc_asymptotic(const ScenarioConfig& cfg);
SecrecyResult ip(const ScenarioConfig& cfg);
SecrecyResult ip_asymptotic(const ScenarioConfig& cfg);

} // namespace rfso

#endif
