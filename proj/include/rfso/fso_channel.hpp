#ifndef RFSO_FSO_CHANNEL_HPP
#define RFSO_FSO_CHANNEL_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "rfso/errors.hpp"
#include "rfso/meijer_g.hpp"
#include "rfso/rng.hpp"

namespace rfso {

/// Malaga turbulence + pointing-error FSO link parameters.
struct FsoParams {
    double a = 4.2;        // large-scale turbulence parameter
    int b = 3;             // fading severity (natural number, finite mixture)
    double eps = 1.1;      // beam-radius-to-jitter ratio
    int s = 1;             // detection: 1 heterodyne, 2 IM/DD
    double r_scatter = 0.1; // off-axis scatter power
    double zeta_t = 1.0;   // coherent-contribution power
    double u_elec = 1.0;   // electrical SNR, linear

    void validate() const;
    double eps2() const { return eps * eps; }
};

/// Coherent power from the micro-parameters: returns (zeta, zeta_t).
std::pair<double, double> fso_zeta_t(double h0, double rho, double theta_x,
                                     double theta_y);

/// Electrical SNR U from the average SNR phi_m; identity for heterodyne,
/// the moment-ratio map for IM/DD.
double fso_electrical_snr(const FsoParams& shape, double phi_m);

/// Coefficient tables and compiled G evaluators for one link.
struct FsoDerived {
    FsoParams params;

    double z1 = 0.0, z2 = 0.0, z3 = 0.0, z4 = 0.0;

    /// literal per-q tables; for b > 1 these diverge at r_scatter = 0
    /// (the products pdf_coeff / cdf_coeff below stay finite)
    double h_of(int q) const { return h_[q - 1]; }
    double j_of(int q) const { return j_[q - 1]; }
    double w_of(int q) const { return w_[q - 1]; }

    /// Z1*h_q and Z3*w_q assembled in closed form, finite for all r >= 0
    double pdf_coeff(int q) const { return pdf_coeff_[q - 1]; }
    double cdf_coeff(int q) const { return cdf_coeff_[q - 1]; }

    const std::vector<double>& l1() const { return l1_; }
    std::vector<double> l2(int q) const;

    double pdf(double gamma) const;
    double cdf(double gamma) const;
    /// E[gamma^nu] from the Mellin transform of the density.
    double moment(double nu) const;

    std::vector<double> h_, j_, w_, pdf_coeff_, cdf_coeff_;
    std::vector<double> l1_;
    std::vector<MeijerG> pdf_g_, cdf_g_;
};

/// kernel_target is the relative-error target handed to the Meijer G
/// evaluators; the default suits closed-form work, statistical tests can
/// run much faster at ~1e-6.
FsoDerived fso_derive(const FsoParams& params, double kernel_target = 1e-10);

double fso_pdf(const FsoDerived& d, double gamma);
double fso_pdf(const FsoParams& params, double gamma);
double fso_cdf(const FsoDerived& d, double gamma);
double fso_cdf(const FsoParams& params, double gamma);

/// Generative sampler: Gamma large-scale cell times shadowed-Rice small
/// scale times power-law pointing fade, moment-calibrated to the closed
/// form once per parameter set.
class FsoSampler {
public:
    explicit FsoSampler(const FsoDerived& d);

    double draw(RandomStream& rng) const { return snr_from_irradiance(draw_irradiance(rng)); }
    double draw_irradiance(RandomStream& rng) const;
    double snr_from_irradiance(double irradiance) const;

private:
    FsoParams p_;
    double scale_ = 0.0; // U / I0^s
};

std::vector<double> fso_sample(const FsoParams& params, uint64_t seed, std::size_t n);

} // namespace rfso

#endif
