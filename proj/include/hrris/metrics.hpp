#ifndef HRRIS_METRICS_HPP
#define HRRIS_METRICS_HPP

#include <Eigen/Dense>

#include "hrris/channel.hpp"
#include "hrris/surface.hpp"

namespace hrris {

struct RateReport {
    double rate_bits = 0.0;        // exact rate f
    double rate_upper_bits = 0.0;  // upper bound f0
    double noise_cov_logdet = 0.0; // log2|R| in bits; the gap f0 - f
};

struct DetectionReport {
    double gamma_w = 0.0; // Willie's SINR
    double d01 = 0.0;     // KL divergence in nats
    Eigen::VectorXd eigenvalues_uw;
    Eigen::VectorXd eigenvalues_m;
};

/// log2 det of a Hermitian positive-definite matrix via Cholesky.
double logdet_hermitian_bits(const Eigen::MatrixXcd &m);

/// Effective Alice->Bob matrix H_rb Theta H_ar + H_ab.
Eigen::MatrixXcd effective_bob_channel(const SurfaceCoefficients &coeffs, const ChannelSet &channels);

/// Effective Alice->Willie matrix H_rw Theta H_ar + H_aw.
Eigen::MatrixXcd effective_willie_channel(const SurfaceCoefficients &coeffs,
                                          const ChannelSet &channels);

/// U_b = (H_rb Theta H_ar + H_ab)(.)^H, Hermitian PSD.
Eigen::MatrixXcd signal_covariance_bob(const SurfaceCoefficients &coeffs,
                                       const ChannelSet &channels);

/// R = I + H_rb Psi Psi^H H_rb^H; Hermitian, eigenvalues >= 1.
Eigen::MatrixXcd noise_covariance_bob(const SurfaceCoefficients &coeffs,
                                      const ChannelSet &channels);

/// Bob's rate log2|I + (pa/sigma_b^2) U_b R^-1| in bits per channel use.
double covert_rate(const SurfaceCoefficients &coeffs, const ChannelSet &channels, double pa);

/// Upper bound f0 = log2|R + rho U_b|; coincides with covert_rate when the
/// active set is empty.
double rate_upper_bound(const SurfaceCoefficients &coeffs, const ChannelSet &channels, double pa);

/// gamma_w = pdet(U_w) pa / (pdet(M) sigma_w^2), with pdet the product of
/// eigenvalues above 1e-10 of the largest (equals the determinant on
/// full-rank instances).
double willie_sinr(const SurfaceCoefficients &coeffs, const ChannelSet &channels, double pa);

/// D_01 = l [ln(1+gamma) - gamma/(1+gamma)] in nats, evaluated in a
/// cancellation-free form so tiny gamma values stay strictly ordered.
double kl_divergence(double gamma_w, double l);

RateReport rate_report(const SurfaceCoefficients &coeffs, const ChannelSet &channels, double pa);

DetectionReport detection_report(const SurfaceCoefficients &coeffs, const ChannelSet &channels,
                                 double pa, double l);

} // namespace hrris

#endif
