#include "hrris/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace hrris {

namespace {

/// log of the pseudo-determinant of a Hermitian PSD matrix: sum of
/// ln(eigenvalue) over eigenvalues above rel_tol of the largest. Returns
/// false when the matrix is numerically zero (no usable eigenvalue).
bool log_pdet(const Eigen::MatrixXcd &m, double rel_tol, double &out) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd &ev = es.eigenvalues();
    double largest = ev(ev.size() - 1);
    if (!(largest > 0.0))
        return false;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > rel_tol * largest)
            acc += std::log(ev(i));
    out = acc;
    return true;
}

constexpr double kPdetRelTol = 1e-10;

} // namespace

double logdet_hermitian_bits(const Eigen::MatrixXcd &m) {
    Eigen::LLT<Eigen::MatrixXcd> llt(m);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("logdet: matrix is not positive definite");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        acc += std::log2(std::real(llt.matrixL()(i, i)));
    return 2.0 * acc;
}

Eigen::MatrixXcd effective_bob_channel(const SurfaceCoefficients &coeffs, const ChannelSet &channels) {
    return channels.h_rb * coeffs.theta.asDiagonal() * channels.h_ar + channels.h_ab;
}

Eigen::MatrixXcd effective_willie_channel(const SurfaceCoefficients &coeffs,
                                          const ChannelSet &channels) {
    return channels.h_rw * coeffs.theta.asDiagonal() * channels.h_ar + channels.h_aw;
}

Eigen::MatrixXcd signal_covariance_bob(const SurfaceCoefficients &coeffs, const ChannelSet &channels) {
    Eigen::MatrixXcd g = effective_bob_channel(coeffs, channels);
    Eigen::MatrixXcd u = g * g.adjoint();
    return 0.5 * (u + u.adjoint().eval());
}

Eigen::MatrixXcd noise_covariance_bob(const SurfaceCoefficients &coeffs, const ChannelSet &channels) {
    Eigen::Index nb = channels.n_bob();
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(nb, nb);
    for (int idx : coeffs.active_set) {
        Eigen::VectorXcd b = channels.h_rb.col(idx);
        r += std::norm(coeffs.theta(idx)) * (b * b.adjoint());
    }
    return 0.5 * (r + r.adjoint().eval());
}

double covert_rate(const SurfaceCoefficients &coeffs, const ChannelSet &channels, double pa) {
    if (pa < 0.0)
        throw std::invalid_argument("covert_rate: pa must be >= 0");
    if (pa == 0.0)
        return 0.0;
    Eigen::MatrixXcd r = noise_covariance_bob(coeffs, channels);
    Eigen::MatrixXcd u = signal_covariance_bob(coeffs, channels);
    double rho = pa / channels.sigma_b_sq;
    return logdet_hermitian_bits(r + rho * u) - logdet_hermitian_bits(r);
}

double rate_upper_bound(const SurfaceCoefficients &coeffs, const ChannelSet &channels, double pa) {
    if (pa < 0.0)
        throw std::invalid_argument("rate_upper_bound: pa must be >= 0");
    Eigen::MatrixXcd r = noise_covariance_bob(coeffs, channels);
    Eigen::MatrixXcd u = signal_covariance_bob(coeffs, channels);
    double rho = pa / channels.sigma_b_sq;
    return logdet_hermitian_bits(r + rho * u);
}

double willie_sinr(const SurfaceCoefficients &coeffs, const ChannelSet &channels, double pa) {
    if (pa < 0.0)
        throw std::invalid_argument("willie_sinr: pa must be >= 0");
    if (pa == 0.0)
        return 0.0;
    Eigen::MatrixXcd gw = effective_willie_channel(coeffs, channels);
    Eigen::MatrixXcd uw = gw * gw.adjoint();
    uw = 0.5 * (uw + uw.adjoint().eval());

    Eigen::Index nw = channels.n_willie();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(nw, nw);
    for (int idx : coeffs.active_set) {
        Eigen::VectorXcd b = channels.h_rw.col(idx);
        m += std::norm(coeffs.theta(idx)) * (b * b.adjoint());
    }

    double log_uw = 0.0;
    if (!log_pdet(uw, kPdetRelTol, log_uw))
        return 0.0; // no signal reaches Willie at all
    double log_m = 0.0;
    log_pdet(m, kPdetRelTol, log_m); // eigenvalues >= 1, never degenerate
    return std::exp(log_uw - log_m + std::log(pa) - std::log(channels.sigma_w_sq));
}

double kl_divergence(double gamma_w, double l) {
    if (gamma_w < 0.0)
        throw std::invalid_argument("kl_divergence: gamma must be >= 0");
    if (!(l >= 1.0))
        throw std::invalid_argument("kl_divergence: l must be >= 1");
    if (gamma_w == 0.0)
        return 0.0;
    double s = gamma_w / (1.0 + gamma_w);
    double core;
    if (gamma_w < 1.0) {
        // ln(1+g) - g/(1+g) = -ln(1-s) - s = sum_{k>=2} s^k / k; the direct
        // difference cancels catastrophically for g << 1.
        double sk = s * s;
        core = sk / 2.0;
        for (int k = 3; k <= 72; ++k) {
            sk *= s;
            double term = sk / k;
            core += term;
            if (term < core * 1e-18)
                break;
        }
    } else {
        core = std::log1p(gamma_w) - s;
    }
    return l * core;
}

RateReport rate_report(const SurfaceCoefficients &coeffs, const ChannelSet &channels, double pa) {
    RateReport rep;
    Eigen::MatrixXcd r = noise_covariance_bob(coeffs, channels);
    rep.noise_cov_logdet = logdet_hermitian_bits(r);
    if (pa == 0.0) {
        rep.rate_bits = 0.0;
        rep.rate_upper_bits = rep.noise_cov_logdet;
        return rep;
    }
    Eigen::MatrixXcd u = signal_covariance_bob(coeffs, channels);
    double rho = pa / channels.sigma_b_sq;
    rep.rate_upper_bits = logdet_hermitian_bits(r + rho * u);
    rep.rate_bits = rep.rate_upper_bits - rep.noise_cov_logdet;
    return rep;
}

DetectionReport detection_report(const SurfaceCoefficients &coeffs, const ChannelSet &channels,
                                 double pa, double l) {
    DetectionReport rep;
    Eigen::MatrixXcd gw = effective_willie_channel(coeffs, channels);
    Eigen::MatrixXcd uw = gw * gw.adjoint();
    Eigen::Index nw = channels.n_willie();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(nw, nw);
    for (int idx : coeffs.active_set) {
        Eigen::VectorXcd b = channels.h_rw.col(idx);
        m += std::norm(coeffs.theta(idx)) * (b * b.adjoint());
    }
    rep.eigenvalues_uw =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(0.5 * (uw + uw.adjoint().eval()),
                                                        Eigen::EigenvaluesOnly)
            .eigenvalues();
    rep.eigenvalues_m =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m, Eigen::EigenvaluesOnly).eigenvalues();
    rep.gamma_w = willie_sinr(coeffs, channels, pa);
    rep.d01 = kl_divergence(rep.gamma_w, l);
    return rep;
}

} // namespace hrris
