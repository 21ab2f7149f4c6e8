#ifndef HRRIS_CHANNEL_HPP
#define HRRIS_CHANNEL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <map>

namespace hrris {

/// The five links of the scene: Alice->RIS, Alice->Bob, RIS->Bob,
/// Alice->Willie, RIS->Willie.
enum class Link { ar, ab, rb, aw, rw };

inline const char *link_name(Link l) {
    switch (l) {
    case Link::ar: return "ar";
    case Link::ab: return "ab";
    case Link::rb: return "rb";
    case Link::aw: return "aw";
    case Link::rw: return "rw";
    }
    return "?";
}

/// Node positions (meters, 2-D) plus the per-link path-loss law.
struct SceneGeometry {
    Eigen::Vector2d alice_pos{0.0, 0.0};
    Eigen::Vector2d ris_pos{0.0, 0.0};
    Eigen::Vector2d bob_pos{0.0, 0.0};
    Eigen::Vector2d willie_pos{0.0, 0.0};
    std::map<Link, double> pathloss_exponents;
    double chi0_db = -30.0; // reference path loss at 1 m

    double exponent(Link l) const;
    Eigen::Vector2d tx_pos(Link l) const;
    Eigen::Vector2d rx_pos(Link l) const;
    double distance(Link l) const;
};

/// Antenna geometry: ULAs at Alice/Bob/Willie, a ris_rows x ris_cols UPA at
/// the surface.
struct ArraySpec {
    int n_alice = 4;
    int n_bob = 4;
    int n_willie = 4;
    int ris_rows = 1;
    int ris_cols = 1;
    double element_spacing = 0.5; // in wavelengths

    int ris_elements() const { return ris_rows * ris_cols; }
};

/// Small-scale fading control. Same seed + same spec => bit-identical
/// channels.
struct FadingSpec {
    std::map<Link, double> rician_k_db; // per-link Rician factor; missing links use 3 dB
    std::uint64_t seed = 0;

    double k_db(Link l) const {
        auto it = rician_k_db.find(l);
        return it == rician_k_db.end() ? 3.0 : it->second;
    }
};

/// The five channel matrices plus noise powers, all in linear/watt units.
struct ChannelSet {
    Eigen::MatrixXcd h_ar; // N x N_a
    Eigen::MatrixXcd h_ab; // N_b x N_a
    Eigen::MatrixXcd h_rb; // N_b x N
    Eigen::MatrixXcd h_aw; // N_w x N_a
    Eigen::MatrixXcd h_rw; // N_w x N
    double sigma_b_sq = 0.0;
    double sigma_w_sq = 0.0;
    double sigma_r_sq = 0.0;

    Eigen::Index n() const { return h_ar.rows(); }
    Eigen::Index n_alice() const { return h_ar.cols(); }
    Eigen::Index n_bob() const { return h_rb.rows(); }
    Eigen::Index n_willie() const { return h_rw.rows(); }
};

void validate_geometry(const SceneGeometry &geom);
void validate_arrays(const ArraySpec &arrays);

/// Noise powers are equal across Bob, Willie and the relay elements unless
/// explicitly relaxed.
void validate_channel_set(const ChannelSet &channels, bool allow_unequal_noise = false);

/// Linear power gain chi0 * d^(-alpha) for a link of d meters.
double path_loss(double d_m, double alpha, double chi0_db);

/// Far-field ULA response exp(j*2*pi*spacing*k*sin_angle), k = 0..count-1.
Eigen::VectorXcd ula_steering(double sin_angle, int count, double spacing);

/// UPA response as the Kronecker product ula(az, cols) (x) ula(el, rows).
Eigen::VectorXcd upa_steering(double az_sin, double el_sin, int rows, int cols, double spacing);

/// Rician sample sqrt(gain) * ( sqrt(k/(1+k)) * LOS + sqrt(1/(1+k)) * W ),
/// W i.i.d. CN(0,1). Deterministic in (seed, stream_id);
/// E||H||_F^2 = gain * rows * cols.
Eigen::MatrixXcd rician_matrix(int rows, int cols, double rician_k_db,
                               const Eigen::MatrixXcd &los_matrix, double gain,
                               std::uint64_t seed, std::uint64_t stream_id);

/// Assembles all five links: geometric LOS steering, path-loss gains, Rician
/// fading with one independent stream per link.
ChannelSet build_channel_set(const SceneGeometry &geometry, const ArraySpec &arrays,
                             const FadingSpec &fading, double noise_dbm);

} // namespace hrris

#endif
