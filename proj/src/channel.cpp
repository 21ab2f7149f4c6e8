#include "hrris/channel.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "hrris/rng.hpp"
#include "hrris/units.hpp"

namespace hrris {

namespace {

constexpr std::complex<double> kJ{0.0, 1.0};

std::uint64_t link_stream(Link l) {
    // Fixed per-link stream ids; adding links never perturbs existing ones.
    switch (l) {
    case Link::ar: return 1;
    case Link::ab: return 2;
    case Link::rb: return 3;
    case Link::aw: return 4;
    case Link::rw: return 5;
    }
    return 0;
}

/// sin of the departure/arrival angle measured from broadside; all arrays
/// face +x with elements laid along y.
double sin_toward(const Eigen::Vector2d &from, const Eigen::Vector2d &to) {
    Eigen::Vector2d d = to - from;
    return d.y() / d.norm();
}

} // namespace

double SceneGeometry::exponent(Link l) const {
    auto it = pathloss_exponents.find(l);
    if (it == pathloss_exponents.end())
        throw std::invalid_argument(std::string("missing path-loss exponent for link ") + link_name(l));
    return it->second;
}

Eigen::Vector2d SceneGeometry::tx_pos(Link l) const {
    switch (l) {
    case Link::ar:
    case Link::ab:
    case Link::aw: return alice_pos;
    case Link::rb:
    case Link::rw: return ris_pos;
    }
    return alice_pos;
}

Eigen::Vector2d SceneGeometry::rx_pos(Link l) const {
    switch (l) {
    case Link::ar: return ris_pos;
    case Link::ab: return bob_pos;
    case Link::rb: return bob_pos;
    case Link::aw: return willie_pos;
    case Link::rw: return willie_pos;
    }
    return bob_pos;
}

double SceneGeometry::distance(Link l) const { return (rx_pos(l) - tx_pos(l)).norm(); }

void validate_geometry(const SceneGeometry &geom) {
    for (Link l : {Link::ar, Link::ab, Link::rb, Link::aw, Link::rw}) {
        double alpha = geom.exponent(l);
        if (!(alpha > 0.0))
            throw std::invalid_argument(std::string("path-loss exponent for link ") + link_name(l) +
                                        " must be > 0");
        if (!(geom.distance(l) > 0.0))
            throw std::invalid_argument(std::string("co-located nodes on link ") + link_name(l));
    }
    if (!std::isfinite(geom.chi0_db))
        throw std::invalid_argument("chi0_db must be finite");
}

void validate_arrays(const ArraySpec &arrays) {
    if (arrays.n_alice < 1 || arrays.n_bob < 1 || arrays.n_willie < 1)
        throw std::invalid_argument("antenna counts must be >= 1");
    if (arrays.ris_rows < 1 || arrays.ris_cols < 1)
        throw std::invalid_argument("UPA dimensions must be >= 1");
    if (!(arrays.element_spacing > 0.0))
        throw std::invalid_argument("element spacing must be > 0");
}

void validate_channel_set(const ChannelSet &channels, bool allow_unequal_noise) {
    auto finite = [](const Eigen::MatrixXcd &m) { return m.allFinite(); };
    if (!finite(channels.h_ar) || !finite(channels.h_ab) || !finite(channels.h_rb) ||
        !finite(channels.h_aw) || !finite(channels.h_rw))
        throw std::invalid_argument("channel matrices must be finite");
    if (!(channels.sigma_b_sq > 0.0) || !(channels.sigma_w_sq > 0.0) || !(channels.sigma_r_sq > 0.0))
        throw std::invalid_argument("noise powers must be > 0");
    if (!allow_unequal_noise &&
        (channels.sigma_b_sq != channels.sigma_r_sq || channels.sigma_w_sq != channels.sigma_r_sq))
        throw std::invalid_argument("noise powers must be equal (sigma_r^2 = sigma_b^2 = sigma_w^2); "
                                    "set allow_unequal_noise to relax");
    if (channels.h_ab.cols() != channels.h_ar.cols() || channels.h_aw.cols() != channels.h_ar.cols() ||
        channels.h_rb.cols() != channels.h_ar.rows() || channels.h_rw.cols() != channels.h_ar.rows() ||
        channels.h_rb.rows() != channels.h_ab.rows() || channels.h_rw.rows() != channels.h_aw.rows())
        throw std::invalid_argument("channel matrix dimensions are inconsistent");
}

double path_loss(double d_m, double alpha, double chi0_db) {
    if (!(d_m > 0.0))
        throw std::invalid_argument("path_loss: distance must be > 0");
    return db_to_linear(chi0_db) * std::pow(d_m, -alpha);
}

Eigen::VectorXcd ula_steering(double sin_angle, int count, double spacing) {
    if (count < 1)
        throw std::invalid_argument("ula_steering: count must be >= 1");
    if (std::abs(sin_angle) > 1.0)
        throw std::invalid_argument("ula_steering: |sin_angle| must be <= 1");
    Eigen::VectorXcd v(count);
    for (int k = 0; k < count; ++k)
        v(k) = std::exp(kJ * (2.0 * M_PI * spacing * k * sin_angle));
    return v;
}

Eigen::VectorXcd upa_steering(double az_sin, double el_sin, int rows, int cols, double spacing) {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("upa_steering: dimensions must be >= 1");
    Eigen::VectorXcd az = ula_steering(az_sin, cols, spacing);
    Eigen::VectorXcd el = ula_steering(el_sin, rows, spacing);
    Eigen::VectorXcd v(rows * cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r)
            v(c * rows + r) = az(c) * el(r);
    return v;
}

Eigen::MatrixXcd rician_matrix(int rows, int cols, double rician_k_db,
                               const Eigen::MatrixXcd &los_matrix, double gain,
                               std::uint64_t seed, std::uint64_t stream_id) {
    if (los_matrix.rows() != rows || los_matrix.cols() != cols)
        throw std::invalid_argument("rician_matrix: LOS matrix dimensions mismatch");
    if (!(gain > 0.0))
        throw std::invalid_argument("rician_matrix: gain must be > 0");
    double kappa = db_to_linear(rician_k_db);
    double los_w = std::sqrt(kappa / (1.0 + kappa));
    double nlos_w = std::sqrt(1.0 / (1.0 + kappa));
    Rng rng(derive_seed(seed, {stream_id}));
    Eigen::MatrixXcd h(rows, cols);
    // Column-major fill order is part of the determinism contract.
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r)
            h(r, c) = los_w * los_matrix(r, c) + nlos_w * rng.cgaussian();
    return std::sqrt(gain) * h;
}

ChannelSet build_channel_set(const SceneGeometry &geometry, const ArraySpec &arrays,
                             const FadingSpec &fading, double noise_dbm) {
    validate_geometry(geometry);
    validate_arrays(arrays);

    auto make_link = [&](Link l, int n_rx, int n_tx, bool rx_is_upa) {
        Eigen::Vector2d tx = geometry.tx_pos(l);
        Eigen::Vector2d rx = geometry.rx_pos(l);
        double sp = arrays.element_spacing;
        Eigen::VectorXcd tx_steer = (l == Link::rb || l == Link::rw)
                                        ? upa_steering(sin_toward(tx, rx), 0.0, arrays.ris_rows,
                                                       arrays.ris_cols, sp)
                                        : ula_steering(sin_toward(tx, rx), n_tx, sp);
        Eigen::VectorXcd rx_steer = rx_is_upa ? upa_steering(sin_toward(rx, tx), 0.0, arrays.ris_rows,
                                                             arrays.ris_cols, sp)
                                              : ula_steering(sin_toward(rx, tx), n_rx, sp);
        Eigen::MatrixXcd los = rx_steer * tx_steer.adjoint();
        double gain = path_loss(geometry.distance(l), geometry.exponent(l), geometry.chi0_db);
        return rician_matrix(n_rx, n_tx, fading.k_db(l), los, gain, fading.seed, link_stream(l));
    };

    int n = arrays.ris_elements();
    ChannelSet cs;
    cs.h_ar = make_link(Link::ar, n, arrays.n_alice, true);
    cs.h_ab = make_link(Link::ab, arrays.n_bob, arrays.n_alice, false);
    cs.h_rb = make_link(Link::rb, arrays.n_bob, n, false);
    cs.h_aw = make_link(Link::aw, arrays.n_willie, arrays.n_alice, false);
    cs.h_rw = make_link(Link::rw, arrays.n_willie, n, false);
    double sigma = dbm_to_watt(noise_dbm);
    cs.sigma_b_sq = sigma;
    cs.sigma_w_sq = sigma;
    cs.sigma_r_sq = sigma;
    validate_channel_set(cs);
    return cs;
}

} // namespace hrris
