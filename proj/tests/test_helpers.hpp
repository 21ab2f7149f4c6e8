#ifndef HRRIS_TESTS_HELPERS_HPP
#define HRRIS_TESTS_HELPERS_HPP

#include <vector>

#include "hrris/channel.hpp"
#include "hrris/rng.hpp"
#include "hrris/surface.hpp"

namespace testing {

/// Unit-scale random channels (entries CN(0, scale^2), unit noise unless
/// overridden); geometry-free, for exercising the math modules directly.
inline hrris::ChannelSet random_channels(hrris::Rng &rng, int n, int na, int nb, int nw,
                                         double scale = 1.0, double sigma_sq = 1.0) {
    auto fill = [&](int r, int c) {
        Eigen::MatrixXcd m(r, c);
        for (int j = 0; j < c; ++j)
            for (int i = 0; i < r; ++i)
                m(i, j) = scale * rng.cgaussian();
        return m;
    };
    hrris::ChannelSet cs;
    cs.h_ar = fill(n, na);
    cs.h_ab = fill(nb, na);
    cs.h_rb = fill(nb, n);
    cs.h_aw = fill(nw, na);
    cs.h_rw = fill(nw, n);
    cs.sigma_b_sq = sigma_sq;
    cs.sigma_w_sq = sigma_sq;
    cs.sigma_r_sq = sigma_sq;
    return cs;
}

/// Random coefficients: uniform phases everywhere, amplitudes in
/// [amp_lo, amp_hi] on a random K-subset of elements, unit modulus elsewhere.
inline hrris::SurfaceCoefficients random_coeffs(hrris::Rng &rng, int n, int k, double amp_lo = 0.5,
                                                double amp_hi = 2.0) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i)
        all[i] = i;
    for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n - i));
        std::swap(all[i], all[j]);
    }
    std::vector<int> active(all.begin(), all.begin() + k);
    Eigen::VectorXcd theta(n);
    for (int i = 0; i < n; ++i)
        theta(i) = std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
    hrris::SurfaceCoefficients coeffs(theta, active);
    for (int idx : coeffs.active_set)
        coeffs.theta(idx) = std::polar(rng.uniform(amp_lo, amp_hi), coeffs.phase(idx));
    return coeffs;
}

} // namespace testing

#endif
