// Test-only reference implementations. Everything here works in long double
// through plain Gaussian elimination so it shares no code path with the
// library's Cholesky/eigenvalue routines.

#ifndef HRRIS_TESTS_ORACLES_HPP
#define HRRIS_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "hrris/surface.hpp"

namespace oracle {

using cld = std::complex<long double>;
using MatLd = std::vector<std::vector<cld>>;

inline MatLd from_eigen(const Eigen::MatrixXcd &m) {
    MatLd out(m.rows(), std::vector<cld>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            out[r][c] = cld(m(r, c).real(), m(r, c).imag());
    return out;
}

/// Determinant by Gaussian elimination with partial pivoting.
inline cld det(MatLd a) {
    int n = static_cast<int>(a.size());
    cld result = 1.0L;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col]))
                piv = r;
        if (std::abs(a[piv][col]) == 0.0L)
            return 0.0L;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            result = -result;
        }
        result *= a[col][col];
        for (int r = col + 1; r < n; ++r) {
            cld f = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c)
                a[r][c] -= f * a[col][c];
        }
    }
    return result;
}

inline long double log2_det(const Eigen::MatrixXcd &m) {
    return std::log2(std::real(det(from_eigen(m))));
}

/// Bob-side covariances assembled entirely in long double from the raw
/// channel entries.
struct BobMatrices {
    MatLd r;         // I + sum |theta_i|^2 b_i b_i^H over active i
    MatLd r_plus_su; // R + rho U_b
};

inline BobMatrices bob_matrices(const Eigen::VectorXcd &theta, const std::vector<int> &active_set,
                                const Eigen::MatrixXcd &h_ar, const Eigen::MatrixXcd &h_ab,
                                const Eigen::MatrixXcd &h_rb, double pa, double sigma_b_sq) {
    int nb = static_cast<int>(h_rb.rows());
    int na = static_cast<int>(h_ar.cols());
    int n = static_cast<int>(h_ar.rows());
    long double rho = static_cast<long double>(pa) / static_cast<long double>(sigma_b_sq);

    // G = h_rb diag(theta) h_ar + h_ab
    MatLd g(nb, std::vector<cld>(na, 0.0L));
    for (int r = 0; r < nb; ++r)
        for (int c = 0; c < na; ++c) {
            cld acc(h_ab(r, c).real(), h_ab(r, c).imag());
            for (int i = 0; i < n; ++i) {
                cld t(theta(i).real(), theta(i).imag());
                cld brc(h_rb(r, i).real(), h_rb(r, i).imag());
                cld arc(h_ar(i, c).real(), h_ar(i, c).imag());
                acc += brc * t * arc;
            }
            g[r][c] = acc;
        }

    BobMatrices out;
    out.r.assign(nb, std::vector<cld>(nb, 0.0L));
    for (int r = 0; r < nb; ++r)
        out.r[r][r] = 1.0L;
    for (int idx : active_set) {
        long double amp_sq = std::norm(cld(theta(idx).real(), theta(idx).imag()));
        for (int r = 0; r < nb; ++r)
            for (int c = 0; c < nb; ++c) {
                cld br(h_rb(r, idx).real(), h_rb(r, idx).imag());
                cld bc(h_rb(c, idx).real(), h_rb(c, idx).imag());
                out.r[r][c] += amp_sq * br * std::conj(bc);
            }
    }

    out.r_plus_su = out.r;
    for (int r = 0; r < nb; ++r)
        for (int c = 0; c < nb; ++c) {
            cld acc = 0.0L;
            for (int j = 0; j < na; ++j)
                acc += g[r][j] * std::conj(g[c][j]);
            out.r_plus_su[r][c] += rho * acc;
        }
    return out;
}

/// Exact-rate oracle log2|R + rho U| - log2|R|.
inline long double covert_rate_bits(const Eigen::VectorXcd &theta, const std::vector<int> &active_set,
                                    const Eigen::MatrixXcd &h_ar, const Eigen::MatrixXcd &h_ab,
                                    const Eigen::MatrixXcd &h_rb, double pa, double sigma_b_sq) {
    BobMatrices m = bob_matrices(theta, active_set, h_ar, h_ab, h_rb, pa, sigma_b_sq);
    return std::log2(std::real(det(m.r_plus_su))) - std::log2(std::real(det(m.r)));
}

} // namespace oracle

#endif
