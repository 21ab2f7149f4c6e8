#include "hrris/surface.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hrris/errors.hpp"

namespace hrris {

SurfaceCoefficients::SurfaceCoefficients(Eigen::VectorXcd t, std::vector<int> active)
    : theta(std::move(t)), active_set(std::move(active)) {
    std::sort(active_set.begin(), active_set.end());
    if (std::adjacent_find(active_set.begin(), active_set.end()) != active_set.end())
        throw std::invalid_argument("active_set contains duplicate indices");
    active_mask_.assign(theta.size(), 0);
    for (int idx : active_set) {
        if (idx < 0 || idx >= n())
            throw std::invalid_argument("active_set index out of range");
        active_mask_[idx] = 1;
    }
}

void validate_budget(const PowerBudget &budget) {
    if (!(budget.pa_max > 0.0) || !(budget.pr_max > 0.0))
        throw std::invalid_argument("power budgets must be > 0");
}

void validate_coefficients(const SurfaceCoefficients &coeffs, double tol) {
    for (int i = 0; i < coeffs.n(); ++i) {
        if (!coeffs.is_active(i) && std::abs(coeffs.amplitude(i) - 1.0) > tol)
            throw std::invalid_argument("passive element lost unit modulus");
        if (coeffs.is_active(i) && !(coeffs.amplitude(i) >= 0.0))
            throw std::invalid_argument("active element amplitude must be >= 0");
    }
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> split(const SurfaceCoefficients &coeffs) {
    Eigen::VectorXcd phi = coeffs.theta;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(coeffs.n());
    for (int idx : coeffs.active_set) {
        psi(idx) = coeffs.theta(idx);
        phi(idx) = 0.0;
    }
    return {phi, psi};
}

double relay_power(const SurfaceCoefficients &coeffs, const Eigen::MatrixXcd &h_rb, double pa,
                   double sigma_b_sq) {
    double total = 0.0;
    for (int idx : coeffs.active_set) {
        double amp_sq = std::norm(coeffs.theta(idx));
        total += amp_sq * (pa * h_rb.col(idx).squaredNorm() + sigma_b_sq);
    }
    return total;
}

double residual_power(const SurfaceCoefficients &coeffs, const Eigen::MatrixXcd &h_rb, double pa,
                      double sigma_b_sq, int excluded) {
    if (!coeffs.is_active(excluded))
        throw std::invalid_argument("residual_power: excluded element is not in the active set");
    double total = 0.0;
    for (int idx : coeffs.active_set) {
        if (idx == excluded)
            continue;
        total += std::norm(coeffs.theta(idx)) * (sigma_b_sq + pa * h_rb.col(idx).squaredNorm());
    }
    return total;
}

double amplitude_bound(double pr_max, double residual, double pa, double b_n_norm_sq,
                       double sigma_b_sq) {
    if (pr_max < residual)
        throw infeasible_error("amplitude_bound: residual relay power already exceeds the budget");
    return std::sqrt((pr_max - residual) / (sigma_b_sq + pa * b_n_norm_sq));
}

} // namespace hrris
