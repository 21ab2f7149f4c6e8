#ifndef HRRIS_SURFACE_HPP
#define HRRIS_SURFACE_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace hrris {

/// Coefficient state of the surface: theta is the diagonal of the coefficient
/// matrix, active_set lists the relay elements (0-based, sorted). Passive
/// elements carry unit modulus; active amplitudes are set by the power budget.
struct SurfaceCoefficients {
    Eigen::VectorXcd theta;
    std::vector<int> active_set;

    SurfaceCoefficients() = default;
    SurfaceCoefficients(Eigen::VectorXcd t, std::vector<int> active);

    int n() const { return static_cast<int>(theta.size()); }
    int k() const { return static_cast<int>(active_set.size()); }
    bool is_active(int idx) const { return active_mask_.empty() ? false : active_mask_[idx] != 0; }
    double amplitude(int idx) const { return std::abs(theta(idx)); }
    double phase(int idx) const { return std::arg(theta(idx)); }

  private:
    std::vector<char> active_mask_;
};

struct PowerBudget {
    double pa_max = 0.0; // watts
    double pr_max = 0.0; // watts, total budget of all active elements
};

void validate_budget(const PowerBudget &budget);

/// Passive-modulus invariant: |theta_n| = 1 for n outside the active set.
void validate_coefficients(const SurfaceCoefficients &coeffs, double tol = 1e-12);

/// Masked passive/active parts (phi, psi); phi + psi = theta elementwise.
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> split(const SurfaceCoefficients &coeffs);

/// Transmit power of the active elements:
/// sum over n in Q of |psi_n|^2 (pa ||b_n||^2 + sigma_b^2), b_n the n-th
/// column of h_rb.
double relay_power(const SurfaceCoefficients &coeffs, const Eigen::MatrixXcd &h_rb, double pa,
                   double sigma_b_sq);

/// Same sum with element `excluded` left out (the constant part when that
/// element is being re-optimized).
double residual_power(const SurfaceCoefficients &coeffs, const Eigen::MatrixXcd &h_rb, double pa,
                      double sigma_b_sq, int excluded);

/// Largest amplitude the remaining budget allows for one active element:
/// sqrt((pr_max - residual) / (sigma_b^2 + pa ||b_n||^2)).
double amplitude_bound(double pr_max, double residual, double pa, double b_n_norm_sq,
                       double sigma_b_sq);

} // namespace hrris

#endif
