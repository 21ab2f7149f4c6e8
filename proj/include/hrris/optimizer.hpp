#ifndef HRRIS_OPTIMIZER_HPP
#define HRRIS_OPTIMIZER_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "hrris/channel.hpp"
#include "hrris/metrics.hpp"
#include "hrris/params.hpp"
#include "hrris/surface.hpp"

namespace hrris {

/// Decomposition of the rate bound around one element: with every other
/// coefficient fixed, f0 = log2|A_n + |theta_n|^2 B_n + theta_n C_n +
/// conj(theta_n) C_n^H|. A_n is Hermitian positive definite, B_n Hermitian
/// PSD of rank <= 1, and none of the three depends on theta_n.
struct ElementContext {
    Eigen::MatrixXcd a_mat;
    Eigen::MatrixXcd b_mat;
    Eigen::MatrixXcd c_mat;
    int index = 0;
    bool active = false;
};

struct UpdateDiagnostics {
    double iota_n = 0.0;                     // sole non-zero eigenvalue of A^-1 B
    std::complex<double> lambda_n{0.0, 0.0}; // sole non-zero eigenvalue of E^-1 C
    std::complex<double> vnp_vn{1.0, 0.0};   // left/right eigenvector pairing; 1 when well-conditioned
    double objective_before = 0.0;           // f0 in bits
    double objective_after = 0.0;
};

struct AoSettings {
    int max_outer_iters = 50;
    int max_sweeps = 1; // element sweeps per outer iteration
    double rel_tol = 1e-6;
    double bisection_tol = 1e-8;
    std::uint64_t init_seed = 0;
    // Keep an active element's previous amplitude when re-pinning it at the
    // budget bound would lower the objective (the bound still caps it). This
    // preserves ascent when the transmit power moves between iterations;
    // disable for the strict bound-equality assignment.
    bool amplitude_guard = true;
};

struct IterationPoint {
    int iteration = 0;
    double f0_bits = 0.0;
    double pa_watts = 0.0;
};

struct OptimizationResult {
    SurfaceCoefficients coeffs;
    double pa_star = 0.0;
    double rate_bits = 0.0; // exact rate f, not the bound
    double d01_nats = 0.0;
    std::vector<IterationPoint> trace;
    bool converged = false;
    int iterations = 0;
    // Smallest per-element objective step seen; >= -1e-9 when ascent holds.
    double min_update_ascent_bits = 0.0;
};

/// A_n, B_n, C_n for element n at the current coefficients; rho = pa/sigma_b^2.
ElementContext build_element_context(int n, const SurfaceCoefficients &coeffs,
                                     const ChannelSet &channels, double rho);

/// f0 in bits evaluated through the element decomposition at coefficient
/// value theta_n (the reconstruction identity).
double context_objective_bits(const ElementContext &ctx, std::complex<double> theta_n);

/// Largest-modulus eigenvalue of a numerically rank <= 1 matrix, plus the
/// pairing of the matching left/right eigenvectors (1 for any diagonalizable
/// rank-1 matrix; drift flags an ill-conditioned transform). Throws
/// rank_error when a second eigenvalue exceeds tol relative to the first.
std::pair<std::complex<double>, std::complex<double>>
sole_nonzero_eigenvalue(const Eigen::MatrixXcd &m, double tol = 1e-10);

/// Closed-form update of one coefficient: amplitude 1 (passive) or at the
/// power-budget bound (active), phase -arg(lambda_n). Returns the new value
/// and diagnostics; does not modify `coeffs`.
std::pair<std::complex<double>, UpdateDiagnostics>
update_element(int n, const SurfaceCoefficients &coeffs, const ChannelSet &channels, double rho,
               const PowerBudget &budget, double pa);

/// Applies update_element to n = 0..N-1 in order, writing each result back.
/// Returns f0 after the sweep; per-update diagnostics optionally collected.
double sweep_elements(SurfaceCoefficients &coeffs, const ChannelSet &channels, double rho,
                      const PowerBudget &budget, double pa,
                      std::vector<UpdateDiagnostics> *diagnostics = nullptr,
                      bool amplitude_guard = false);

/// Largest feasible transmit power: pa_max when the covertness constraint is
/// slack there, otherwise the unique root of D_01(pa) = 2 epsilon^2 found by
/// bisection (relative residual <= bisection_tol). A non-monotone D_01
/// observed during bracketing raises a diagnostic error.
double solve_pa(const SurfaceCoefficients &coeffs, const ChannelSet &channels, double epsilon,
                double l, double pa_max, double bisection_tol = 1e-8);

/// Alternating optimization: random initial phases, feasible initial power,
/// then coefficient sweeps alternating with the power solve until the bound
/// stabilizes.
OptimizationResult optimize(const ChannelSet &channels, const SystemParams &params,
                            const AoSettings &settings);

} // namespace hrris

#endif
