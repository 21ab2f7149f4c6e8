#include "hrris/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "hrris/errors.hpp"
#include "hrris/rng.hpp"

namespace hrris {

namespace {

using cplx = std::complex<double>;

Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd &m) { return 0.5 * (m + m.adjoint().eval()); }

/// Running quantities a sweep maintains: the effective Bob matrix
/// g = H_rb Theta H_ar + H_ab and the active-element part of the noise
/// covariance. Updated rank-1 per element, rebuilt at every sweep start.
struct CascadeState {
    Eigen::MatrixXcd g;
    Eigen::MatrixXcd r_active;
};

CascadeState make_cascade_state(const SurfaceCoefficients &coeffs, const ChannelSet &channels) {
    CascadeState st;
    st.g = channels.h_rb * coeffs.theta.asDiagonal() * channels.h_ar + channels.h_ab;
    Eigen::Index nb = channels.n_bob();
    st.r_active = Eigen::MatrixXcd::Zero(nb, nb);
    for (int idx : coeffs.active_set) {
        Eigen::VectorXcd b = channels.h_rb.col(idx);
        st.r_active += std::norm(coeffs.theta(idx)) * (b * b.adjoint());
    }
    return st;
}

ElementContext element_context_from_state(int n, const SurfaceCoefficients &coeffs,
                                          const ChannelSet &channels, double rho,
                                          const CascadeState &st) {
    if (n < 0 || n >= coeffs.n() || coeffs.n() != channels.n())
        throw std::invalid_argument("element_context: index/dimension mismatch");
    Eigen::VectorXcd b = channels.h_rb.col(n);
    Eigen::VectorXcd a = channels.h_ar.row(n).adjoint(); // row n of h_ar is a_n^H
    cplx theta_n = coeffs.theta(n);

    ElementContext ctx;
    ctx.index = n;
    ctx.active = coeffs.is_active(n);

    Eigen::MatrixXcd s = st.g - theta_n * (b * a.adjoint()); // everything except element n
    Eigen::MatrixXcd interference = st.r_active;
    if (ctx.active)
        interference -= std::norm(theta_n) * (b * b.adjoint());

    Eigen::Index nb = channels.n_bob();
    ctx.a_mat = hermitize(Eigen::MatrixXcd::Identity(nb, nb) + interference + rho * (s * s.adjoint()));
    double b_coef = rho * a.squaredNorm() + (ctx.active ? 1.0 : 0.0);
    ctx.b_mat = hermitize(b_coef * (b * b.adjoint()));
    ctx.c_mat = rho * b * (s * a).adjoint();
    return ctx;
}

struct ElementUpdate {
    cplx theta_new;
    UpdateDiagnostics diag;
};

ElementUpdate compute_element_update(int n, const SurfaceCoefficients &coeffs,
                                     const ChannelSet &channels, double rho,
                                     const PowerBudget &budget, double pa, const CascadeState &st,
                                     bool amplitude_guard) {
    ElementContext ctx = element_context_from_state(n, coeffs, channels, rho, st);
    cplx theta_old = coeffs.theta(n);

    ElementUpdate upd;
    upd.diag.objective_before = context_objective_bits(ctx, theta_old);

    auto [iota, iota_pairing] = sole_nonzero_eigenvalue(ctx.a_mat.llt().solve(ctx.b_mat));
    (void)iota_pairing;
    upd.diag.iota_n = std::max(0.0, iota.real());

    double amp = 1.0;
    if (ctx.active) {
        double resid = residual_power(coeffs, channels.h_rb, pa, channels.sigma_b_sq, n);
        amp = amplitude_bound(budget.pr_max, resid, pa, channels.h_rb.col(n).squaredNorm(),
                              channels.sigma_b_sq);
    }

    // Phase is chosen at the final amplitude: lambda depends on |theta_n|
    // through E = A + |theta_n|^2 B.
    auto lambda_at = [&](double t) {
        Eigen::MatrixXcd e = hermitize(ctx.a_mat + (t * t) * ctx.b_mat);
        return sole_nonzero_eigenvalue(e.llt().solve(ctx.c_mat));
    };
    auto [lambda, pairing] = lambda_at(amp);
    upd.diag.lambda_n = lambda;
    upd.diag.vnp_vn = pairing;
    double mu = (lambda == cplx(0.0, 0.0)) ? 0.0 : -std::arg(lambda);
    upd.theta_new = std::polar(amp, mu);
    upd.diag.objective_after = context_objective_bits(ctx, upd.theta_new);

    double amp_alt = std::min(std::abs(theta_old), amp); // never exceed the current bound
    if (amplitude_guard && ctx.active && amp_alt < amp &&
        upd.diag.objective_after < upd.diag.objective_before) {
        auto [lambda2, pairing2] = lambda_at(amp_alt);
        double mu2 = (lambda2 == cplx(0.0, 0.0)) ? 0.0 : -std::arg(lambda2);
        cplx candidate = std::polar(amp_alt, mu2);
        double obj2 = context_objective_bits(ctx, candidate);
        if (obj2 > upd.diag.objective_after) {
            upd.theta_new = candidate;
            upd.diag.objective_after = obj2;
            upd.diag.lambda_n = lambda2;
            upd.diag.vnp_vn = pairing2;
        }
    }
    return upd;
}

void apply_element_update(int n, const ElementUpdate &upd, SurfaceCoefficients &coeffs,
                          const ChannelSet &channels, CascadeState &st) {
    cplx theta_old = coeffs.theta(n);
    Eigen::VectorXcd b = channels.h_rb.col(n);
    Eigen::VectorXcd a = channels.h_ar.row(n).adjoint();
    st.g += (upd.theta_new - theta_old) * (b * a.adjoint());
    if (coeffs.is_active(n))
        st.r_active += (std::norm(upd.theta_new) - std::norm(theta_old)) * (b * b.adjoint());
    coeffs.theta(n) = upd.theta_new;
}

} // namespace

ElementContext build_element_context(int n, const SurfaceCoefficients &coeffs,
                                     const ChannelSet &channels, double rho) {
    if (!(rho > 0.0))
        throw std::invalid_argument("build_element_context: rho must be > 0");
    CascadeState st = make_cascade_state(coeffs, channels);
    return element_context_from_state(n, coeffs, channels, rho, st);
}

double context_objective_bits(const ElementContext &ctx, cplx theta_n) {
    Eigen::MatrixXcd m = ctx.a_mat + std::norm(theta_n) * ctx.b_mat + theta_n * ctx.c_mat +
                         std::conj(theta_n) * ctx.c_mat.adjoint();
    return logdet_hermitian_bits(hermitize(m));
}

std::pair<cplx, cplx> sole_nonzero_eigenvalue(const Eigen::MatrixXcd &m, double tol) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("sole_nonzero_eigenvalue: matrix must be square");
    double fnorm = m.norm();
    // Solver noise scales with the matrix, not its eigenvalues; anything at
    // this floor counts as zero.
    double zero_floor = 1e-12 * std::max(fnorm, std::numeric_limits<double>::min());
    if (fnorm == 0.0)
        return {cplx(0.0, 0.0), cplx(1.0, 0.0)};

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("sole_nonzero_eigenvalue: eigensolver failed");
    const Eigen::VectorXcd &ev = es.eigenvalues();

    Eigen::Index dominant = 0;
    for (Eigen::Index i = 1; i < ev.size(); ++i)
        if (std::abs(ev(i)) > std::abs(ev(dominant)))
            dominant = i;
    double lead = std::abs(ev(dominant));
    if (lead <= zero_floor)
        return {cplx(0.0, 0.0), cplx(1.0, 0.0)};

    double second = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (i != dominant)
            second = std::max(second, std::abs(ev(i)));
    if (second > std::max(tol * lead, zero_floor))
        throw rank_error("sole_nonzero_eigenvalue: numerical rank exceeds 1 (|lambda2|/|lambda1| = " +
                         std::to_string(second / lead) + ")");

    const Eigen::MatrixXcd &t = es.eigenvectors();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(t);
    cplx pairing(std::numeric_limits<double>::quiet_NaN(), 0.0);
    if (lu.isInvertible()) {
        Eigen::MatrixXcd tinv = lu.inverse();
        pairing = (tinv.row(dominant) * t.col(dominant)).value();
    }
    return {ev(dominant), pairing};
}

std::pair<cplx, UpdateDiagnostics> update_element(int n, const SurfaceCoefficients &coeffs,
                                                  const ChannelSet &channels, double rho,
                                                  const PowerBudget &budget, double pa) {
    CascadeState st = make_cascade_state(coeffs, channels);
    ElementUpdate upd = compute_element_update(n, coeffs, channels, rho, budget, pa, st, false);
    return {upd.theta_new, upd.diag};
}

double sweep_elements(SurfaceCoefficients &coeffs, const ChannelSet &channels, double rho,
                      const PowerBudget &budget, double pa,
                      std::vector<UpdateDiagnostics> *diagnostics, bool amplitude_guard) {
    CascadeState st = make_cascade_state(coeffs, channels);
    for (int n = 0; n < coeffs.n(); ++n) {
        ElementUpdate upd =
            compute_element_update(n, coeffs, channels, rho, budget, pa, st, amplitude_guard);
        apply_element_update(n, upd, coeffs, channels, st);
        if (diagnostics)
            diagnostics->push_back(upd.diag);
    }
    return rate_upper_bound(coeffs, channels, pa);
}

double solve_pa(const SurfaceCoefficients &coeffs, const ChannelSet &channels, double epsilon,
                double l, double pa_max, double bisection_tol) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("solve_pa: epsilon must be > 0");
    if (!(l >= 1.0))
        throw std::invalid_argument("solve_pa: l must be >= 1");
    if (!(pa_max > 0.0))
        throw std::invalid_argument("solve_pa: pa_max must be > 0");

    const double target = 2.0 * epsilon * epsilon;
    std::map<double, double> seen;
    auto d01_at = [&](double pa) {
        double d = kl_divergence(willie_sinr(coeffs, channels, pa), l);
        auto [it, fresh] = seen.emplace(pa, d);
        if (fresh) {
            // Corollary-style sanity check: D_01 must be non-decreasing in pa.
            if (it != seen.begin()) {
                auto prev = std::prev(it);
                if (d < prev->second * (1.0 - 1e-12))
                    throw std::runtime_error("solve_pa: D_01 decreased between bracketing points");
            }
            auto next = std::next(it);
            if (next != seen.end() && next->second < d * (1.0 - 1e-12))
                throw std::runtime_error("solve_pa: D_01 decreased between bracketing points");
        }
        return d;
    };

    if (d01_at(pa_max) <= target)
        return pa_max; // covertness constraint inactive
    double lo = 0.0;
    double hi = pa_max;
    for (int iter = 0; iter < 200; ++iter) {
        double mid = 0.5 * (lo + hi);
        double d = d01_at(mid);
        if (std::abs(d - target) <= bisection_tol * target)
            return mid;
        if (d < target)
            lo = mid;
        else
            hi = mid;
    }
    throw std::runtime_error("solve_pa: bisection failed to reach residual tolerance");
}

OptimizationResult optimize(const ChannelSet &channels, const SystemParams &params,
                            const AoSettings &settings) {
    validate_channel_set(channels, params.allow_unequal_noise);
    PowerBudget budget{params.pa_max_w, params.pr_max_w};
    validate_budget(budget);
    int n = static_cast<int>(channels.n());
    int k = params.active_count;
    if (k < 0 || k > n)
        throw std::invalid_argument("optimize: active_count must lie in [0, N]");
    if (settings.max_outer_iters < 1 || settings.max_sweeps < 1)
        throw std::invalid_argument("optimize: iteration counts must be >= 1");
    if (!(settings.rel_tol > 0.0 && settings.rel_tol < 1.0) ||
        !(settings.bisection_tol > 0.0 && settings.bisection_tol < 1.0))
        throw std::invalid_argument("optimize: tolerances must lie in (0, 1)");
    if (!(params.epsilon > 0.0) || params.l < 1)
        throw std::invalid_argument("optimize: epsilon must be > 0 and l >= 1");

    std::vector<int> active;
    if (params.active_placement == ActivePlacement::first) {
        active.resize(k);
        std::iota(active.begin(), active.end(), 0);
    } else {
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        Rng shuffle_rng(derive_seed(settings.init_seed, {0x51}));
        for (int i = 0; i < k; ++i) {
            int j = i + static_cast<int>(shuffle_rng.next_u64() % static_cast<std::uint64_t>(n - i));
            std::swap(all[i], all[j]);
        }
        active.assign(all.begin(), all.begin() + k);
    }

    Rng phase_rng(derive_seed(settings.init_seed, {0x9e37}));
    Eigen::VectorXcd theta(n);
    for (int i = 0; i < n; ++i)
        theta(i) = std::polar(1.0, phase_rng.uniform(0.0, 2.0 * M_PI));
    SurfaceCoefficients coeffs(std::move(theta), active);
    if (k > 0) {
        // Equal power split across active elements, evaluated at pa_max so the
        // assignment stays feasible for any smaller transmit power.
        double resid = (static_cast<double>(k) - 1.0) / static_cast<double>(k) * params.pr_max_w;
        for (int idx : coeffs.active_set) {
            double amp = amplitude_bound(params.pr_max_w, resid, params.pa_max_w,
                                         channels.h_rb.col(idx).squaredNorm(), channels.sigma_b_sq);
            coeffs.theta(idx) = std::polar(amp, coeffs.phase(idx));
        }
    }

    OptimizationResult result;
    double pa = solve_pa(coeffs, channels, params.epsilon, params.l, params.pa_max_w,
                         settings.bisection_tol);
    double f0_prev = rate_upper_bound(coeffs, channels, pa);
    result.trace.push_back({0, f0_prev, pa});

    double min_ascent = std::numeric_limits<double>::infinity();
    std::vector<UpdateDiagnostics> diags;
    for (int outer = 1; outer <= settings.max_outer_iters; ++outer) {
        result.iterations = outer;
        for (int s = 0; s < settings.max_sweeps; ++s) {
            diags.clear();
            sweep_elements(coeffs, channels, pa / channels.sigma_b_sq, budget, pa, &diags,
                           settings.amplitude_guard);
            for (const UpdateDiagnostics &d : diags)
                min_ascent = std::min(min_ascent, d.objective_after - d.objective_before);
        }
        // The power iterate never increases: amplitudes were fitted to the
        // relay budget at the current pa, and a larger pa would push the
        // relay power past it. Covertness only tightens with pa, so the
        // smaller value stays feasible on every constraint.
        pa = std::min(pa, solve_pa(coeffs, channels, params.epsilon, params.l, params.pa_max_w,
                                   settings.bisection_tol));
        double f0 = rate_upper_bound(coeffs, channels, pa);
        result.trace.push_back({outer, f0, pa});
        if (std::abs(f0 - f0_prev) <= settings.rel_tol * std::max(std::abs(f0_prev), 1e-12)) {
            result.converged = true;
            break;
        }
        f0_prev = f0;
    }

    result.coeffs = std::move(coeffs);
    result.pa_star = pa;
    result.rate_bits = covert_rate(result.coeffs, channels, pa);
    result.d01_nats = kl_divergence(willie_sinr(result.coeffs, channels, pa), params.l);
    result.min_update_ascent_bits = std::isfinite(min_ascent) ? min_ascent : 0.0;
    return result;
}

} // namespace hrris
