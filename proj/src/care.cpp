#include "carex/care.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>
#include <utility>

#include "carex/eig.hpp"
#include "carex/norms.hpp"
#include "carex/oracle.hpp"

namespace carex {

namespace {

ComplexMatrix shifted_identity_plus(double alpha, const ComplexMatrix& m) {
    ComplexMatrix out = m;
    for (std::size_t i = 0; i < out.rows(); ++i) out(i, i) += alpha;
    return out;
}

ComplexMatrix shifted_identity_minus(double alpha, const ComplexMatrix& m) {
    ComplexMatrix out = -m;
    for (std::size_t i = 0; i < out.rows(); ++i) out(i, i) += alpha;
    return out;
}

void require_hermitian(const ComplexMatrix& m, const char* label) {
    const double scale = std::max(1.0, norm(m, NormKind::Fro));
    if (hermitian_defect(m) > 1e-12 * scale) {
        throw Error(ErrorCode::NonHermitianData,
                    std::string(label) + " must be Hermitian (defect " +
                        std::to_string(hermitian_defect(m) / scale) + " relative)");
    }
}

LinearizedStep make_step(ComplexMatrix a_k, ComplexMatrix f_k, double alpha) {
    LinearizedStep step;
    step.alpha = alpha;
    step.left_factor = lu_factor(shifted_identity_plus(alpha, adjoint(a_k)));
    step.right_factor = lu_factor(shifted_identity_plus(alpha, a_k));
    if (step.left_factor.singular || step.right_factor.singular) {
        throw Error(ErrorCode::SingularShift,
                    "shift alpha = " + std::to_string(alpha) + " makes alpha I + A_k singular");
    }
    step.A_k = std::move(a_k);
    step.F_k = std::move(f_k);
    return step;
}

void validate_config(const SolverConfig& cfg) {
    if (!(cfg.eps_out > 0.0) || !(cfg.eps_inn > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "tolerances must be positive");
    }
    if (!(cfg.omega >= 0.0) || !(cfg.omega < 2.0)) {
        throw Error(ErrorCode::InvalidConfig, "omega must lie in [0, 2)");
    }
    if (cfg.alpha_policy == AlphaPolicy::Fixed && !(cfg.alpha_fixed > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "fixed alpha must be positive");
    }
    if (cfg.l_max == 0 || cfg.k_max == 0) {
        throw Error(ErrorCode::InvalidConfig, "iteration caps must be at least 1");
    }
    if (cfg.inner_check_stride == 0) {
        throw Error(ErrorCode::InvalidConfig, "inner_check_stride must be at least 1");
    }
    if (cfg.eta_schedule == EtaSchedule::Constant &&
        !(cfg.eta_constant > 0.0 && cfg.eta_constant < 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "constant eta must lie in (0, 1)");
    }
}

// Initialization Lyapunov solve M*X + XM = F for anti-stable M. Small
// problems use the dense lift; larger ones run classical ADI sweeps, which
// converge fast since the shift beta pushes the spectrum well into the right
// half plane.
ComplexMatrix solve_lyap_init(const ComplexMatrix& m, const ComplexMatrix& f) {
    if (m.rows() <= 24) return lyap_direct(m, f);

    const double alpha = select_alpha(m);
    LinearizedStep step = make_step(m, f, alpha);
    GadiParams params{alpha, 0.0};
    const ComplexMatrix ms = adjoint(m);
    ComplexMatrix x(m.rows(), m.cols());
    const double tol = 1e-12 * std::max(1.0, norm(f, NormKind::Fro));
    for (std::size_t l = 0; l < 5000; ++l) {
        ComplexMatrix x_new = gadi_sweep(step, x, params);
        const ComplexMatrix res = ms * x_new + x_new * m - f;
        if (norm(res, NormKind::Fro) <= tol) return x_new;
        const double drift = norm(x_new - x, NormKind::Fro);
        if (drift <= 1e-15 * std::max(1.0, norm(x_new, NormKind::Fro))) return x_new;
        x = std::move(x_new);
    }
    throw Error(ErrorCode::NoConvergence, "initialization Lyapunov solve did not converge");
}

} // namespace

CareProblem::CareProblem(ComplexMatrix a, ComplexMatrix k, ComplexMatrix q)
    : A(std::move(a)), K(std::move(k)), Q(std::move(q)) {
    if (!A.square() || !K.square() || !Q.square()) {
        throw Error(ErrorCode::NonSquare, "A, K, Q must all be square");
    }
    if (K.rows() != A.rows() || Q.rows() != A.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "A, K, Q must share one dimension");
    }
    require_hermitian(K, "K");
    require_hermitian(Q, "Q");
}

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::Converged: return "converged";
        case Termination::OuterCap: return "outer_cap";
        case Termination::InnerCapHit: return "inner_cap_hit";
        case Termination::Divergence: return "divergence";
    }
    return "unknown";
}

ProblemDiagnostics validate_problem(const CareProblem& p) {
    ProblemDiagnostics d;
    const double ks = std::max(1.0, norm(p.K, NormKind::Fro));
    const double qs = std::max(1.0, norm(p.Q, NormKind::Fro));
    d.k_defect = hermitian_defect(p.K) / ks;
    d.q_defect = hermitian_defect(p.Q) / qs;
    const std::size_t n = p.n();
    if (n == 0 || n > 256) return d;

    d.eig_a = eigenvalues(p.A);
    for (const cxd& lambda : d.eig_a) {
        if (lambda.real() < 0.0) continue;
        // PBH test block [A - lambda I, K]: sigma_min via the smallest
        // eigenvalue of M M*.
        ComplexMatrix block(n, 2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                block(i, j) = p.A(i, j) - (i == j ? lambda : cxd(0.0, 0.0));
                block(i, n + j) = p.K(i, j);
            }
        }
        const ComplexMatrix gram = block * adjoint(block);
        double lam_min = std::numeric_limits<double>::infinity();
        for (const cxd& mu : eigenvalues(gram)) lam_min = std::min(lam_min, mu.real());
        const double sigma_min = std::sqrt(std::max(0.0, lam_min));
        if (sigma_min < 1e-10 * std::max(1.0, norm(block, NormKind::Fro))) {
            d.flags.push_back({lambda, sigma_min});
        }
    }
    return d;
}

ComplexMatrix initial_guess(const CareProblem& p, const InitPolicy& policy) {
    const std::size_t n = p.n();
    switch (policy.kind) {
        case InitPolicyKind::Zero:
            return ComplexMatrix(n, n);
        case InitPolicyKind::User: {
            if (!policy.user_guess) {
                throw Error(ErrorCode::InvalidUserGuess, "user init policy without a matrix");
            }
            const ComplexMatrix& g = *policy.user_guess;
            if (g.rows() != n || g.cols() != n) {
                throw Error(ErrorCode::InvalidUserGuess, "user guess has the wrong shape");
            }
            if (hermitian_defect(g) > 1e-8 * std::max(1.0, norm(g, NormKind::Fro))) {
                throw Error(ErrorCode::InvalidUserGuess, "user guess is not Hermitian");
            }
            return hermitian_project(g);
        }
        case InitPolicyKind::AlgorithmStep1:
        case InitPolicyKind::AlgorithmStep1NegatedB:
            break;
    }

    const double beta = 1.0 + norm(p.A, NormKind::Inf);
    const ComplexMatrix b = shifted_identity_plus(beta, p.A);
    ComplexMatrix x = hermitian_project(solve_lyap_init(b, 2.0 * p.Q));
    if (policy.kind == InitPolicyKind::AlgorithmStep1NegatedB) {
        // With B replaced by -(A + beta I) the Lyapunov solution flips sign.
        x = -x;
    }

    LuFactorization f = lu_factor(x);
    if (f.singular) {
        const double delta = std::max(1e-13, norm(x, NormKind::Fro));
        x = shifted_identity_plus(delta, x);
        f = lu_factor(x);
        if (f.singular) {
            throw Error(ErrorCode::SingularInitialization,
                        "initialization matrix stayed singular after the ridge");
        }
    }
    return hermitian_project(solve(f, ComplexMatrix::identity(n), Side::Left));
}

Residual care_residual(const CareProblem& p, const ComplexMatrix& x) {
    if (x.rows() != p.n() || x.cols() != p.n()) {
        throw Error(ErrorCode::DimensionMismatch, "iterate shape does not match the problem");
    }
    const ComplexMatrix asx = adjoint(p.A) * x;
    const ComplexMatrix xa = x * p.A;
    const ComplexMatrix xkx = x * (p.K * x);
    Residual r;
    r.R = asx + xa - xkx + p.Q;
    const double denom = norm(asx, NormKind::Spectral) + norm(xa, NormKind::Spectral) +
                         norm(xkx, NormKind::Spectral) + norm(p.Q, NormKind::Spectral);
    r.nres = denom == 0.0 ? 0.0 : norm(r.R, NormKind::Spectral) / denom;
    return r;
}

LinearizedStep linearize(const CareProblem& p, const ComplexMatrix& x_k, double alpha) {
    if (x_k.rows() != p.n() || x_k.cols() != p.n()) {
        throw Error(ErrorCode::DimensionMismatch, "iterate shape does not match the problem");
    }
    if (!(alpha > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "alpha must be positive");
    }
    const ComplexMatrix kx = p.K * x_k;
    ComplexMatrix a_k = kx - p.A;
    ComplexMatrix f_k = x_k * kx + p.Q;
    return make_step(std::move(a_k), std::move(f_k), alpha);
}

double select_alpha(const ComplexMatrix& a_k) {
    const double sigma = norm(a_k, NormKind::Spectral);
    if (sigma <= 0.0) {
        std::cerr << "select_alpha: zero matrix, falling back to alpha = 1\n";
        return 1.0;
    }
    return sigma;
}

ComplexMatrix gadi_sweep(const LinearizedStep& step, const ComplexMatrix& x_ell,
                         const GadiParams& params, bool symmetrize) {
    if (!(params.alpha > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "alpha must be positive");
    }
    if (!(params.omega >= 0.0) || !(params.omega < 2.0)) {
        throw Error(ErrorCode::InvalidConfig, "omega must lie in [0, 2)");
    }
    const double alpha = params.alpha;
    const double omega = params.omega;

    const ComplexMatrix rhs_half = x_ell * shifted_identity_minus(alpha, step.A_k) + step.F_k;
    const ComplexMatrix x_half = solve(step.left_factor, rhs_half, Side::Left);

    // A_k - (1 - omega) alpha I
    const ComplexMatrix drift = shifted_identity_plus(-(1.0 - omega) * alpha, step.A_k);
    const ComplexMatrix rhs_full = x_ell * drift + ((2.0 - omega) * alpha) * x_half;
    ComplexMatrix x_next = solve(step.right_factor, rhs_full, Side::Right);
    if (symmetrize) x_next = hermitian_project(x_next);
    return x_next;
}

InnerResult gadi_inner_solve(const CareProblem& p, const ComplexMatrix& x_k,
                             const LinearizedStep& step, const GadiParams& params,
                             const SolverConfig& cfg, InnerStopRule rule,
                             double eta_threshold) {
    const ComplexMatrix a_k_adj = adjoint(step.A_k);
    ComplexMatrix x = x_k;
    InnerResult out;
    out.cap_hit = true;

    for (std::size_t l = 1; l <= cfg.l_max; ++l) {
        ComplexMatrix x_new = gadi_sweep(step, x, params, cfg.symmetrize_iterates);
        out.count = l;
        const bool check = (l % cfg.inner_check_stride == 0) || l == cfg.l_max;
        if (check) {
            const ComplexMatrix lyap_defect = a_k_adj * x_new + x_new * step.A_k - step.F_k;
            const double lyap_fro = norm(lyap_defect, NormKind::Fro);
            out.lyap_residual = lyap_fro;

            const double drift = norm(x_new - x, NormKind::Fro);
            const bool stagnant = drift <= 1e-15 * std::max(1.0, norm(x_new, NormKind::Fro));

            bool done = stagnant;
            if (!done) {
                switch (rule) {
                    case InnerStopRule::Lyapunov:
                        done = lyap_fro < cfg.eps_inn;
                        break;
                    case InnerStopRule::Inexact:
                        done = lyap_fro <= eta_threshold;
                        break;
                    case InnerStopRule::Exact: {
                        // Riccati residual of the inner iterate through the
                        // linearization identity: R = -lyap_defect - d K d
                        // with d the step from the outer iterate. Valid since
                        // the outer iterates are Hermitian to rounding.
                        const ComplexMatrix d = x_new - x_k;
                        const ComplexMatrix care_res = lyap_defect + d * (p.K * d);
                        const double care_fro = norm(care_res, NormKind::Fro);
                        done = care_fro < cfg.eps_inn;
                        // Once the Lyapunov part is far below the quadratic
                        // term the sweeps cannot reduce the Riccati residual
                        // further; hand back to the outer loop.
                        if (!done && lyap_fro <= 1e-2 * care_fro) done = true;
                        break;
                    }
                }
            }
            if (done) {
                out.cap_hit = false;
                out.x = std::move(x_new);
                return out;
            }
        }
        x = std::move(x_new);
    }
    out.x = std::move(x);
    return out;
}

double eta_value(const SolverConfig& cfg, std::size_t k) {
    double eta = 0.0;
    const double kd = static_cast<double>(k);
    switch (cfg.eta_schedule) {
        case EtaSchedule::None:
            throw Error(ErrorCode::InvalidConfig, "eta requested without a schedule");
        case EtaSchedule::InverseCubic:
            eta = 1.0 / (kd * kd * kd + 1.0);
            break;
        case EtaSchedule::InverseQuartic:
            eta = 1.0 / (kd * kd * kd * kd + 1.0);
            break;
        case EtaSchedule::Constant:
            eta = cfg.eta_constant;
            break;
    }
    return std::max(eta, 1e-14);
}

namespace {

SolveReport run_newton(const CareProblem& p, const SolverConfig& cfg, InnerStopRule rule) {
    validate_config(cfg);
    const auto t0 = std::chrono::steady_clock::now();

    SolveReport report;
    ComplexMatrix x = initial_guess(p, cfg.init_policy);
    Residual res = care_residual(p, x);
    report.initial_nres = res.nres;

    double nres_floor = res.nres;
    bool diverged = false;

    for (std::size_t k = 0; k < cfg.k_max; ++k) {
        if (res.nres < cfg.eps_out) break;
        try {
            const ComplexMatrix kx = p.K * x;
            ComplexMatrix a_k = kx - p.A;
            ComplexMatrix f_k = x * kx + p.Q;

            double alpha = cfg.alpha_policy == AlphaPolicy::Auto ? select_alpha(a_k)
                                                                 : cfg.alpha_fixed;
            LinearizedStep step;
            for (int attempt = 0;; ++attempt) {
                try {
                    step = make_step(a_k, f_k, alpha);
                    break;
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::SingularShift || attempt >= 5) throw;
                    alpha *= 1.1;
                }
            }

            double threshold = 0.0;
            if (rule == InnerStopRule::Inexact) {
                threshold = eta_value(cfg, k) * norm(res.R, NormKind::Fro);
            }

            GadiParams params{alpha, cfg.omega};
            InnerResult inner = gadi_inner_solve(p, x, step, params, cfg, rule, threshold);
            if (inner.cap_hit) ++report.inner_cap_hits;

            x = std::move(inner.x);
            res = care_residual(p, x);

            report.nres_history.push_back(res.nres);
            report.inner_counts.push_back(inner.count);
            report.alphas.push_back(alpha);
            report.inner_residuals.push_back(inner.lyap_residual);

            if (!std::isfinite(res.nres) || res.nres > 1e6 * nres_floor) {
                diverged = true;
                break;
            }
            nres_floor = std::min(nres_floor, res.nres);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NonFinite) {
                diverged = true;
                break;
            }
            throw;
        }
    }

    report.solution = std::move(x);
    report.it_out = report.nres_history.size();
    report.it_cumul = 0;
    for (std::size_t c : report.inner_counts) report.it_cumul += c;
    report.it_ave = report.it_out == 0
                        ? 0.0
                        : static_cast<double>(report.it_cumul) / static_cast<double>(report.it_out);
    report.final_nres = res.nres;
    report.hermitian_defect_final = hermitian_defect(report.solution);
    if (diverged) {
        report.termination = Termination::Divergence;
    } else if (res.nres < cfg.eps_out) {
        report.termination = Termination::Converged;
    } else {
        report.termination = report.inner_cap_hits > 0 ? Termination::InnerCapHit
                                                       : Termination::OuterCap;
    }
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace

SolveReport newton_gadi_solve(const CareProblem& p, const SolverConfig& cfg) {
    return run_newton(p, cfg, InnerStopRule::Exact);
}

SolveReport inexact_newton_gadi_solve(const CareProblem& p, const SolverConfig& cfg) {
    if (cfg.eta_schedule == EtaSchedule::None) {
        throw Error(ErrorCode::InvalidConfig, "inexact Newton needs an eta schedule");
    }
    return run_newton(p, cfg, InnerStopRule::Inexact);
}

} // namespace carex
