#include "carex/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "carex/eig.hpp"
#include "carex/lu.hpp"
#include "carex/norms.hpp"

namespace carex {

namespace {

void require_square(const ComplexMatrix& m, const char* label) {
    if (!m.square()) {
        throw Error(ErrorCode::NonSquare, std::string(label) + " must be square");
    }
}

double spectral_radius(const ComplexMatrix& m) {
    double rho = 0.0;
    for (const cxd& z : eigenvalues(m)) rho = std::max(rho, std::abs(z));
    return rho;
}

void check_gadi_params(double alpha, double omega) {
    if (!(alpha > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "alpha must be positive");
    }
    if (!(omega >= 0.0) || !(omega < 2.0)) {
        throw Error(ErrorCode::InvalidConfig, "omega must lie in [0, 2)");
    }
}

ComplexMatrix plus_scaled_identity(const ComplexMatrix& m, double alpha) {
    ComplexMatrix out = m;
    for (std::size_t i = 0; i < out.rows(); ++i) out(i, i) += alpha;
    return out;
}

} // namespace

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t rows = a.rows() * b.rows();
    const std::size_t cols = a.cols() * b.cols();
    if (rows > 4096 || cols > 4096) {
        throw Error(ErrorCode::TooLarge,
                    "kron result " + std::to_string(rows) + "x" + std::to_string(cols) +
                        " exceeds the 4096 guard");
    }
    ComplexMatrix out(rows, cols);
    for (std::size_t ia = 0; ia < a.rows(); ++ia) {
        for (std::size_t ja = 0; ja < a.cols(); ++ja) {
            const cxd aij = a(ia, ja);
            if (aij == cxd(0.0, 0.0)) continue;
            for (std::size_t ib = 0; ib < b.rows(); ++ib) {
                for (std::size_t jb = 0; jb < b.cols(); ++jb) {
                    out(ia * b.rows() + ib, ja * b.cols() + jb) = aij * b(ib, jb);
                }
            }
        }
    }
    return out;
}

ComplexMatrix vec(const ComplexMatrix& x) {
    ComplexMatrix v(x.rows() * x.cols(), 1);
    for (std::size_t j = 0; j < x.cols(); ++j) {
        for (std::size_t i = 0; i < x.rows(); ++i) {
            v(j * x.rows() + i, 0) = x(i, j);
        }
    }
    return v;
}

ComplexMatrix unvec(const ComplexMatrix& v, std::size_t rows, std::size_t cols) {
    if (v.cols() != 1 || v.rows() != rows * cols) {
        throw Error(ErrorCode::DimensionMismatch,
                    "unvec: vector length " + std::to_string(v.rows()) + " does not match " +
                        std::to_string(rows) + "x" + std::to_string(cols));
    }
    ComplexMatrix x(rows, cols);
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) {
            x(i, j) = v(j * rows + i, 0);
        }
    }
    return x;
}

ComplexMatrix lyap_direct(const ComplexMatrix& m, const ComplexMatrix& f) {
    require_square(m, "M");
    require_square(f, "F");
    const std::size_t n = m.rows();
    if (f.rows() != n) {
        throw Error(ErrorCode::DimensionMismatch, "M and F must share one dimension");
    }
    if (n > 64) {
        throw Error(ErrorCode::TooLarge,
                    "lyap_direct limited to n <= 64, got n = " + std::to_string(n));
    }
    const ComplexMatrix eye = ComplexMatrix::identity(n);
    const ComplexMatrix lift = kron(eye, adjoint(m)) + kron(transpose(m), eye);
    const LuFactorization lu = lu_factor(lift);
    if (lu.singular) {
        throw Error(ErrorCode::SingularLift,
                    "Lyapunov operator is singular: M and -M* share an eigenvalue");
    }
    return unvec(solve(lu, vec(f), Side::Left), n, n);
}

IterationMatrix build_iteration_matrix(const ComplexMatrix& a_k, double alpha, double omega) {
    require_square(a_k, "A_k");
    check_gadi_params(alpha, omega);
    const std::size_t n = a_k.rows();
    if (n > 16) {
        throw Error(ErrorCode::TooLarge,
                    "build_iteration_matrix limited to n <= 16, got n = " + std::to_string(n));
    }
    const ComplexMatrix eye = ComplexMatrix::identity(n);
    const ComplexMatrix lifted_adj = kron(eye, adjoint(a_k)); // I (x) A_k*
    const ComplexMatrix lifted_tr = kron(transpose(a_k), eye); // A_k^T (x) I

    const ComplexMatrix l1 = plus_scaled_identity(lifted_adj, alpha);
    const ComplexMatrix l2 = plus_scaled_identity(lifted_tr, alpha);
    const ComplexMatrix m1 = plus_scaled_identity(-lifted_adj, alpha);
    const ComplexMatrix m2 = plus_scaled_identity(-lifted_tr, alpha);

    const ComplexMatrix l1_inv = inverse(l1);
    const ComplexMatrix l2_inv = inverse(l2);

    IterationMatrix out;
    out.T_alpha = l2_inv * (l1_inv * (m1 * m2));
    const std::size_t nn = n * n;
    ComplexMatrix t = (2.0 - omega) * out.T_alpha;
    for (std::size_t i = 0; i < nn; ++i) t(i, i) += omega;
    out.T = 0.5 * t;
    out.G = ((2.0 - omega) * alpha) * (l2_inv * l1_inv);
    out.C = lifted_adj + lifted_tr;
    out.rho_t_alpha = spectral_radius(out.T_alpha);
    out.rho_t = spectral_radius(out.T);
    const ComplexMatrix a_left = l1_inv * m1;
    const ComplexMatrix a_right = m2 * l2_inv;
    out.rho_bound = norm(a_left, NormKind::Spectral) * norm(a_right, NormKind::Spectral);
    return out;
}

FixedPointCheck fixed_point_check(const ComplexMatrix& a_k, const ComplexMatrix& f,
                                  double alpha, double omega, double tol) {
    const ComplexMatrix x_star = lyap_direct(a_k, f);
    const IterationMatrix im = build_iteration_matrix(a_k, alpha, omega);
    const ComplexMatrix v = vec(x_star);
    const ComplexMatrix gf = im.G * vec(f);
    const ComplexMatrix defect = v - im.T * v - gf;

    FixedPointCheck out;
    out.defect = norm(defect, NormKind::Fro);
    out.scale = norm(v, NormKind::Fro) + norm(gf, NormKind::Fro);
    out.consistent = out.scale > 0.0 ? out.defect <= tol * out.scale : out.defect <= tol;
    return out;
}

AdiGadiComparison compare_adi_gadi(const ComplexMatrix& a_k, double alpha, double omega) {
    for (const cxd& lambda : eigenvalues(a_k)) {
        if (lambda.real() <= 0.0) {
            throw Error(ErrorCode::UnstableInput,
                        "comparison needs every eigenvalue of the closed-loop matrix in the "
                        "right half-plane");
        }
    }
    const IterationMatrix im = build_iteration_matrix(a_k, alpha, omega);
    const std::vector<cxd> etas = eigenvalues(im.T_alpha);

    AdiGadiComparison out;
    out.rho_adi = im.rho_t_alpha;
    out.rho_gadi = im.rho_t;

    // zeta_j = ((2 - omega) eta_j + omega) / 2 shares the index j, so the
    // dominant indices of both spectra come from the same list.
    std::size_t j1 = 0, j2 = 0;
    double best_zeta = -1.0, best_eta = -1.0;
    for (std::size_t j = 0; j < etas.size(); ++j) {
        const cxd zeta = 0.5 * ((2.0 - omega) * etas[j] + omega);
        if (std::abs(zeta) > best_zeta) {
            best_zeta = std::abs(zeta);
            j1 = j;
        }
        if (std::abs(etas[j]) > best_eta) {
            best_eta = std::abs(etas[j]);
            j2 = j;
        }
    }
    if (etas.empty() || omega == 0.0) {
        out.eta_deciding = etas.empty() ? cxd(0.0, 0.0) : etas[j2];
        return out; // with omega = 0 both operators coincide
    }

    const cxd eta2 = etas[j2];
    if (std::norm(eta2) <= eta2.real()) {
        out.verdict = AdiGadiCase::GadiSlower;
        out.eta_deciding = eta2;
        return out;
    }

    const cxd eta1 = etas[j1];
    const double c = eta1.real();
    const double d = eta1.imag();
    if (std::norm(eta1) > c) {
        const double window = 4.0 * (std::norm(eta1) - c) / ((1.0 - c) * (1.0 - c) + d * d);
        out.omega_window = window;
        if (omega > 0.0 && omega < window) {
            out.verdict = AdiGadiCase::GadiFaster;
            out.eta_deciding = eta1;
            return out;
        }
    }
    out.eta_deciding = eta1;
    return out;
}

double psi_envelope(const ComplexMatrix& a_k, double alpha) {
    require_square(a_k, "A_k");
    if (!(alpha > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "alpha must be positive");
    }
    const double nu = norm(a_k, NormKind::Spectral);
    double a_min = std::numeric_limits<double>::infinity();
    for (const cxd& z : eigenvalues(a_k)) a_min = std::min(a_min, z.real());
    const double num = nu * nu - 2.0 * alpha * a_min + alpha * alpha;
    const double den = nu * nu + 2.0 * alpha * a_min + alpha * alpha;
    return num / den;
}

SolveReport newton_exact_solve(const CareProblem& p, const SolverConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!(cfg.eps_out > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "tolerances must be positive");
    }
    if (cfg.k_max == 0) {
        throw Error(ErrorCode::InvalidConfig, "iteration caps must be at least 1");
    }

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
            const ComplexMatrix a_k = kx - p.A;
            const ComplexMatrix f_k = x * kx + p.Q;

            ComplexMatrix x_new = lyap_direct(a_k, f_k);
            if (cfg.symmetrize_iterates) x_new = hermitian_project(x_new);

            const ComplexMatrix lyap_defect = adjoint(a_k) * x_new + x_new * a_k - f_k;
            const ComplexMatrix diff = hermitian_project(x_new - x);
            double lam_max = 0.0;
            for (const cxd& z : eigenvalues(diff)) lam_max = std::max(lam_max, z.real());
            report.monotone_defects.push_back(std::max(0.0, lam_max));

            x = std::move(x_new);
            res = care_residual(p, x);

            report.nres_history.push_back(res.nres);
            report.inner_counts.push_back(1);
            report.alphas.push_back(0.0);
            report.inner_residuals.push_back(norm(lyap_defect, NormKind::Fro));

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
    report.it_cumul = report.it_out;
    report.it_ave = report.it_out == 0 ? 0.0 : 1.0;
    report.final_nres = res.nres;
    report.hermitian_defect_final = hermitian_defect(report.solution);
    if (diverged) {
        report.termination = Termination::Divergence;
    } else if (res.nres < cfg.eps_out) {
        report.termination = Termination::Converged;
    } else {
        report.termination = Termination::OuterCap;
    }
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace carex
