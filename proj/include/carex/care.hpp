#pragma once

#include <optional>
#include <string>
#include <vector>

#include "carex/lu.hpp"
#include "carex/matrix.hpp"

namespace carex {

/// The continuous-time algebraic Riccati equation A*X + XA − XKX + Q = 0
/// with Hermitian K and Q (A* denotes the conjugate transpose).
struct CareProblem {
    ComplexMatrix A;
    ComplexMatrix K;
    ComplexMatrix Q;

    /// Validates squareness, matching dimensions and the Hermitian
    /// constraints on K and Q (defect ≤ 1e-12 relative to the Frobenius
    /// norm). Throws DimensionMismatch or NonHermitianData.
    CareProblem(ComplexMatrix a, ComplexMatrix k, ComplexMatrix q);

    std::size_t n() const noexcept { return A.rows(); }
};

/// One Newton linearization: the shifted closed-loop matrix, the constant
/// term, and the two shift factorizations reused across every inner sweep of
/// the step.
struct LinearizedStep {
    ComplexMatrix A_k; // K·X_k − A
    ComplexMatrix F_k; // X_k·K·X_k + Q
    double alpha = 0.0;
    LuFactorization left_factor;  // αI + A_k*
    LuFactorization right_factor; // αI + A_k
};

struct GadiParams {
    double alpha = 1.0;   // > 0
    double omega = 1.0;   // in [0, 2); omega = 0 is classical ADI
};

enum class AlphaPolicy { Auto, Fixed };
enum class EtaSchedule { None, InverseCubic, InverseQuartic, Constant };
enum class InitPolicyKind { AlgorithmStep1, AlgorithmStep1NegatedB, Zero, User };

struct InitPolicy {
    InitPolicyKind kind = InitPolicyKind::AlgorithmStep1;
    std::optional<ComplexMatrix> user_guess;

    static InitPolicy step1() { return {InitPolicyKind::AlgorithmStep1, std::nullopt}; }
    static InitPolicy step1_negated() { return {InitPolicyKind::AlgorithmStep1NegatedB, std::nullopt}; }
    static InitPolicy zero() { return {InitPolicyKind::Zero, std::nullopt}; }
    static InitPolicy user(ComplexMatrix x0) { return {InitPolicyKind::User, std::move(x0)}; }
};

struct SolverConfig {
    double eps_out = 1e-8;
    double eps_inn = 1e-8;
    std::size_t l_max = 1000;
    std::size_t k_max = 1000;
    double omega = 1.0;
    AlphaPolicy alpha_policy = AlphaPolicy::Auto;
    double alpha_fixed = 1.0;
    EtaSchedule eta_schedule = EtaSchedule::None;
    double eta_constant = 0.1;
    InitPolicy init_policy = InitPolicy::step1();
    bool symmetrize_iterates = false;
    std::size_t inner_check_stride = 1;
};

enum class Termination { Converged, OuterCap, InnerCapHit, Divergence };

const char* termination_name(Termination t);

struct SolveReport {
    ComplexMatrix solution;
    double initial_nres = 0.0;
    std::vector<double> nres_history;     // one entry per outer step
    std::vector<std::size_t> inner_counts;
    std::vector<double> alphas;           // α_k used per outer step
    std::vector<double> inner_residuals;  // Frobenius Lyapunov residual per step
    std::vector<double> monotone_defects; // exact-Newton diagnostic, else empty
    std::size_t it_out = 0;
    std::size_t it_cumul = 0;
    double it_ave = 0.0;
    double final_nres = 0.0;
    double hermitian_defect_final = 0.0;
    Termination termination = Termination::OuterCap;
    std::size_t inner_cap_hits = 0;
    double wall_time = 0.0;
};

/// Best-effort diagnostics; never aborts a solve.
struct ProblemDiagnostics {
    double k_defect = 0.0;
    double q_defect = 0.0;
    std::vector<cxd> eig_a; // empty when n > 256
    struct StabilizabilityFlag {
        cxd lambda;
        double sigma_min;
    };
    std::vector<StabilizabilityFlag> flags;
};

/// Reports Hermitian defects, the spectrum of A, and a PBH-style
/// stabilizability hint: for each eigenvalue of A with nonnegative real part
/// the smallest singular value of [A − λI, K] is computed and flagged when
/// below 1e-10 relative to scale.
ProblemDiagnostics validate_problem(const CareProblem& p);

/// Initial iterate. The default policy computes β = 1 + ‖A‖_inf, B = A + βI,
/// solves B*X + XB = 2Q and inverts X, adding a ridge δI first when the
/// factorization reports X singular. The result is always Hermitian.
ComplexMatrix initial_guess(const CareProblem& p, const InitPolicy& policy);

struct Residual {
    ComplexMatrix R;
    double nres = 0.0;
};

/// R = A*X + XA − XKX + Q and the spectral-norm normalized residual
/// NRes = ‖R‖₂ / (‖A*X‖₂ + ‖XA‖₂ + ‖XKX‖₂ + ‖Q‖₂), defined as 0 when the
/// denominator vanishes.
Residual care_residual(const CareProblem& p, const ComplexMatrix& x);

/// Builds A_k = K·X_k − A, F_k = X_k·K·X_k + Q and both shift
/// factorizations. Throws SingularShift when αI + A_k or its adjoint is
/// singular; callers retry with α scaled by 1.1.
LinearizedStep linearize(const CareProblem& p, const ComplexMatrix& x_k, double alpha);

/// Quasi-optimal shift: the largest singular value of A_k. A zero matrix
/// returns 1.0 with a warning on stderr since the shift must stay positive.
double select_alpha(const ComplexMatrix& a_k);

/// One double sweep of the generalized ADI iteration:
///   (αI + A_k*)·X_half = X·(αI − A_k) + F_k
///   X_next·(αI + A_k) = X·(A_k − (1−ω)αI) + (2−ω)α·X_half
/// With ω = 0 this is the classical ADI double sweep.
ComplexMatrix gadi_sweep(const LinearizedStep& step, const ComplexMatrix& x_ell,
                         const GadiParams& params, bool symmetrize = false);

enum class InnerStopRule { Exact, Inexact, Lyapunov };

struct InnerResult {
    ComplexMatrix x;
    std::size_t count = 0;
    double lyap_residual = 0.0; // Frobenius norm at exit
    bool cap_hit = false;
};

/// Runs gadi_sweep from the warm start X_{k+1,0} = X_k until the stop rule
/// fires or l_max sweeps elapse. Rules:
///   Exact     Frobenius norm of the full Riccati residual of the inner
///             iterate < eps_inn, with an early exit once the Lyapunov
///             residual falls below 1% of it (the remaining gap is the
///             quadratic linearization term only the outer step removes)
///   Inexact   Frobenius Lyapunov residual ≤ eta_threshold
///   Lyapunov  Frobenius Lyapunov residual < eps_inn
/// Every rule also exits when successive iterates differ by less than
/// 1e-15 relative (stagnation at working precision).
InnerResult gadi_inner_solve(const CareProblem& p, const ComplexMatrix& x_k,
                             const LinearizedStep& step, const GadiParams& params,
                             const SolverConfig& cfg, InnerStopRule rule,
                             double eta_threshold = 0.0);

/// Newton outer loop with GADI inner solves under the Exact stop rule.
SolveReport newton_gadi_solve(const CareProblem& p, const SolverConfig& cfg);

/// Newton outer loop with the Inexact stop rule: the inner Lyapunov solve is
/// truncated once its residual drops below η_k times the current Riccati
/// residual. Requires eta_schedule ≠ None.
SolveReport inexact_newton_gadi_solve(const CareProblem& p, const SolverConfig& cfg);

/// η_k for the configured schedule, clamped below at 1e-14.
double eta_value(const SolverConfig& cfg, std::size_t k);

} // namespace carex
