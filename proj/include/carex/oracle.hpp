#pragma once

#include <vector>

#include "carex/care.hpp"
#include "carex/matrix.hpp"

namespace carex {

/// Kronecker product A ⊗ B. Guarded: the result must have at most
/// 4096 rows and columns, otherwise TooLarge is thrown.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Column-stacking vectorization: vec(X) stacks the columns of X into a
/// single column, so (A ⊗ B)·vec(X) = vec(B·X·Aᵀ).
ComplexMatrix vec(const ComplexMatrix& x);

/// Inverse of vec for a rows×cols target.
ComplexMatrix unvec(const ComplexMatrix& v, std::size_t rows, std::size_t cols);

/// Dense Lyapunov oracle: solves M*X + XM = F through the lifted system
/// (I ⊗ M* + Mᵀ ⊗ I)·vec(X) = vec(F). Guarded at n ≤ 64. Throws
/// SingularLift when the lifted matrix is singular (M and −M* share an
/// eigenvalue).
ComplexMatrix lyap_direct(const ComplexMatrix& m, const ComplexMatrix& f);

/// Lifted GADI step operators for A_k at shift α, sweep weight ω:
///   T(α)    = (αI + A_kᵀ⊗I)⁻¹ (αI + I⊗A_k*)⁻¹ (αI − I⊗A_k*) (αI − A_kᵀ⊗I)
///   T(α,ω)  = ((2−ω)·T(α) + ω·I) / 2
///   G(α,ω)  = (2−ω)·α·(αI + A_kᵀ⊗I)⁻¹ (αI + I⊗A_k*)⁻¹
///   C       = I⊗A_k* + A_kᵀ⊗I
/// so that vec(X_{ℓ+1}) = T(α,ω)·vec(X_ℓ) + G(α,ω)·vec(F).
struct IterationMatrix {
    ComplexMatrix T_alpha;
    ComplexMatrix T;
    ComplexMatrix G;
    ComplexMatrix C;
    double rho_t_alpha = 0.0;
    double rho_t = 0.0;
    /// ‖A^L‖₂·‖A^R‖₂ with A^L = (αI + I⊗A_k*)⁻¹(αI − I⊗A_k*) and
    /// A^R = (αI − A_kᵀ⊗I)(αI + A_kᵀ⊗I)⁻¹; an upper bound for rho_t_alpha.
    double rho_bound = 0.0;
};

/// Builds the lifted operators explicitly. Guarded at n ≤ 16.
IterationMatrix build_iteration_matrix(const ComplexMatrix& a_k, double alpha, double omega);

struct FixedPointCheck {
    double defect = 0.0; // ‖vec(X) − T·vec(X) − G·vec(F)‖₂
    double scale = 0.0;  // ‖vec(X)‖₂ + ‖G·vec(F)‖₂
    bool consistent = false;
};

/// Verifies that the exact Lyapunov solution of A_k*X + X·A_k = F is a fixed
/// point of the lifted iteration. consistent means defect ≤ tol·scale.
FixedPointCheck fixed_point_check(const ComplexMatrix& a_k, const ComplexMatrix& f,
                                  double alpha, double omega, double tol = 1e-12);

enum class AdiGadiCase {
    GadiSlower,     // |η|² ≤ c at the GADI-dominant index: ρ(T(α)) < ρ(T(α,ω))
    GadiFaster,     // |η|² > c at the ADI-dominant index and ω below the window bound
    Indeterminate,  // neither hypothesis applies at the deciding index
};

struct AdiGadiComparison {
    AdiGadiCase verdict = AdiGadiCase::Indeterminate;
    double rho_adi = 0.0;   // ρ(T(α))
    double rho_gadi = 0.0;  // ρ(T(α,ω))
    cxd eta_deciding;       // the η entering the hypothesis test
    double omega_window = 0.0; // 4(|η|²−c)/((1−c)²+d²) when GadiFaster applies
};

/// Classifies a concrete (A_k, α, ω) instance by the spectral relation
/// between the ADI and GADI iteration matrices. Every eigenvalue of T(α,ω)
/// is the affine image (2−ω)η/2 + ω/2 of an eigenvalue η of T(α); the
/// verdict evaluates the hypothesis |η|² vs Re(η) at the index that attains
/// the relevant spectral radius. Guarded at n ≤ 16 through
/// build_iteration_matrix.
AdiGadiComparison compare_adi_gadi(const ComplexMatrix& a_k, double alpha, double omega);

/// Upper envelope Ψ(α) = (ν² − 2αa + α²)/(ν² + 2αa + α²) of the ADI
/// contraction factor, with ν the largest singular value of A_k and a the
/// smallest real part of its spectrum. Minimized at α = ν when a > 0.
double psi_envelope(const ComplexMatrix& a_k, double alpha);

/// Reference Newton iteration: every Lyapunov step is solved by lyap_direct
/// instead of an inner GADI loop. Limited to n ≤ 64 by the lift. Each
/// inner_counts entry is 1; monotone_defects records max(0, λ_max(X_{k+1} −
/// X_k)) per step (the exact-Newton iterates decrease monotonically in the
/// Loewner order after the first step, so the defect stays at rounding
/// level).
SolveReport newton_exact_solve(const CareProblem& p, const SolverConfig& cfg);

} // namespace carex
