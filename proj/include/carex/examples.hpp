#pragma once

#include "carex/care.hpp"

namespace carex {

/// Built-in benchmark problems.
///
///   1  n = 3, complex A with strong imaginary diagonal, K = B·R⁻¹·Bᵀ for a
///      real B and R = diag(1, 1, 4), Q = diag(0, 1, 5)
///   2  n = 4, skew-symmetric A (pure imaginary spectrum), K = B·Bᵀ for a
///      small real B, dense symmetric Q
///   3  scalable tridiagonal A = Tri(−1−r, −4+8i, −1+r) with r = 1/(2n+2),
///      K = I + e₁·e₁ᵀ, Q = c*·c with c = e₁ᵀ/√10
///
/// id must be 1, 2 or 3; n is only meaningful for id 3 (default 64) and must
/// be ≥ 2. Throws BadId otherwise.
CareProblem gen_example(int id, std::size_t n = 64);

} // namespace carex
