#pragma once

#include <vector>

#include "carex/matrix.hpp"

namespace carex {

/// Which side of the product the unknown sits on when solving with an
/// LuFactorization: Left solves M·X = B, Right solves X·M = B.
enum class Side { Left, Right };

/// Packed LU factors of a square matrix with partial pivoting, P·M = L·U.
/// L is unit lower triangular and shares storage with U. The factorization
/// is marked singular when a pivot falls below 1e-14 times the max row norm
/// of the input; solving with a singular factorization throws.
struct LuFactorization {
    std::size_t n = 0;
    std::vector<cxd> packed;       // row-major, L below diagonal, U on and above
    std::vector<std::size_t> perm; // row i of P·M is row perm[i] of M
    bool singular = false;
};

LuFactorization lu_factor(const ComplexMatrix& m);

/// Solve M·X = B (Side::Left) or X·M = B (Side::Right) using the factors of
/// M. The right-sided solve runs the transposed system on the same
/// factorization, so one lu_factor call serves both orientations.
ComplexMatrix solve(const LuFactorization& f, const ComplexMatrix& b, Side side);

/// M⁻¹ via LU; throws SingularMatrix when the factorization is flagged.
ComplexMatrix inverse(const ComplexMatrix& m);

} // namespace carex
