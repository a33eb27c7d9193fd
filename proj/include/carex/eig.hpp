#pragma once

#include <vector>

#include "carex/matrix.hpp"

namespace carex {

/// All eigenvalues of a square matrix with n ≤ 256, via Householder
/// reduction to Hessenberg form followed by shifted QR iteration. The result
/// is sorted by descending modulus (ties broken by real then imaginary part,
/// descending) so output order is deterministic.
std::vector<cxd> eigenvalues(const ComplexMatrix& m);

} // namespace carex
