#pragma once

#include "carex/matrix.hpp"

namespace carex {

enum class NormKind { Inf, Fro, Spectral };

/// Matrix norms. Inf is the max absolute row sum, Fro the root of the sum of
/// squared moduli, Spectral the largest singular value computed by power
/// iteration on M*·M (deterministic all-ones start, 1e-12 relative tolerance,
/// 1000 sweep cap, up to 50 perturbed restarts on stagnation).
double norm(const ComplexMatrix& m, NormKind kind);

} // namespace carex
