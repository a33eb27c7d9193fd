#pragma once

#include <string>

#include "carex/care.hpp"

namespace carex {

/// JSON problem format:
///   { "n": 3, "A": [[[re,im], ...], ...], "K": ..., "Q": ... }
/// Every entry is a two-element [re, im] array; matrices are stored row by
/// row. load_problem throws ParseError for malformed JSON or non-numeric
/// entries, ShapeError for wrong dimensions, and HermitianViolation, naming
/// the offending entry pair, when K or Q is not Hermitian within 1e-12
/// relative tolerance.
CareProblem load_problem(const std::string& path);

/// Writes the same format back. Round-trips bit exactly: entries are
/// serialized with max_digits10 precision.
void save_problem(const CareProblem& p, const std::string& path);

} // namespace carex
