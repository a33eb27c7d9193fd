#pragma once

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <limits>
#include <vector>

#include "carex/eig.hpp"
#include "carex/matrix.hpp"

namespace testsupport {

using carex::ComplexMatrix;
using carex::cxd;

// Deterministic linear congruential generator so every run and every machine
// sees the same instances.
inline double next_unit(std::uint64_t& state) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) * (1.0 / 9007199254740992.0);
}

inline cxd next_complex(std::uint64_t& state) {
    const double re = 2.0 * next_unit(state) - 1.0;
    const double im = 2.0 * next_unit(state) - 1.0;
    return {re, im};
}

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t& state) {
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = next_complex(state);
    return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, std::uint64_t& state) {
    return carex::hermitian_project(random_matrix(n, n, state));
}

// Random matrix whose Hermitian part is positive definite with smallest
// eigenvalue at least `margin`. Its field of values then lies in the open
// right half-plane, which is the setting the GADI theory assumes for the
// closed-loop matrix.
inline ComplexMatrix random_positive_real(std::size_t n, std::uint64_t& state,
                                          double margin = 0.5) {
    const ComplexMatrix g = random_matrix(n, n, state);
    const ComplexMatrix h = carex::hermitian_project(g);
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.4 * h(i, j) + 0.5 * (g(i, j) - std::conj(g(j, i)));

    double min_eig = 0.0; // Hermitian part of a is 0.4 h; shift it above margin
    for (const cxd& lambda : carex::eigenvalues(0.4 * h)) min_eig = std::min(min_eig, lambda.real());
    const double shift = margin - min_eig;
    for (std::size_t i = 0; i < n; ++i) a(i, i) += shift;
    return a;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

inline double fro_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j) - b(i, j));
    return std::sqrt(s);
}

// Greedy nearest-neighbour pairing distance between two equally sized
// multisets of complex numbers. Small result means the multisets agree.
inline double multiset_distance(std::vector<cxd> lhs, std::vector<cxd> rhs) {
    double worst = 0.0;
    for (const cxd& v : lhs) {
        std::size_t best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < rhs.size(); ++j) {
            const double d = std::abs(v - rhs[j]);
            if (d < best_dist) {
                best_dist = d;
                best = j;
            }
        }
        worst = std::max(worst, best_dist);
        rhs.erase(rhs.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return worst;
}

} // namespace testsupport
