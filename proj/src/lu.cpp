#include "carex/lu.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace carex {

LuFactorization lu_factor(const ComplexMatrix& m) {
    if (!m.square()) {
        throw Error(ErrorCode::NonSquare, "lu_factor requires a square matrix");
    }
    const std::size_t n = m.rows();
    LuFactorization f;
    f.n = n;
    f.packed = m.entries();
    f.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;

    double max_row_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::abs(m(i, j));
        if (row > max_row_norm) max_row_norm = row;
    }
    const double tol = 1e-14 * max_row_norm;

    std::vector<cxd>& a = f.packed;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot_row = col;
        double pivot_mag = std::abs(a[col * n + col]);
        for (std::size_t i = col + 1; i < n; ++i) {
            const double mag = std::abs(a[i * n + col]);
            if (mag > pivot_mag) {
                pivot_mag = mag;
                pivot_row = i;
            }
        }
        if (pivot_row != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[col * n + j], a[pivot_row * n + j]);
            std::swap(f.perm[col], f.perm[pivot_row]);
        }
        if (pivot_mag <= tol) {
            f.singular = true;
            if (pivot_mag == 0.0) continue;
        }
        const cxd pivot = a[col * n + col];
        for (std::size_t i = col + 1; i < n; ++i) {
            const cxd mult = a[i * n + col] / pivot;
            a[i * n + col] = mult;
            if (mult == cxd(0.0, 0.0)) continue;
            for (std::size_t j = col + 1; j < n; ++j) a[i * n + j] -= mult * a[col * n + j];
        }
    }
    return f;
}

namespace {

// The substitutions run on split real/imaginary planes: the inner loops over
// right-hand-side columns then vectorize, which matters since these solves
// sit inside every GADI sweep.
struct Planes {
    std::vector<double> re;
    std::vector<double> im;
};

// row_i -= c * row_j over m contiguous entries
inline void plane_axpy(Planes& p, std::size_t i, std::size_t j, std::size_t m, cxd c) {
    const double cr = c.real(), ci = c.imag();
    double* rr = &p.re[i * m];
    double* ri = &p.im[i * m];
    const double* sr = &p.re[j * m];
    const double* si = &p.im[j * m];
    for (std::size_t q = 0; q < m; ++q) {
        rr[q] -= cr * sr[q] - ci * si[q];
        ri[q] -= cr * si[q] + ci * sr[q];
    }
}

inline void plane_scale(Planes& p, std::size_t i, std::size_t m, cxd c) {
    const double cr = c.real(), ci = c.imag();
    double* rr = &p.re[i * m];
    double* ri = &p.im[i * m];
    for (std::size_t q = 0; q < m; ++q) {
        const double tr = cr * rr[q] - ci * ri[q];
        ri[q] = cr * ri[q] + ci * rr[q];
        rr[q] = tr;
    }
}

} // namespace

ComplexMatrix solve(const LuFactorization& f, const ComplexMatrix& b, Side side) {
    if (f.singular) {
        throw Error(ErrorCode::SingularMatrix, "solve called with a singular factorization");
    }
    const std::size_t n = f.n;
    const std::vector<cxd>& a = f.packed;

    if (side == Side::Left) {
        if (b.rows() != n) {
            throw Error(ErrorCode::DimensionMismatch,
                        "left solve: rhs has " + std::to_string(b.rows()) + " rows, expected " +
                            std::to_string(n));
        }
        const std::size_t m = b.cols();
        Planes y{std::vector<double>(n * m), std::vector<double>(n * m)};
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t src = f.perm[i];
            for (std::size_t q = 0; q < m; ++q) {
                y.re[i * m + q] = b(src, q).real();
                y.im[i * m + q] = b(src, q).imag();
            }
        }
        for (std::size_t i = 1; i < n; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                const cxd lij = a[i * n + j];
                if (lij != cxd(0.0, 0.0)) plane_axpy(y, i, j, m, lij);
            }
        }
        for (std::size_t ip = n; ip-- > 0;) {
            for (std::size_t j = ip + 1; j < n; ++j) {
                const cxd uij = a[ip * n + j];
                if (uij != cxd(0.0, 0.0)) plane_axpy(y, ip, j, m, uij);
            }
            plane_scale(y, ip, m, cxd(1.0, 0.0) / a[ip * n + ip]);
        }
        ComplexMatrix out(n, m);
        for (std::size_t i = 0; i < n * m; ++i) out.entries()[i] = cxd(y.re[i], y.im[i]);
        out.check_finite();
        return out;
    }

    if (b.cols() != n) {
        throw Error(ErrorCode::DimensionMismatch,
                    "right solve: rhs has " + std::to_string(b.cols()) + " cols, expected " +
                        std::to_string(n));
    }
    const std::size_t m = b.rows();
    // X·M = B transposes to M^T·X^T = B^T with M^T = U^T·L^T·P, so the same
    // factors serve: forward substitution with U^T, back substitution with
    // the unit-diagonal L^T, then undo the permutation across columns.
    Planes z{std::vector<double>(n * m), std::vector<double>(n * m)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t q = 0; q < m; ++q) {
            z.re[i * m + q] = b(q, i).real();
            z.im[i * m + q] = b(q, i).imag();
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const cxd uji = a[j * n + i]; // (U^T)(i,j)
            if (uji != cxd(0.0, 0.0)) plane_axpy(z, i, j, m, uji);
        }
        plane_scale(z, i, m, cxd(1.0, 0.0) / a[i * n + i]);
    }
    for (std::size_t ip = n; ip-- > 0;) {
        for (std::size_t j = ip + 1; j < n; ++j) {
            const cxd lji = a[j * n + ip]; // (L^T)(ip,j)
            if (lji != cxd(0.0, 0.0)) plane_axpy(z, ip, j, m, lji);
        }
    }
    ComplexMatrix out(m, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t col = f.perm[i];
        for (std::size_t q = 0; q < m; ++q) {
            out(q, col) = cxd(z.re[i * m + q], z.im[i * m + q]);
        }
    }
    out.check_finite();
    return out;
}

ComplexMatrix inverse(const ComplexMatrix& m) {
    LuFactorization f = lu_factor(m);
    if (f.singular) {
        throw Error(ErrorCode::SingularMatrix, "inverse of a singular matrix");
    }
    return solve(f, ComplexMatrix::identity(m.rows()), Side::Left);
}

} // namespace carex
