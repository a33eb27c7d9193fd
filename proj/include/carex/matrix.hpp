#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "carex/errors.hpp"

namespace carex {

using cxd = std::complex<double>;

/// Dense complex matrix with row-major storage. All entries are validated to
/// be finite on construction; operations never produce a matrix without going
/// through this check.
class ComplexMatrix {
public:
    ComplexMatrix() : rows_(0), cols_(0) {}

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, cxd(0.0, 0.0)) {}

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cxd> entries);

    /// Convenience builder from nested lists, mostly for tests and the
    /// built-in example problems.
    ComplexMatrix(std::initializer_list<std::initializer_list<cxd>> rows);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    cxd& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const cxd& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    const std::vector<cxd>& entries() const noexcept { return entries_; }
    std::vector<cxd>& entries() noexcept { return entries_; }

    /// Re-validate after in-place mutation through entries().
    void check_finite() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<cxd> entries_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cxd scalar, const ComplexMatrix& m);
ComplexMatrix operator*(double scalar, const ComplexMatrix& m);

/// Plain transpose (no conjugation).
ComplexMatrix transpose(const ComplexMatrix& m);

/// Conjugate transpose.
ComplexMatrix adjoint(const ComplexMatrix& m);

ComplexMatrix conjugate(const ComplexMatrix& m);

/// ‖M − M*‖_F, zero exactly for Hermitian input.
double hermitian_defect(const ComplexMatrix& m);

/// (M + M*) / 2. Idempotent; the result has hermitian_defect 0 exactly.
ComplexMatrix hermitian_project(const ComplexMatrix& m);

/// Alias used in hot paths; identical to operator* but named for clarity.
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);

} // namespace carex
