#include "carex/matrix.hpp"

#include <cmath>
#include <string>

namespace carex {

namespace {

void require_finite(const std::vector<cxd>& entries) {
    for (const cxd& z : entries) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw Error(ErrorCode::NonFinite, "matrix contains a non-finite entry");
        }
    }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(op) + ": shapes " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()) + " differ");
    }
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cxd> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw Error(ErrorCode::DimensionMismatch,
                    "entry count " + std::to_string(entries_.size()) + " does not match " +
                        std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    require_finite(entries_);
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cxd>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    entries_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw Error(ErrorCode::DimensionMismatch, "ragged initializer list");
        }
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
    require_finite(entries_);
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = cxd(1.0, 0.0);
    return m;
}

void ComplexMatrix::check_finite() const { require_finite(entries_); }

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "add");
    ComplexMatrix out(a.rows(), a.cols());
    const std::size_t total = a.rows() * a.cols();
    for (std::size_t i = 0; i < total; ++i) out.entries()[i] = a.entries()[i] + b.entries()[i];
    return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "subtract");
    ComplexMatrix out(a.rows(), a.cols());
    const std::size_t total = a.rows() * a.cols();
    for (std::size_t i = 0; i < total; ++i) out.entries()[i] = a.entries()[i] - b.entries()[i];
    return out;
}

ComplexMatrix operator-(const ComplexMatrix& a) {
    ComplexMatrix out(a.rows(), a.cols());
    const std::size_t total = a.rows() * a.cols();
    for (std::size_t i = 0; i < total; ++i) out.entries()[i] = -a.entries()[i];
    return out;
}

// Complex product through four real kernels on split planes. The ikj loop
// order keeps the inner loop a contiguous axpy that the optimizer
// vectorizes; interleaved std::complex arithmetic defeats that.
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "multiply: inner dimensions " + std::to_string(a.cols()) + " and " +
                        std::to_string(b.rows()) + " differ");
    }
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();

    std::vector<double> ar(m * k), ai(m * k), br(k * n), bi(k * n);
    for (std::size_t i = 0; i < m * k; ++i) {
        ar[i] = a.entries()[i].real();
        ai[i] = a.entries()[i].imag();
    }
    for (std::size_t i = 0; i < k * n; ++i) {
        br[i] = b.entries()[i].real();
        bi[i] = b.entries()[i].imag();
    }

    std::vector<double> cr(m * n, 0.0), ci(m * n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
            const double xr = ar[i * k + p];
            const double xi = ai[i * k + p];
            const double* brow = &br[p * n];
            const double* birow = &bi[p * n];
            double* crow = &cr[i * n];
            double* cirow = &ci[i * n];
            for (std::size_t j = 0; j < n; ++j) {
                crow[j] += xr * brow[j] - xi * birow[j];
                cirow[j] += xr * birow[j] + xi * brow[j];
            }
        }
    }

    ComplexMatrix out(m, n);
    for (std::size_t i = 0; i < m * n; ++i) out.entries()[i] = cxd(cr[i], ci[i]);
    out.check_finite();
    return out;
}

ComplexMatrix operator*(cxd scalar, const ComplexMatrix& m) {
    ComplexMatrix out(m.rows(), m.cols());
    const std::size_t total = m.rows() * m.cols();
    for (std::size_t i = 0; i < total; ++i) out.entries()[i] = scalar * m.entries()[i];
    out.check_finite();
    return out;
}

ComplexMatrix operator*(double scalar, const ComplexMatrix& m) {
    return cxd(scalar, 0.0) * m;
}

ComplexMatrix transpose(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
    return out;
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
    return out;
}

ComplexMatrix conjugate(const ComplexMatrix& m) {
    ComplexMatrix out(m.rows(), m.cols());
    const std::size_t total = m.rows() * m.cols();
    for (std::size_t i = 0; i < total; ++i) out.entries()[i] = std::conj(m.entries()[i]);
    return out;
}

double hermitian_defect(const ComplexMatrix& m) {
    if (!m.square()) {
        throw Error(ErrorCode::NonSquare, "hermitian_defect requires a square matrix");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const cxd d = m(i, j) - std::conj(m(j, i));
            sum += std::norm(d);
        }
    }
    return std::sqrt(sum);
}

ComplexMatrix hermitian_project(const ComplexMatrix& m) {
    if (!m.square()) {
        throw Error(ErrorCode::NonSquare, "hermitian_project requires a square matrix");
    }
    const std::size_t n = m.rows();
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        out(i, i) = cxd(m(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const cxd v = 0.5 * (m(i, j) + std::conj(m(j, i)));
            out(i, j) = v;
            out(j, i) = std::conj(v);
        }
    }
    return out;
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b; }

} // namespace carex
