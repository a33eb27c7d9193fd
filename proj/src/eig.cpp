#include "carex/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "carex/norms.hpp"

namespace carex {

namespace {

// In-place Householder reduction to upper Hessenberg form. Only the
// similarity on the trailing block matters for eigenvalues, but the full
// transform is applied so the result is a genuine similarity of the input.
void hessenberg(ComplexMatrix& h) {
    const std::size_t n = h.rows();
    if (n < 3) return;
    std::vector<cxd> w(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double below = 0.0;
        for (std::size_t i = k + 2; i < n; ++i) below += std::norm(h(i, k));
        if (below == 0.0) continue;

        const cxd alpha = h(k + 1, k);
        const double xnorm = std::sqrt(std::norm(alpha) + below);
        const double amod = std::abs(alpha);
        const cxd phase = amod > 0.0 ? alpha / amod : cxd(1.0, 0.0);
        const cxd sigma = phase * xnorm;

        const std::size_t len = n - (k + 1);
        w[0] = alpha + sigma;
        for (std::size_t i = 1; i < len; ++i) w[i] = h(k + 1 + i, k);
        double wsq = 0.0;
        for (std::size_t i = 0; i < len; ++i) wsq += std::norm(w[i]);
        if (wsq == 0.0) continue;
        const double beta = 2.0 / wsq;

        // Reflected column k is known in closed form.
        h(k + 1, k) = -sigma;
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = cxd(0.0, 0.0);

        // Left: rows k+1..n-1, columns k+1..n-1.
        for (std::size_t j = k + 1; j < n; ++j) {
            cxd s(0.0, 0.0);
            for (std::size_t i = 0; i < len; ++i) s += std::conj(w[i]) * h(k + 1 + i, j);
            s *= beta;
            for (std::size_t i = 0; i < len; ++i) h(k + 1 + i, j) -= s * w[i];
        }
        // Right: columns k+1..n-1, all rows.
        for (std::size_t i = 0; i < n; ++i) {
            cxd s(0.0, 0.0);
            for (std::size_t j = 0; j < len; ++j) s += h(i, k + 1 + j) * w[j];
            s *= beta;
            for (std::size_t j = 0; j < len; ++j) h(i, k + 1 + j) -= s * std::conj(w[j]);
        }
    }
}

void eig2x2(const cxd& a, const cxd& b, const cxd& c, const cxd& d, cxd& r1, cxd& r2) {
    const cxd half_tr = 0.5 * (a + d);
    const cxd disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
    r1 = half_tr + disc;
    r2 = half_tr - disc;
}

cxd wilkinson_shift(const ComplexMatrix& h, std::size_t hi) {
    cxd r1, r2;
    eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi), r1, r2);
    const cxd d = h(hi, hi);
    return std::abs(r1 - d) <= std::abs(r2 - d) ? r1 : r2;
}

// Explicit single-shift QR step on the window [l, hi]. Blocks outside the
// window do not affect eigenvalues after deflation, so only the window is
// updated.
void qr_step(ComplexMatrix& h, std::size_t l, std::size_t hi, cxd mu) {
    const std::size_t w = hi - l + 1;
    std::vector<cxd> cs(w - 1), sn(w - 1);

    for (std::size_t i = l; i <= hi; ++i) h(i, i) -= mu;

    // Left pass: G_k zeroes the subdiagonal of column k.
    for (std::size_t k = l; k < hi; ++k) {
        const cxd a = h(k, k);
        const cxd b = h(k + 1, k);
        const double r = std::sqrt(std::norm(a) + std::norm(b));
        cxd ca, sb;
        if (r == 0.0) {
            ca = cxd(1.0, 0.0);
            sb = cxd(0.0, 0.0);
        } else {
            ca = a / r;
            sb = b / r;
        }
        cs[k - l] = ca;
        sn[k - l] = sb;
        for (std::size_t j = k; j <= hi; ++j) {
            const cxd t1 = h(k, j);
            const cxd t2 = h(k + 1, j);
            h(k, j) = std::conj(ca) * t1 + std::conj(sb) * t2;
            h(k + 1, j) = -sb * t1 + ca * t2;
        }
    }
    // Right pass: multiply by the adjoints in order, restoring Hessenberg form.
    for (std::size_t k = l; k < hi; ++k) {
        const cxd ca = cs[k - l];
        const cxd sb = sn[k - l];
        const std::size_t top = l;
        const std::size_t bottom = std::min(hi, k + 1);
        for (std::size_t i = top; i <= bottom; ++i) {
            const cxd t1 = h(i, k);
            const cxd t2 = h(i, k + 1);
            h(i, k) = ca * t1 + sb * t2;
            h(i, k + 1) = -std::conj(sb) * t1 + std::conj(ca) * t2;
        }
    }

    for (std::size_t i = l; i <= hi; ++i) h(i, i) += mu;
}

} // namespace

std::vector<cxd> eigenvalues(const ComplexMatrix& m) {
    if (!m.square()) {
        throw Error(ErrorCode::NonSquare, "eigenvalues requires a square matrix");
    }
    const std::size_t n = m.rows();
    if (n > 256) {
        throw Error(ErrorCode::TooLarge,
                    "eigenvalues limited to n <= 256, got n = " + std::to_string(n));
    }
    std::vector<cxd> eigs;
    if (n == 0) return eigs;
    if (n == 1) return {m(0, 0)};

    ComplexMatrix h = m;
    hessenberg(h);

    const double eps = std::numeric_limits<double>::epsilon();
    const double hnorm = norm(h, NormKind::Fro);

    eigs.reserve(n);
    std::size_t hi = n - 1;
    std::size_t since_deflation = 0;
    std::size_t total = 0;
    const std::size_t total_cap = 100 * n;

    while (true) {
        if (hi == 0) {
            eigs.push_back(h(0, 0));
            break;
        }
        // Smallest l with a negligible subdiagonal just below it.
        std::size_t l = hi;
        while (l > 0) {
            const double sub = std::abs(h(l, l - 1));
            double tol = eps * (std::abs(h(l - 1, l - 1)) + std::abs(h(l, l)));
            if (tol == 0.0) tol = eps * hnorm;
            if (sub <= tol) {
                h(l, l - 1) = cxd(0.0, 0.0);
                break;
            }
            --l;
        }
        if (l == hi) {
            eigs.push_back(h(hi, hi));
            --hi;
            since_deflation = 0;
            continue;
        }
        if (l + 1 == hi) {
            cxd r1, r2;
            eig2x2(h(l, l), h(l, hi), h(hi, l), h(hi, hi), r1, r2);
            eigs.push_back(r1);
            eigs.push_back(r2);
            if (l == 0) break;
            hi = l - 1;
            since_deflation = 0;
            continue;
        }

        ++total;
        ++since_deflation;
        if (total > total_cap) {
            throw Error(ErrorCode::NoConvergence, "QR iteration exceeded its sweep budget");
        }
        cxd mu;
        if (since_deflation % 10 == 0) {
            const double kick = std::abs(h(hi, hi - 1));
            mu = h(hi, hi) + (since_deflation % 20 == 0 ? cxd(0.0, 0.75) : cxd(0.75, 0.0)) * kick;
        } else {
            mu = wilkinson_shift(h, hi);
        }
        qr_step(h, l, hi, mu);
    }

    std::sort(eigs.begin(), eigs.end(), [](const cxd& x, const cxd& y) {
        const double mx = std::abs(x), my = std::abs(y);
        if (mx != my) return mx > my;
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
    return eigs;
}

} // namespace carex
