#include "carex/examples.hpp"

#include <cmath>
#include <string>

#include "carex/lu.hpp"

namespace carex {

namespace {

CareProblem example1() {
    ComplexMatrix a{{cxd(-2.0, 10.0), cxd(0.0, 0.0), cxd(-1.0, 0.0)},
                    {cxd(0.0, 0.0), cxd(-1.0, 10.0), cxd(0.0, 0.0)},
                    {cxd(-1.0, 0.0), cxd(-1.0, 0.0), cxd(0.0, -2.0)}};
    ComplexMatrix b{{cxd(-2.0, 0.0), cxd(0.0, 0.0), cxd(-1.0, 0.0)},
                    {cxd(0.0, 0.0), cxd(-1.0, 0.0), cxd(-1.0, 0.0)},
                    {cxd(1.0, 0.0), cxd(0.0, 0.0), cxd(-2.0, 0.0)}};
    ComplexMatrix r(3, 3);
    r(0, 0) = 1.0;
    r(1, 1) = 1.0;
    r(2, 2) = 4.0;
    ComplexMatrix q(3, 3);
    q(1, 1) = 1.0;
    q(2, 2) = 5.0;
    const ComplexMatrix k = b * (inverse(r) * transpose(b));
    return CareProblem(a, k, q);
}

CareProblem example2() {
    ComplexMatrix a{{cxd(0, 0), cxd(-1, 0), cxd(0, 0), cxd(0, 0)},
                    {cxd(1, 0), cxd(0, 0), cxd(-1, 0), cxd(0, 0)},
                    {cxd(0, 0), cxd(1, 0), cxd(0, 0), cxd(-1, 0)},
                    {cxd(0, 0), cxd(0, 0), cxd(1, 0), cxd(0, 0)}};
    ComplexMatrix b{{cxd(3, 0), cxd(-50, 0), cxd(1, 0), cxd(2, 0)},
                    {cxd(1, 0), cxd(-3, 0), cxd(-2, 0), cxd(1, 0)},
                    {cxd(-3, 0), cxd(1, 0), cxd(3, 0), cxd(4, 0)},
                    {cxd(3, 0), cxd(-1, 0), cxd(-4, 0), cxd(3, 0)}};
    b = 1e-3 * b;
    ComplexMatrix q{{cxd(0.0025, 0), cxd(0, 0), cxd(0, 0), cxd(0, 0)},
                    {cxd(0, 0), cxd(0.0111, 0), cxd(0.0025, 0), cxd(0, 0)},
                    {cxd(0, 0), cxd(0.0025, 0), cxd(1.0006, 0), cxd(0.0200, 0)},
                    {cxd(0, 0), cxd(0, 0), cxd(0.0200, 0), cxd(0.0004, 0)}};
    const ComplexMatrix k = b * transpose(b);
    return CareProblem(a, k, q);
}

CareProblem example3(std::size_t n) {
    const double r = 1.0 / (2.0 * static_cast<double>(n) + 2.0);
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = cxd(-4.0, 8.0);
        if (i + 1 < n) {
            a(i + 1, i) = cxd(-1.0 - r, 0.0); // subdiagonal
            a(i, i + 1) = cxd(-1.0 + r, 0.0); // superdiagonal
        }
    }
    // B = (b^T, I_n) with b = e_1, so K = B B^T = I + e_1 e_1^T.
    ComplexMatrix k = ComplexMatrix::identity(n);
    k(0, 0) = cxd(2.0, 0.0);
    // Q = c^T c with c = e_1^T / sqrt(10).
    ComplexMatrix q(n, n);
    const double c0 = 1.0 / std::sqrt(10.0);
    q(0, 0) = cxd(c0 * c0, 0.0);
    return CareProblem(a, k, q);
}

} // namespace

CareProblem gen_example(int id, std::size_t n) {
    switch (id) {
        case 1: return example1();
        case 2: return example2();
        case 3:
            if (n < 2) {
                throw Error(ErrorCode::BadId, "example 3 needs n >= 2");
            }
            return example3(n);
        default:
            throw Error(ErrorCode::BadId, "unknown example id " + std::to_string(id));
    }
}

} // namespace carex
