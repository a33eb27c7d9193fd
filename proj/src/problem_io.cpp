#include "carex/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "carex/norms.hpp"

namespace carex {

namespace {

using nlohmann::json;

ComplexMatrix parse_matrix(const json& j, const std::string& name, std::size_t n) {
    if (!j.is_array() || j.size() != n) {
        throw Error(ErrorCode::ShapeError,
                    name + " must be an array of " + std::to_string(n) + " rows");
    }
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const json& row = j[i];
        if (!row.is_array() || row.size() != n) {
            throw Error(ErrorCode::ShapeError, name + " row " + std::to_string(i) +
                                                   " must hold " + std::to_string(n) +
                                                   " entries");
        }
        for (std::size_t k = 0; k < n; ++k) {
            const json& entry = row[k];
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
                !entry[1].is_number()) {
                throw Error(ErrorCode::ParseError,
                            name + " entry (" + std::to_string(i) + "," + std::to_string(k) +
                                ") must be a [re, im] pair");
            }
            m(i, k) = cxd(entry[0].get<double>(), entry[1].get<double>());
        }
    }
    m.check_finite();
    return m;
}

// Same aggregate criterion the CareProblem constructor applies, but the
// thrown error names the worst entry pair so users can fix their file.
void check_hermitian_named(const ComplexMatrix& m, const std::string& name) {
    const double tol = 1e-12 * std::max(1.0, norm(m, NormKind::Fro));
    if (hermitian_defect(m) <= tol) return;
    std::size_t bi = 0, bj = 0;
    double worst = -1.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = i; j < m.cols(); ++j) {
            const double gap = std::abs(m(i, j) - std::conj(m(j, i)));
            if (gap > worst) {
                worst = gap;
                bi = i;
                bj = j;
            }
        }
    }
    throw Error(ErrorCode::HermitianViolation,
                name + " is not Hermitian; worst entry pair (" + std::to_string(bi) + "," +
                    std::to_string(bj) + ") and (" + std::to_string(bj) + "," +
                    std::to_string(bi) + ")");
}

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            row.push_back({m(i, j).real(), m(i, j).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

CareProblem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("A") || !j.contains("K") ||
        !j.contains("Q")) {
        throw Error(ErrorCode::ParseError, path + ": need fields n, A, K, Q");
    }
    if (!j["n"].is_number_unsigned() || j["n"].get<std::size_t>() == 0) {
        throw Error(ErrorCode::ParseError, path + ": n must be a positive integer");
    }
    const std::size_t n = j["n"].get<std::size_t>();

    ComplexMatrix a = parse_matrix(j["A"], "A", n);
    ComplexMatrix k = parse_matrix(j["K"], "K", n);
    ComplexMatrix q = parse_matrix(j["Q"], "Q", n);
    check_hermitian_named(k, "K");
    check_hermitian_named(q, "Q");
    return CareProblem(std::move(a), std::move(k), std::move(q));
}

void save_problem(const CareProblem& p, const std::string& path) {
    json j;
    j["n"] = p.n();
    j["A"] = matrix_to_json(p.A);
    j["K"] = matrix_to_json(p.K);
    j["Q"] = matrix_to_json(p.Q);
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::ParseError, "cannot write " + path);
    }
    out << j.dump(1) << "\n";
}

} // namespace carex
