#include "carex/bench.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace carex {

namespace {

const std::vector<double>& default_grid() {
    static const std::vector<double> grid{0.0, 0.015, 0.1, 0.3, 0.5, 1.0, 1.5};
    return grid;
}

BenchRow to_row(const std::string& method, double omega, const SolveReport& rep) {
    BenchRow row;
    row.method = method;
    row.omega_star = omega;
    row.nres_final = rep.final_nres;
    row.it_out = rep.it_out;
    row.it_ave = rep.it_ave;
    row.it_cumul = rep.it_cumul;
    row.cpu_seconds = rep.wall_time;
    row.status = termination_name(rep.termination);
    return row;
}

// Returns the grid run minimizing it_cumul; converged runs always beat
// non-converged ones, ties go to the smaller omega.
BenchRow tune_omega(const CareProblem& p, SolverConfig cfg, const std::string& method,
                    const std::vector<double>& grid, bool inexact) {
    BenchRow best;
    bool have = false;
    for (double omega : grid) {
        cfg.omega = omega;
        const SolveReport rep =
            inexact ? inexact_newton_gadi_solve(p, cfg) : newton_gadi_solve(p, cfg);
        BenchRow row = to_row(method, omega, rep);
        const bool row_ok = rep.termination == Termination::Converged;
        if (!have) {
            best = std::move(row);
            have = true;
            continue;
        }
        const bool best_ok = best.status == "converged";
        if (row_ok != best_ok) {
            if (row_ok) best = std::move(row);
            continue;
        }
        if (row.it_cumul < best.it_cumul ||
            (row.it_cumul == best.it_cumul && row.omega_star < best.omega_star)) {
            best = std::move(row);
        }
    }
    return best;
}

} // namespace

std::vector<BenchRow> bench_problem(const CareProblem& p, const SolverConfig& base,
                                    const std::vector<double>& omega_grid) {
    const std::vector<double>& grid = omega_grid.empty() ? default_grid() : omega_grid;

    SolverConfig exact_cfg = base;
    exact_cfg.eta_schedule = EtaSchedule::None;
    SolverConfig inexact_cfg = base;
    inexact_cfg.eta_schedule = EtaSchedule::InverseCubic;

    std::vector<BenchRow> rows;

    SolverConfig adi = exact_cfg;
    adi.omega = 0.0;
    rows.push_back(to_row("newton-adi", 0.0, newton_gadi_solve(p, adi)));

    rows.push_back(tune_omega(p, exact_cfg, "newton-gadi", grid, false));

    SolverConfig in_adi = inexact_cfg;
    in_adi.omega = 0.0;
    rows.push_back(to_row("inexact-newton-adi", 0.0, inexact_newton_gadi_solve(p, in_adi)));

    rows.push_back(tune_omega(p, inexact_cfg, "inexact-newton-gadi", grid, true));
    return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::ParseError, "cannot write " + path);
    }
    out << "method,omega_star,nres_final,it_out,it_ave,it_cumul,cpu_seconds,status\n";
    for (const BenchRow& r : rows) {
        std::ostringstream line;
        line << r.method << ',' << std::setprecision(6) << r.omega_star << ','
             << std::scientific << std::setprecision(4) << r.nres_final << ','
             << std::defaultfloat << r.it_out << ',' << std::fixed << std::setprecision(2)
             << r.it_ave << ',' << std::defaultfloat << r.it_cumul << ',' << std::fixed
             << std::setprecision(3) << r.cpu_seconds << ',' << r.status;
        out << line.str() << "\n";
    }
}

std::vector<BenchSpecEntry> load_bench_spec(const std::string& path) {
    using nlohmann::json;
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
    if (!j.is_object() || !j.contains("problems") || !j["problems"].is_array()) {
        throw Error(ErrorCode::ParseError, path + ": need a problems array");
    }
    std::vector<BenchSpecEntry> entries;
    for (const json& item : j["problems"]) {
        if (!item.is_object() || !item.contains("example") ||
            !item["example"].is_number_integer()) {
            throw Error(ErrorCode::ParseError, path + ": each problem needs an example id");
        }
        BenchSpecEntry e;
        e.example_id = item["example"].get<int>();
        if (item.contains("n")) {
            if (!item["n"].is_number_unsigned() || item["n"].get<std::size_t>() == 0) {
                throw Error(ErrorCode::ParseError, path + ": n must be a positive integer");
            }
            e.n = item["n"].get<std::size_t>();
        }
        if (item.contains("omega_grid")) {
            if (!item["omega_grid"].is_array()) {
                throw Error(ErrorCode::ParseError, path + ": omega_grid must be an array");
            }
            for (const json& w : item["omega_grid"]) {
                if (!w.is_number()) {
                    throw Error(ErrorCode::ParseError, path + ": omega_grid entries must be numbers");
                }
                e.omega_grid.push_back(w.get<double>());
            }
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

} // namespace carex
