#pragma once

#include <string>
#include <vector>

#include "carex/care.hpp"

namespace carex {

struct BenchRow {
    std::string method;
    double omega_star = 0.0;
    double nres_final = 0.0;
    std::size_t it_out = 0;
    double it_ave = 0.0;
    std::size_t it_cumul = 0;
    double cpu_seconds = 0.0;
    std::string status; // "converged" or the termination reason
};

/// Runs the four-method comparison on one problem:
///   newton-adi            ω fixed at 0
///   newton-gadi           ω tuned over the grid
///   inexact-newton-adi    ω fixed at 0, η_k = 1/(k³+1)
///   inexact-newton-gadi   ω tuned, η_k = 1/(k³+1)
/// Tuning minimizes it_cumul over grid (default {0, 0.015, 0.1, 0.3, 0.5,
/// 1.0, 1.5}), ties resolved toward the smaller ω. Rows keep the stats of
/// the winning run.
std::vector<BenchRow> bench_problem(const CareProblem& p, const SolverConfig& base,
                                    const std::vector<double>& omega_grid = {});

/// CSV with header
///   method,omega_star,nres_final,it_out,it_ave,it_cumul,cpu_seconds,status
void write_bench_csv(const std::vector<BenchRow>& rows, const std::string& path);

struct BenchSpecEntry {
    int example_id = 0;
    std::size_t n = 64;
    std::vector<double> omega_grid;
};

/// Bench spec JSON: { "problems": [ { "example": 3, "n": 64,
/// "omega_grid": [0, 1] }, ... ] }. omega_grid is optional.
std::vector<BenchSpecEntry> load_bench_spec(const std::string& path);

} // namespace carex
