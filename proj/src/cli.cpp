#include "carex/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "carex/bench.hpp"
#include "carex/care.hpp"
#include "carex/examples.hpp"
#include "carex/norms.hpp"
#include "carex/oracle.hpp"
#include "carex/problem_io.hpp"

namespace carex {

namespace {

struct ProblemArgs {
    std::string problem_path;
    int example_id = 0;
    std::size_t n = 64;
};

void add_problem_options(CLI::App* cmd, ProblemArgs& args) {
    auto* path_opt = cmd->add_option("--problem", args.problem_path, "Problem JSON file");
    auto* ex_opt =
        cmd->add_option("--example", args.example_id, "Built-in example id")->check(CLI::Range(1, 3));
    cmd->add_option("--n", args.n, "Dimension for example 3")->check(CLI::PositiveNumber);
    path_opt->excludes(ex_opt);
    ex_opt->excludes(path_opt);
}

CareProblem resolve_problem(const ProblemArgs& args) {
    if (!args.problem_path.empty()) return load_problem(args.problem_path);
    if (args.example_id != 0) return gen_example(args.example_id, args.n);
    throw Error(ErrorCode::InvalidConfig, "need either --problem or --example");
}

nlohmann::json matrix_json(const ComplexMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            row.push_back({m(i, j).real(), m(i, j).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_report_json(const SolveReport& rep, const std::string& method,
                       const std::string& path) {
    nlohmann::json j;
    j["method"] = method;
    j["termination"] = termination_name(rep.termination);
    j["it_out"] = rep.it_out;
    j["it_cumul"] = rep.it_cumul;
    j["it_ave"] = rep.it_ave;
    j["initial_nres"] = rep.initial_nres;
    j["final_nres"] = rep.final_nres;
    j["hermitian_defect_final"] = rep.hermitian_defect_final;
    j["wall_time"] = rep.wall_time;
    j["inner_cap_hits"] = rep.inner_cap_hits;
    j["nres_history"] = rep.nres_history;
    j["inner_counts"] = rep.inner_counts;
    j["alphas"] = rep.alphas;
    j["inner_residuals"] = rep.inner_residuals;
    if (!rep.monotone_defects.empty()) j["monotone_defects"] = rep.monotone_defects;
    j["solution"] = matrix_json(rep.solution);
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::ParseError, "cannot write " + path);
    }
    out << j.dump(1) << "\n";
}

void write_history_csv(const SolveReport& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::ParseError, "cannot write " + path);
    }
    out << "k,nres,inner_steps,alpha,lyap_residual\n";
    for (std::size_t k = 0; k < rep.it_out; ++k) {
        std::ostringstream line;
        line << (k + 1) << ',' << std::scientific << std::setprecision(10)
             << rep.nres_history[k] << ',' << std::defaultfloat << rep.inner_counts[k] << ','
             << std::setprecision(10) << rep.alphas[k] << ',' << std::scientific
             << std::setprecision(10) << rep.inner_residuals[k];
        out << line.str() << "\n";
    }
}

int run_solve(const ProblemArgs& pargs, const std::string& method, double omega,
              bool omega_set, const std::string& alpha_arg, const SolverConfig& base,
              const std::string& eta_arg, const std::string& report_path,
              const std::string& history_path) {
    const CareProblem p = resolve_problem(pargs);

    SolverConfig cfg = base;
    if (omega_set) cfg.omega = omega;

    if (alpha_arg == "auto") {
        cfg.alpha_policy = AlphaPolicy::Auto;
    } else {
        try {
            std::size_t used = 0;
            cfg.alpha_fixed = std::stod(alpha_arg, &used);
            if (used != alpha_arg.size()) throw std::invalid_argument(alpha_arg);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidConfig, "--alpha expects auto or a number");
        }
        cfg.alpha_policy = AlphaPolicy::Fixed;
    }

    const bool inexact = method == "inexact-newton-gadi" || method == "inexact-newton-adi";
    if (!eta_arg.empty()) {
        if (eta_arg == "k3") {
            cfg.eta_schedule = EtaSchedule::InverseCubic;
        } else if (eta_arg == "k4") {
            cfg.eta_schedule = EtaSchedule::InverseQuartic;
        } else if (eta_arg.rfind("const:", 0) == 0) {
            cfg.eta_schedule = EtaSchedule::Constant;
            try {
                cfg.eta_constant = std::stod(eta_arg.substr(6));
            } catch (const std::exception&) {
                throw Error(ErrorCode::InvalidConfig, "--eta const: expects a number");
            }
        } else {
            throw Error(ErrorCode::InvalidConfig, "--eta expects k3, k4 or const:V");
        }
    } else if (inexact) {
        cfg.eta_schedule = EtaSchedule::InverseCubic;
    }

    if (method == "newton-adi" || method == "inexact-newton-adi") {
        if (omega_set && omega != 0.0) {
            throw Error(ErrorCode::InvalidConfig, method + " requires omega = 0");
        }
        cfg.omega = 0.0;
    }

    SolveReport rep;
    if (method == "newton-gadi" || method == "newton-adi") {
        rep = newton_gadi_solve(p, cfg);
    } else if (inexact) {
        rep = inexact_newton_gadi_solve(p, cfg);
    } else if (method == "newton-exact") {
        rep = newton_exact_solve(p, cfg);
    } else {
        throw Error(ErrorCode::InvalidConfig, "unknown method " + method);
    }

    std::cout << "method            " << method << "\n"
              << "n                 " << p.n() << "\n"
              << "termination       " << termination_name(rep.termination) << "\n"
              << "outer iterations  " << rep.it_out << "\n"
              << "inner cumulative  " << rep.it_cumul << "\n"
              << "initial NRes      " << std::scientific << std::setprecision(4)
              << rep.initial_nres << "\n"
              << "final NRes        " << rep.final_nres << "\n"
              << "hermitian defect  " << rep.hermitian_defect_final << "\n"
              << "wall time         " << std::fixed << std::setprecision(3) << rep.wall_time
              << " s\n";

    if (!report_path.empty()) write_report_json(rep, method, report_path);
    if (!history_path.empty()) write_history_csv(rep, history_path);

    return rep.termination == Termination::Converged ? 0 : 2;
}

int run_bench(const std::string& spec_path, const std::string& out_dir) {
    const std::vector<BenchSpecEntry> entries = load_bench_spec(spec_path);
    std::filesystem::create_directories(out_dir);
    SolverConfig base;
    for (const BenchSpecEntry& e : entries) {
        const CareProblem p = gen_example(e.example_id, e.n);
        const std::vector<BenchRow> rows = bench_problem(p, base, e.omega_grid);
        const std::string name =
            "bench_ex" + std::to_string(e.example_id) + "_n" + std::to_string(p.n()) + ".csv";
        const std::string path = (std::filesystem::path(out_dir) / name).string();
        write_bench_csv(rows, path);
        std::cout << "example " << e.example_id << " n=" << p.n() << " -> " << path << "\n";
        for (const BenchRow& r : rows) {
            std::cout << "  " << std::left << std::setw(22) << r.method << " omega*="
                      << std::setw(6) << r.omega_star << " nres=" << std::scientific
                      << std::setprecision(3) << r.nres_final << " it_out=" << r.it_out
                      << " it_cumul=" << r.it_cumul << " (" << r.status << ")\n"
                      << std::defaultfloat;
        }
    }
    return 0;
}

int run_analyze(const ProblemArgs& pargs, double alpha, double omega) {
    const CareProblem p = resolve_problem(pargs);
    if (p.n() > 16) {
        throw Error(ErrorCode::TooLarge, "analyze is limited to n <= 16");
    }

    SolverConfig cfg;
    const SolveReport rep = newton_exact_solve(p, cfg);
    std::cout << "reference solve   " << termination_name(rep.termination) << " in "
              << rep.it_out << " steps, NRes " << std::scientific << std::setprecision(4)
              << rep.final_nres << "\n";

    const ComplexMatrix a_k = p.K * rep.solution - p.A;
    const double alpha_star = select_alpha(a_k);
    const IterationMatrix im = build_iteration_matrix(a_k, alpha, omega);

    std::cout << "closed-loop A_k at the solution\n"
              << "  alpha             " << alpha << "\n"
              << "  omega             " << omega << "\n"
              << "  rho(T(alpha))     " << im.rho_t_alpha << "\n"
              << "  rho(T(a,w))       " << im.rho_t << "\n"
              << "  norm bound        " << im.rho_bound << "\n"
              << "  Psi(alpha)        " << psi_envelope(a_k, alpha) << "\n"
              << "  alpha* = sigma_max " << alpha_star << "\n"
              << "  Psi(alpha*)       " << psi_envelope(a_k, alpha_star) << "\n";

    const AdiGadiComparison cmp = compare_adi_gadi(a_k, alpha, omega);
    const char* verdict = cmp.verdict == AdiGadiCase::GadiSlower    ? "GADI slower than ADI"
                          : cmp.verdict == AdiGadiCase::GadiFaster ? "GADI faster than ADI"
                                                                   : "indeterminate";
    std::cout << "  comparison        " << verdict << " (rho_adi " << cmp.rho_adi
              << ", rho_gadi " << cmp.rho_gadi << ")\n";
    if (cmp.omega_window > 0.0) {
        std::cout << "  omega window      (0, " << std::min(2.0, cmp.omega_window) << ")\n";
    }
    return rep.termination == Termination::Converged ? 0 : 2;
}

} // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Newton GADI solvers for the continuous-time algebraic Riccati equation"};
    app.require_subcommand(1);

    ProblemArgs solve_args;
    std::string method;
    double omega = 1.0;
    std::string alpha_arg = "auto";
    std::string eta_arg;
    std::string report_path, history_path;
    SolverConfig base;

    auto* solve_cmd = app.add_subcommand("solve", "Run one solver on one problem");
    add_problem_options(solve_cmd, solve_args);
    solve_cmd
        ->add_option("--method", method, "Solver variant")
        ->required()
        ->check(CLI::IsMember({"newton-gadi", "newton-adi", "inexact-newton-gadi",
                               "inexact-newton-adi", "newton-exact"}));
    auto* omega_opt = solve_cmd->add_option("--omega", omega, "Sweep weight in [0, 2)");
    solve_cmd->add_option("--alpha", alpha_arg, "Shift: auto or a positive number");
    solve_cmd->add_option("--eps-out", base.eps_out, "Outer tolerance");
    solve_cmd->add_option("--eps-inn", base.eps_inn, "Inner tolerance");
    solve_cmd->add_option("--lmax", base.l_max, "Inner sweep cap");
    solve_cmd->add_option("--kmax", base.k_max, "Outer step cap");
    solve_cmd->add_option("--eta", eta_arg, "Forcing schedule: k3, k4 or const:V");
    solve_cmd->add_flag("--symmetrize", base.symmetrize_iterates,
                        "Project iterates to Hermitian each sweep");
    solve_cmd->add_option("--report", report_path, "Write a JSON report");
    solve_cmd->add_option("--history", history_path, "Write a per-step CSV history");

    std::string bench_spec, bench_out;
    auto* bench_cmd = app.add_subcommand("bench", "Four-method comparison table");
    bench_cmd->add_option("--spec", bench_spec, "Bench spec JSON")->required();
    bench_cmd->add_option("--out", bench_out, "Output directory")->required();

    ProblemArgs an_args;
    double an_alpha = 0.0, an_omega = 0.0;
    auto* an_cmd = app.add_subcommand("analyze", "Spectral diagnostics of the lifted iteration");
    add_problem_options(an_cmd, an_args);
    an_cmd->add_option("--alpha", an_alpha, "Shift to analyze")->required();
    an_cmd->add_option("--omega", an_omega, "Sweep weight to analyze")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve_cmd->parsed()) {
            return run_solve(solve_args, method, omega, omega_opt->count() > 0, alpha_arg,
                             base, eta_arg, report_path, history_path);
        }
        if (bench_cmd->parsed()) {
            return run_bench(bench_spec, bench_out);
        }
        if (an_cmd->parsed()) {
            return run_analyze(an_args, an_alpha, an_omega);
        }
    } catch (const Error& e) {
        std::cerr << "error (" << error_code_name(e.code()) << "): " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

} // namespace carex
