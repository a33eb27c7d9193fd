#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "carex/bench.hpp"
#include "carex/care.hpp"
#include "carex/cli.hpp"
#include "carex/errors.hpp"
#include "carex/examples.hpp"
#include "carex/matrix.hpp"
#include "carex/norms.hpp"
#include "carex/problem_io.hpp"
#include "support.hpp"

using namespace carex;
using testsupport::max_abs_diff;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;

    TempDir() {
        path = fs::temp_directory_path() / "carex_harness_tests";
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }

    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

template <typename Fn>
ErrorCode thrown_code(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    throw std::logic_error("expected a carex::Error");
}

// Runs the CLI in-process with captured standard streams, so the tests can
// assert on the text without spamming the doctest output.
int cli(std::initializer_list<const char*> args, std::string* text = nullptr) {
    std::vector<std::string> storage{"carex"};
    for (const char* a : args) storage.emplace_back(a);
    std::vector<char*> argv;
    argv.reserve(storage.size());
    for (std::string& s : storage) argv.push_back(s.data());

    std::ostringstream sink;
    std::streambuf* old_out = std::cout.rdbuf(sink.rdbuf());
    std::streambuf* old_err = std::cerr.rdbuf(sink.rdbuf());
    int rc = -1;
    try {
        rc = run_cli(static_cast<int>(argv.size()), argv.data());
    } catch (...) {
        std::cout.rdbuf(old_out);
        std::cerr.rdbuf(old_err);
        throw;
    }
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    if (text) *text = sink.str();
    return rc;
}

const char* kValidTwoByTwo =
    R"({"n": 2,
        "A": [[[-1.0, 0.0], [0.5, 0.25]], [[0.0, 0.0], [-2.0, 0.0]]],
        "K": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]],
        "Q": [[[2.0, 0.0], [0.0, 1.0]], [[0.0, -1.0], [3.0, 0.0]]]})";

} // namespace

TEST_CASE("problem files round trip bit for bit") {
    TempDir tmp;
    int case_idx = 0;
    for (const CareProblem& p :
         {gen_example(1), gen_example(2), gen_example(3, 5)}) {
        const std::string path = tmp.file("case" + std::to_string(case_idx++) + ".json");
        save_problem(p, path);
        const CareProblem back = load_problem(path);
        REQUIRE(back.n() == p.n());
        CHECK(max_abs_diff(back.A, p.A) == 0.0);
        CHECK(max_abs_diff(back.K, p.K) == 0.0);
        CHECK(max_abs_diff(back.Q, p.Q) == 0.0);
    }
}

TEST_CASE("loader reports precise errors") {
    TempDir tmp;

    SUBCASE("missing file") {
        CHECK(thrown_code([&] { load_problem(tmp.file("nope.json")); }) == ErrorCode::ParseError);
    }

    SUBCASE("truncated json") {
        const std::string path = tmp.file("trunc.json");
        write_text(path, R"({"n": 2, "A": [[)");
        CHECK(thrown_code([&] { load_problem(path); }) == ErrorCode::ParseError);
    }

    SUBCASE("missing field") {
        const std::string path = tmp.file("nofield.json");
        write_text(path, R"({"n": 2, "A": [], "K": []})");
        CHECK(thrown_code([&] { load_problem(path); }) == ErrorCode::ParseError);
    }

    SUBCASE("row of the wrong length") {
        const std::string path = tmp.file("shape.json");
        std::string text = kValidTwoByTwo;
        text.replace(text.find("[[-1.0, 0.0], [0.5, 0.25]]"), 26, "[[-1.0, 0.0]]");
        write_text(path, text);
        CHECK(thrown_code([&] { load_problem(path); }) == ErrorCode::ShapeError);
    }

    SUBCASE("scalar entry instead of a pair") {
        const std::string path = tmp.file("pair.json");
        std::string text = kValidTwoByTwo;
        text.replace(text.find("[-1.0, 0.0]"), 11, "-1.0");
        write_text(path, text);
        CHECK(thrown_code([&] { load_problem(path); }) == ErrorCode::ParseError);
    }

    SUBCASE("non hermitian K names the offending pair") {
        const std::string path = tmp.file("herm.json");
        std::string text = kValidTwoByTwo;
        text.replace(text.find(R"("K": [[[1.0, 0.0], [0.0, 0.0]])"), 30,
                     R"("K": [[[1.0, 0.0], [0.7, 0.0]])");
        write_text(path, text);
        try {
            load_problem(path);
            FAIL("expected a carex::Error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::HermitianViolation);
            CHECK(std::string(e.what()).find("K") != std::string::npos);
            CHECK(std::string(e.what()).find("(0,1)") != std::string::npos);
        }
    }

    SUBCASE("a valid file loads") {
        const std::string path = tmp.file("ok.json");
        write_text(path, kValidTwoByTwo);
        const CareProblem p = load_problem(path);
        CHECK(p.n() == 2);
        CHECK(p.A(0, 1) == cxd(0.5, 0.25));
        CHECK(p.Q(0, 1) == cxd(0.0, 1.0));
    }
}

TEST_CASE("first example generator hits the published data") {
    const CareProblem p = gen_example(1);
    REQUIRE(p.n() == 3);
    CHECK(p.A(0, 0) == cxd(-2.0, 10.0));
    CHECK(p.A(1, 1) == cxd(-1.0, 10.0));
    CHECK(p.A(2, 2) == cxd(0.0, -2.0));
    CHECK(p.A(0, 2) == cxd(-1.0, 0.0));

    // K = B R^{-1} B^T consists of exact dyadic fractions
    CHECK(p.K(0, 0) == cxd(4.25, 0.0));
    CHECK(p.K(0, 1) == cxd(0.25, 0.0));
    CHECK(p.K(0, 2) == cxd(-1.5, 0.0));
    CHECK(p.K(1, 1) == cxd(1.25, 0.0));
    CHECK(p.K(1, 2) == cxd(0.5, 0.0));
    CHECK(p.K(2, 2) == cxd(2.0, 0.0));

    CHECK(p.Q(0, 0) == cxd(0.0, 0.0));
    CHECK(p.Q(1, 1) == cxd(1.0, 0.0));
    CHECK(p.Q(2, 2) == cxd(5.0, 0.0));

    CHECK(hermitian_defect(p.K) == 0.0);
    CHECK(hermitian_defect(p.Q) == 0.0);
    CHECK(validate_problem(p).flags.empty());
}

TEST_CASE("second example generator composes the weighted dyad") {
    const CareProblem p = gen_example(2);
    REQUIRE(p.n() == 4);

    // A is the skew shift pattern
    CHECK(max_abs_diff(transpose(p.A), -1.0 * p.A) == 0.0);
    CHECK(p.A(1, 0) == cxd(1.0, 0.0));
    CHECK(p.A(0, 1) == cxd(-1.0, 0.0));

    // K = (1e-3 B)(1e-3 B)^T, rebuilt here entry by entry
    const double b[4][4] = {{3, -50, 1, 2}, {1, -3, -2, 1}, {-3, 1, 3, 4}, {3, -1, -4, 3}};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < 4; ++k) sum += (1e-3 * b[i][k]) * (1e-3 * b[j][k]);
            CHECK(std::abs(p.K(i, j) - cxd(sum, 0.0)) <= 1e-18);
        }
    }
    CHECK(hermitian_defect(p.K) == 0.0);

    CHECK(p.Q(1, 1) == cxd(0.0111, 0.0));
    CHECK(p.Q(2, 2) == cxd(1.0006, 0.0));
    CHECK(p.Q(2, 3) == cxd(0.0200, 0.0));
    CHECK(hermitian_defect(p.Q) == 0.0);
}

TEST_CASE("third example generator scales with n") {
    const CareProblem p = gen_example(3, 4);
    REQUIRE(p.n() == 4);
    const double r = 1.0 / 10.0;
    for (std::size_t i = 0; i < 4; ++i) CHECK(p.A(i, i) == cxd(-4.0, 8.0));
    CHECK(p.A(1, 0) == cxd(-1.0 - r, 0.0));
    CHECK(p.A(0, 1) == cxd(-1.0 + r, 0.0));
    CHECK(p.A(0, 2) == cxd(0.0, 0.0));

    // K = I + e_1 e_1^T
    CHECK(p.K(0, 0) == cxd(2.0, 0.0));
    for (std::size_t i = 1; i < 4; ++i) CHECK(p.K(i, i) == cxd(1.0, 0.0));
    CHECK(p.K(0, 1) == cxd(0.0, 0.0));

    // Q = c^T c with a single weighted corner entry
    const double c0 = 1.0 / std::sqrt(10.0);
    CHECK(p.Q(0, 0) == cxd(c0 * c0, 0.0));
    CHECK(std::abs(p.Q(0, 0).real() - 0.1) <= 1e-16);
    CHECK(p.Q(1, 1) == cxd(0.0, 0.0));

    const CareProblem wide = gen_example(3, 9);
    CHECK(wide.A(1, 0) == cxd(-1.0 - 1.0 / 20.0, 0.0));

    CHECK(thrown_code([] { gen_example(0); }) == ErrorCode::BadId);
    CHECK(thrown_code([] { gen_example(4); }) == ErrorCode::BadId);
    CHECK(thrown_code([] { gen_example(3, 1); }) == ErrorCode::BadId);
}

TEST_CASE("solve subcommand writes reports and histories") {
    TempDir tmp;
    const std::string report = tmp.file("report.json");
    const std::string history = tmp.file("history.csv");

    std::string text;
    const int rc = cli({"solve", "--example", "1", "--method", "newton-gadi", "--omega", "1.0",
                        "--report", report.c_str(), "--history", history.c_str()},
                       &text);
    REQUIRE(rc == 0);
    CHECK(text.find("termination       converged") != std::string::npos);

    nlohmann::json j = nlohmann::json::parse(read_text(report));
    CHECK(j["method"] == "newton-gadi");
    CHECK(j["termination"] == "converged");
    CHECK(j["final_nres"].get<double>() < 1e-8);
    CHECK(j["initial_nres"].get<double>() > j["final_nres"].get<double>());
    const std::size_t it_out = j["it_out"].get<std::size_t>();
    CHECK(j["nres_history"].size() == it_out);
    CHECK(j["inner_counts"].size() == it_out);
    CHECK(j["solution"].size() == 3);

    const std::vector<std::string> lines = read_lines(history);
    REQUIRE(lines.size() == it_out + 1);
    CHECK(lines[0] == "k,nres,inner_steps,alpha,lyap_residual");
    CHECK(lines[1].rfind("1,", 0) == 0);

    SUBCASE("a second run is identical modulo timing") {
        const std::string report2 = tmp.file("report2.json");
        const std::string history2 = tmp.file("history2.csv");
        REQUIRE(cli({"solve", "--example", "1", "--method", "newton-gadi", "--omega", "1.0",
                     "--report", report2.c_str(), "--history", history2.c_str()}) == 0);
        nlohmann::json a = nlohmann::json::parse(read_text(report));
        nlohmann::json b = nlohmann::json::parse(read_text(report2));
        a.erase("wall_time");
        b.erase("wall_time");
        CHECK(a == b);
        CHECK(read_text(history) == read_text(history2));
    }
}

TEST_CASE("solve subcommand covers the other methods") {
    SUBCASE("newton exact") {
        CHECK(cli({"solve", "--example", "2", "--method", "newton-exact"}) == 0);
    }

    SUBCASE("classical adi accepts only omega zero") {
        CHECK(cli({"solve", "--example", "1", "--method", "newton-adi"}) == 0);
        CHECK(cli({"solve", "--example", "1", "--method", "newton-adi", "--omega", "0.0"}) == 0);
        std::string text;
        CHECK(cli({"solve", "--example", "1", "--method", "newton-adi", "--omega", "0.5"},
                  &text) == 1);
        CHECK(text.find("InvalidConfig") != std::string::npos);
    }

    SUBCASE("inexact with the quartic schedule") {
        CHECK(cli({"solve", "--example", "1", "--method", "inexact-newton-gadi", "--eta",
                   "k4"}) == 0);
    }

    SUBCASE("fixed shift") {
        CHECK(cli({"solve", "--example", "1", "--method", "newton-gadi", "--alpha", "20.0"}) ==
              0);
        CHECK(cli({"solve", "--example", "1", "--method", "newton-gadi", "--alpha", "bogus"}) ==
              1);
    }

    SUBCASE("iteration cap exits with the cap code") {
        TempDir tmp;
        const std::string report = tmp.file("capped.json");
        CHECK(cli({"solve", "--example", "1", "--method", "newton-gadi", "--kmax", "1",
                   "--report", report.c_str()}) == 2);
        nlohmann::json j = nlohmann::json::parse(read_text(report));
        CHECK(j["termination"] == "outer_cap");
    }

    SUBCASE("usage errors") {
        CHECK(cli({"solve", "--example", "1", "--method", "no-such-method"}) == 1);
        CHECK(cli({"solve", "--method", "newton-gadi"}) == 1);            // no problem source
        CHECK(cli({"solve", "--example", "9", "--method", "newton-gadi"}) == 1);
        CHECK(cli({"solve", "--problem", "/no/such/file.json", "--method", "newton-gadi"}) ==
              1);
        CHECK(cli({}) == 1);
    }
}

TEST_CASE("analyze subcommand prints the spectral table") {
    std::string text;
    const int rc = cli({"analyze", "--example", "1", "--alpha", "12.0", "--omega", "1.0"}, &text);
    REQUIRE(rc == 0);
    CHECK(text.find("rho(T(alpha))") != std::string::npos);
    CHECK(text.find("alpha* = sigma_max") != std::string::npos);
    CHECK(text.find("comparison") != std::string::npos);

    CHECK(cli({"analyze", "--example", "3", "--n", "64", "--alpha", "1.0", "--omega", "0.5"}) ==
          1); // n > 16 refused
}

TEST_CASE("bench api compares the four methods") {
    const CareProblem p = gen_example(1);
    const std::vector<double> grid{0.0, 1.0};
    const std::vector<BenchRow> rows = bench_problem(p, SolverConfig{}, grid);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].method == "newton-adi");
    CHECK(rows[1].method == "newton-gadi");
    CHECK(rows[2].method == "inexact-newton-adi");
    CHECK(rows[3].method == "inexact-newton-gadi");
    for (const BenchRow& r : rows) {
        CHECK(r.status == "converged");
        CHECK(r.nres_final < 1e-8);
        CHECK(r.it_out > 0);
        CHECK(r.it_cumul >= r.it_out);
        CHECK(r.it_ave == doctest::Approx(static_cast<double>(r.it_cumul) /
                                          static_cast<double>(r.it_out)));
    }
    CHECK(rows[0].omega_star == 0.0);
    CHECK(rows[2].omega_star == 0.0);

    // the truncated inner loops must not cost more cumulative sweeps
    CHECK(rows[3].it_cumul <= rows[0].it_cumul);
    CHECK(rows[3].it_cumul <= rows[1].it_cumul);
    CHECK(rows[3].it_cumul <= rows[2].it_cumul);

    SUBCASE("csv export") {
        TempDir tmp;
        const std::string path = tmp.file("bench.csv");
        write_bench_csv(rows, path);
        const std::vector<std::string> lines = read_lines(path);
        REQUIRE(lines.size() == 5);
        CHECK(lines[0] == "method,omega_star,nres_final,it_out,it_ave,it_cumul,cpu_seconds,status");
        CHECK(lines[1].rfind("newton-adi,0,", 0) == 0);
        CHECK(lines[1].find("converged") != std::string::npos);

        write_bench_csv({}, path);
        CHECK(read_lines(path).size() == 1);
    }
}

TEST_CASE("bench spec files parse and drive the subcommand") {
    TempDir tmp;
    const std::string spec = tmp.file("spec.json");
    write_text(spec, R"({"problems": [{"example": 1, "omega_grid": [0.0, 1.0]},
                                      {"example": 3, "n": 8}]})");

    const std::vector<BenchSpecEntry> entries = load_bench_spec(spec);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].example_id == 1);
    CHECK(entries[0].omega_grid == std::vector<double>{0.0, 1.0});
    CHECK(entries[1].example_id == 3);
    CHECK(entries[1].n == 8);
    CHECK(entries[1].omega_grid.empty());

    const std::string bad = tmp.file("bad.json");
    write_text(bad, R"({"problems": [{"n": 4}]})");
    CHECK(thrown_code([&] { load_bench_spec(bad); }) == ErrorCode::ParseError);

    SUBCASE("cli bench writes one table per problem") {
        const std::string small_spec = tmp.file("small.json");
        write_text(small_spec, R"({"problems": [{"example": 1, "omega_grid": [0.0, 1.0]}]})");
        const std::string out_dir = tmp.file("bench_out");
        std::string text;
        REQUIRE(cli({"bench", "--spec", small_spec.c_str(), "--out", out_dir.c_str()}, &text) ==
                0);
        const std::string csv = (fs::path(out_dir) / "bench_ex1_n3.csv").string();
        REQUIRE(fs::exists(csv));
        const std::vector<std::string> lines = read_lines(csv);
        REQUIRE(lines.size() == 5);
        CHECK(text.find("newton-gadi") != std::string::npos);
    }
}
