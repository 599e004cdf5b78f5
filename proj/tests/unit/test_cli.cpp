#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "recomb/cli.hpp"
#include "recomb/io.hpp"
#include "recomb/report.hpp"

using namespace recomb;

namespace {

const std::string kDir = RECOMB_FIXTURE_DIR;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "recomb");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("recomb_cli_" + name)).string();
}

double printed_residual(const std::string& out) {
    std::smatch m;
    REQUIRE(std::regex_search(out, m, std::regex("max residual: ([0-9.e+-]+)")));
    return std::stod(m[1]);
}

} // namespace

TEST_CASE("random system solves and exits 0") {
    const Run r = run({"solve", "--random", "16", "--seed", "7"});
    CHECK(r.code == kExitSolved);
    CHECK(r.out.find("status: solved") != std::string::npos);
    CHECK(printed_residual(r.out) <= 1e-8);
}

TEST_CASE("identity system from files") {
    const Run r = run({"solve", "-A", kDir + "/identity2_array.mtx", "-b", kDir + "/rhs_3_4.txt", "--print-solution"});
    CHECK(r.code == kExitSolved);
    std::smatch m;
    REQUIRE(std::regex_search(r.out, m, std::regex("solution: ([^ ]+) ([^ \\n]+)")));
    CHECK(std::stod(m[1]) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(std::stod(m[2]) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("single unknown in strict mode runs") {
    const Run r = run({"solve", "--random", "1", "--strict-paper"});
    CHECK(r.code == kExitSolved);
}

TEST_CASE("conflicting and malformed flags exit 1 before any compute") {
    CHECK(run({"solve", "--random", "8", "--strict-paper", "--guard"}).code == kExitUsage);
    CHECK(run({"solve", "--random", "8", "--strict-paper", "--retries", "2"}).code == kExitUsage);
    CHECK(run({"solve", "--random", "8", "--pairing", "zigzag"}).code == kExitUsage);
    CHECK(run({"solve"}).code == kExitUsage);
    CHECK(run({"solve", "--random", "4", "-A", kDir + "/identity2_array.mtx"}).code == kExitUsage);
    CHECK(run({"solve", "-A", kDir + "/bad_index.mtx", "-b", kDir + "/rhs_3_4.txt"}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    const Run e = run({"solve", "-A", kDir + "/bad_index.mtx", "-b", kDir + "/rhs_3_4.txt"});
    CHECK(e.err.find("bad_index.mtx:4") != std::string::npos);
}

TEST_CASE("help exits 0") { CHECK(run({"--help"}).code == 0); }

TEST_CASE("seed determines the report except for wall time") {
    const std::string a = temp_path("a.json"), b = temp_path("b.json");
    REQUIRE(run({"solve", "--random", "12", "--seed", "5", "-o", a, "--full-iterates"}).code == 0);
    REQUIRE(run({"solve", "--random", "12", "--seed", "5", "-o", b, "--full-iterates"}).code == 0);
    const std::regex wall("\"wall_time_ns\": [0-9]+");
    CHECK(std::regex_replace(read_text_file(a), wall, "") == std::regex_replace(read_text_file(b), wall, ""));
    std::remove(a.c_str());
    std::remove(b.c_str());
}

TEST_CASE("parallel flag does not change the numbers") {
    const std::string a = temp_path("p1.json"), b = temp_path("p4.json");
    REQUIRE(run({"solve", "--random", "20", "--seed", "3", "-o", a, "--full-iterates"}).code == 0);
    REQUIRE(run({"solve", "--random", "20", "--seed", "3", "-o", b, "--full-iterates", "--parallel", "4"}).code == 0);
    const ReportRecord ra = read_report(a), rb = read_report(b);
    CHECK(ra.vectors == rb.vectors);
    CHECK(ra.flops == rb.flops);
    std::remove(a.c_str());
    std::remove(b.c_str());
}

TEST_CASE("strict and default flop counts agree at equal L") {
    const Run strict = run({"solve", "--random", "24", "--seed", "9", "--strict-paper"});
    const Run equal_l = run({"solve", "--random", "24", "--seed", "9", "--iterates", "25"});
    std::smatch m1, m2;
    const std::regex flops("flops: ([0-9]+)");
    REQUIRE(std::regex_search(strict.out, m1, flops));
    REQUIRE(std::regex_search(equal_l.out, m2, flops));
    const double f1 = std::stod(m1[1]), f2 = std::stod(m2[1]);
    CHECK(std::abs(f1 - f2) <= 0.01 * f2);
}

TEST_CASE("check accepts a solved report and rejects a corrupted one") {
    const std::string path = temp_path("check.json");
    REQUIRE(run({"solve", "-A", kDir + "/identity2_array.mtx", "-b", kDir + "/rhs_3_4.txt", "-o", path}).code == 0);
    const Run ok = run({"check", "--report", path, "-A", kDir + "/identity2_array.mtx", "-b", kDir + "/rhs_3_4.txt"});
    CHECK(ok.code == 0);

    std::string text = read_text_file(path);
    const std::regex solution("\"solution\": \\[\\s*([-0-9.e+]+),");
    text = std::regex_replace(text, solution, "\"solution\": [\n    3.5,");
    write_text_file(path, text);
    const Run bad = run({"check", "--report", path, "-A", kDir + "/identity2_array.mtx", "-b", kDir + "/rhs_3_4.txt"});
    CHECK(bad.code == kExitPartial);
    CHECK(bad.err.find("violated row 1") != std::string::npos);

    const Run mismatch = run({"check", "--report", path, "-A", kDir + "/symmetric_array.mtx", "-b", kDir + "/rhs_3_4.txt"});
    CHECK(mismatch.code == kExitUsage);
    std::remove(path.c_str());
}

TEST_CASE("check of a random-system report") {
    const std::string path = temp_path("random.json");
    REQUIRE(run({"solve", "--random", "10", "6", "--seed", "4", "-o", path, "--full-iterates"}).code == 0);
    CHECK(run({"check", "--report", path, "--random", "10", "6"}).code == 0);
    CHECK(run({"check", "--report", path, "--random", "10", "6", "--seed", "5"}).code == kExitPartial);
    std::remove(path.c_str());
}

TEST_CASE("check of a partial report verifies only its prefix") {
    // Row 3 breaks the claimed tolerance, rows 1-2 hold.
    const std::string sys_path = temp_path("partial_sys.txt"), path = temp_path("partial.json");
    write_text_file(sys_path, "3 3\n1 0 0 1\n0 1 0 2\n0 0 1 3\n");
    ReportRecord r;
    r.status = "partial";
    r.completed_steps = 2;
    r.failure = "degenerate";
    r.field = "real";
    r.rows = 3;
    r.dim = 3;
    r.iterate_count = 1;
    r.vectors = {{{1, 0}, {2, 0}, {7, 0}}};
    write_text_file(path, record_to_json(r));
    CHECK(run({"check", "--report", path, "-A", sys_path}).code == 0);
    r.status = "solved";
    r.completed_steps = 3;
    write_text_file(path, record_to_json(r));
    const Run full = run({"check", "--report", path, "-A", sys_path});
    CHECK(full.code == kExitPartial);
    CHECK(full.err.find("violated row 3") != std::string::npos);
    std::remove(sys_path.c_str());
    std::remove(path.c_str());
}

TEST_CASE("complex random solve") {
    const Run r = run({"solve", "--random", "8", "--complex", "--seed", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("complex") != std::string::npos);
}

TEST_CASE("bench writes CSV and fits") {
    const Run r = run({"bench", "--sizes", "8,16,32", "--crossover-max", "0", "--variants", "default,guard"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("n,m,solver,variant,workers,flops,depth_flops,wall_time_ns,residual,status", 0) == 0);
    CHECK(r.out.find("# slope recombination/default") != std::string::npos);
    CHECK(r.out.find("# slope recombination/guard") != std::string::npos);
    CHECK(r.out.find("# slope elimination/partial-pivoting") != std::string::npos);
    CHECK(run({"bench", "--variants", "bogus"}).code == kExitUsage);
}
