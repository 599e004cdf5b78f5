#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <string>

#include "recomb/generator.hpp"
#include "recomb/io.hpp"
#include "recomb/report.hpp"

using namespace recomb;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("recomb_report_" + name)).string();
}

} // namespace

TEST_CASE("solved identity run writes a solved record") {
    const DenseRowOracle<double> oracle(DenseMatrix<double>::identity(2), {3, 4});
    const auto report = solve<double>(oracle, SolverConfig{});
    const std::string path = temp_path("identity.json");
    write_report(report, path);
    const ReportRecord r = read_report(path);
    CHECK(r.status == "solved");
    CHECK(r.max_residual <= 1e-13);
    CHECK(r.completed_steps == 2);
    REQUIRE(r.vectors.size() == 1);
    CHECK(std::abs(r.vectors[0][0] - Complex(3, 0)) < 1e-12);
    std::remove(path.c_str());
}

TEST_CASE("record round trip preserves every field") {
    const auto sys = random_system<double>(6, 9, 4);
    const DenseRowOracle<double> oracle(sys.matrix, sys.rhs);
    SolverConfig c;
    c.seed = 1234567890123ULL;
    c.distribution = DistributionSpec::uniform(-2, 3);
    c.guard = true;
    c.workers = 2;
    const auto report = solve<double>(oracle, c);
    for (bool full : {false, true}) {
        const ReportRecord a = make_record(report, full);
        const ReportRecord b = record_from_json(record_to_json(a, full));
        CHECK(a == b);
        CHECK(b.config == c);
        CHECK(b.vectors.size() == (full ? report.iterates.size() : 1));
    }
}

TEST_CASE("complex records store pairs") {
    const auto sys = random_system<Complex>(3, 3, 8);
    const DenseRowOracle<Complex> oracle(sys.matrix, sys.rhs);
    const auto report = solve<Complex>(oracle, SolverConfig{});
    const ReportRecord a = make_record(report, false);
    const std::string text = record_to_json(a);
    CHECK(text.find("\"field\": \"complex\"") != std::string::npos);
    CHECK(record_from_json(text) == a);
}

TEST_CASE("partial records carry completed steps and the failure site") {
    SolveReport<double> report;
    report.status = SolveStatus::partial;
    report.completed_steps = 3;
    report.failure = FailureKind::degenerate;
    report.step_failure = StepFailure{3, 1, {0, 2}, 0.0};
    report.iterates = IterateSet<double>(3, 2, 3);
    report.rows = 5;
    report.dim = 2;
    const ReportRecord a = make_record(report, false);
    const std::string text = record_to_json(a);
    CHECK(text.find("\"status\": \"partial\"") != std::string::npos);
    CHECK(text.find("\"completed_steps\": 3") != std::string::npos);
    const ReportRecord b = record_from_json(text);
    CHECK(b == a);
    REQUIRE(b.step_failure.has_value());
    CHECK(b.step_failure->row == 3);
}

TEST_CASE("NaN survives as null") {
    ReportRecord a = make_record(SolveReport<double>{}, false);
    a.max_residual = std::nan("");
    const ReportRecord b = record_from_json(record_to_json(a));
    CHECK(std::isnan(b.max_residual));
}

TEST_CASE("malformed reports are I/O errors") {
    CHECK_THROWS_AS(record_from_json("{"), IoError);
    CHECK_THROWS_AS(record_from_json("{\"format\": \"other\"}"), IoError);
    CHECK_THROWS_AS(record_from_json("{\"format\": \"recomb-report\", \"version\": 1}"), IoError);
    CHECK_THROWS_AS(read_report(temp_path("missing.json")), IoError);
}

TEST_CASE("unwritable path reports the path") {
    const DenseRowOracle<double> oracle(DenseMatrix<double>::identity(1), {1});
    const auto report = solve<double>(oracle, SolverConfig{});
    try {
        write_report(report, "/nonexistent-dir/report.json");
        FAIL("expected an error");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/nonexistent-dir/report.json") != std::string::npos);
    }
}
