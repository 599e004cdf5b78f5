#include "doctest.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "recomb/bench.hpp"
#include "recomb/errors.hpp"

using namespace recomb;

TEST_CASE("slope of an exact power law") {
    const std::vector<double> x{2, 4, 8, 16}, y{24, 192, 1536, 12288};
    CHECK(fit_loglog_slope(x, y) == doctest::Approx(3.0).epsilon(1e-12));
    const std::vector<double> one{1};
    CHECK_THROWS_AS(fit_loglog_slope(one, one), ConfigError);
    const std::vector<double> same{2, 2}, vals{1, 3};
    CHECK_THROWS_AS(fit_loglog_slope(same, vals), ConfigError);
}

TEST_CASE("benchmark rows for both solvers") {
    BenchOptions opt;
    opt.sizes = {6, 12};
    opt.repetitions = 2;
    opt.variants = {"default", "strict"};
    const auto rows = run_benchmark(opt);
    CHECK(rows.size() == 2 * 2 * 3);
    std::size_t elim = 0;
    for (const auto& r : rows) {
        CHECK(r.flops > 0);
        if (r.solver == "elimination") ++elim;
    }
    CHECK(elim == 4);
    std::ostringstream csv;
    write_bench_csv(csv, rows);
    std::size_t lines = 0;
    for (char ch : csv.str()) lines += ch == '\n';
    CHECK(lines == rows.size() + 1);
}

TEST_CASE("reference crossover point") {
    const auto c = find_crossover(8, 1);
    CHECK(c.reference == 46);
    CHECK(c.scanned_max == 8);
}
