#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace recomb {

// One CSV line of the benchmark. `solver` is "recombination" or "elimination".
struct BenchRow {
    std::size_t n = 0;
    std::size_t m = 0;
    std::string solver;
    std::string variant;
    std::size_t workers = 1;
    std::uint64_t flops = 0;
    // Recombination: flops along the critical path with n+1 processors.
    // Elimination: multiply-add pairs.
    std::uint64_t depth_flops = 0;
    std::int64_t wall_time_ns = 0;
    double residual = 0.0;
    std::string status;
};

struct BenchOptions {
    std::vector<std::size_t> sizes{32, 64, 128, 256};
    std::size_t repetitions = 1;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    // Any of: default, strict, reduced, guard.
    std::vector<std::string> variants{"default"};
    bool include_elimination = true;
};

std::vector<BenchRow> run_benchmark(const BenchOptions& options);

inline constexpr const char* kBenchCsvHeader =
    "n,m,solver,variant,workers,flops,depth_flops,wall_time_ns,residual,status";

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows, bool header = true);

// Least-squares slope of log y against log x.
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

struct CrossoverResult {
    // Smallest n from which the recombination critical path (n+1 processors)
    // stays below elimination's multiply-add count across the scan.
    std::optional<std::size_t> depth_vs_multiply_add;
    // Same comparison with raw flop totals on both sides.
    std::optional<std::size_t> total_vs_total;
    // Smallest n with 15 n^2 < n^3 / 3.
    std::size_t reference = 0;
    std::size_t scanned_max = 0;
    // Measured leading constant: recombination depth / n^2 at the largest n.
    double depth_constant = 0.0;
};

CrossoverResult find_crossover(std::size_t max_n, std::uint64_t seed);

} // namespace recomb
