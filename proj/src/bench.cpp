#include "recomb/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "recomb/elimination.hpp"
#include "recomb/errors.hpp"
#include "recomb/generator.hpp"
#include "recomb/io.hpp"
#include "recomb/solver.hpp"

namespace recomb {

namespace {

SolverConfig variant_config(const std::string& variant) {
    if (variant == "default") return SolverConfig{};
    if (variant == "strict") return SolverConfig::strict_paper();
    SolverConfig c;
    if (variant == "reduced") c.reduced_updates = true;
    else if (variant == "guard") c.guard = true;
    else throw ConfigError("unknown bench variant '" + variant + "' (expected default|strict|reduced|guard)");
    return c;
}

} // namespace

std::vector<BenchRow> run_benchmark(const BenchOptions& options) {
    if (options.sizes.empty()) throw ConfigError("bench: no sizes given");
    if (options.repetitions == 0) throw ConfigError("bench: repetitions must be positive");
    for (const auto& v : options.variants) variant_config(v);

    std::vector<BenchRow> rows;
    for (std::size_t n : options.sizes) {
        if (n == 0) throw ConfigError("bench: sizes must be positive");
        for (std::size_t rep = 0; rep < options.repetitions; ++rep) {
            const std::uint64_t seed = options.seed + rep;
            const LinearSystem<double> sys = random_system<double>(n, n, seed);
            const DenseRowOracle<double> oracle(sys.matrix, sys.rhs);

            for (const auto& variant : options.variants) {
                SolverConfig config = variant_config(variant);
                config.seed = seed;
                config.workers = options.workers;
                const SolveReport<double> r = solve<double>(oracle, config);
                BenchRow row;
                row.n = n;
                row.m = n;
                row.solver = "recombination";
                row.variant = variant;
                row.workers = options.workers;
                row.flops = r.flops.total();
                row.depth_flops = r.depth_flops;
                row.wall_time_ns = r.wall_time.count();
                row.residual = *std::max_element(r.row_residuals.begin(), r.row_residuals.end());
                row.status = r.solved() ? "solved" : "partial";
                rows.push_back(row);
            }

            if (options.include_elimination) {
                BenchRow row;
                row.n = n;
                row.m = n;
                row.solver = "elimination";
                row.variant = "partial-pivoting";
                row.workers = 1;
                const auto start = std::chrono::steady_clock::now();
                try {
                    const EliminationResult<double> g = gauss_solve<double>(sys);
                    row.wall_time_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                                           std::chrono::steady_clock::now() - start)
                                           .count();
                    row.flops = g.flops.total();
                    row.depth_flops = g.multiply_adds;
                    row.residual = residual_inf<double>(sys.matrix, sys.rhs, g.x);
                    row.status = "solved";
                } catch (const SingularMatrixError&) {
                    row.status = "singular";
                }
                rows.push_back(row);
            }
        }
    }
    return rows;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows, bool header) {
    if (header) out << kBenchCsvHeader << '\n';
    for (const BenchRow& r : rows) {
        out << r.n << ',' << r.m << ',' << r.solver << ',' << r.variant << ',' << r.workers << ',' << r.flops << ','
            << r.depth_flops << ',' << r.wall_time_ns << ',' << format_double(r.residual) << ',' << r.status << '\n';
    }
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("slope fit needs at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ConfigError("slope fit needs positive data");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) throw ConfigError("slope fit needs distinct x values");
    return sxy / sxx;
}

CrossoverResult find_crossover(std::size_t max_n, std::uint64_t seed) {
    if (max_n < 2) throw ConfigError("crossover scan needs max_n >= 2");
    CrossoverResult result;
    result.scanned_max = max_n;
    for (std::size_t n = 1;; ++n) {
        if (15.0 * n * n < static_cast<double>(n) * n * n / 3.0) {
            result.reference = n;
            break;
        }
    }

    // Walk down from the top so each answer is the start of the final run of wins.
    std::vector<char> depth_wins(max_n + 1, 0), total_wins(max_n + 1, 0);
    for (std::size_t n = 1; n <= max_n; ++n) {
        const LinearSystem<double> sys = random_system<double>(n, n, seed + n);
        const DenseRowOracle<double> oracle(sys.matrix, sys.rhs);
        SolverConfig config;
        config.seed = seed + n;
        const SolveReport<double> r = solve<double>(oracle, config);
        const EliminationResult<double> g = gauss_solve<double>(sys);
        depth_wins[n] = r.depth_flops < g.multiply_adds;
        total_wins[n] = r.flops.total() < g.flops.total();
        if (n == max_n) result.depth_constant = static_cast<double>(r.depth_flops) / (static_cast<double>(n) * n);
    }
    auto run_start = [&](const std::vector<char>& wins) -> std::optional<std::size_t> {
        if (!wins[max_n]) return std::nullopt;
        std::size_t n = max_n;
        while (n > 1 && wins[n - 1]) --n;
        return n;
    };
    result.depth_vs_multiply_add = run_start(depth_wins);
    result.total_vs_total = run_start(total_wins);
    return result;
}

} // namespace recomb
