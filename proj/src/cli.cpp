#include "recomb/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "recomb/bench.hpp"
#include "recomb/generator.hpp"
#include "recomb/io.hpp"
#include "recomb/report.hpp"
#include "recomb/solver.hpp"

namespace recomb {

namespace {

struct UsageError : Error {
    using Error::Error;
};

struct SolverFlags {
    std::uint64_t seed = 1;
    std::optional<std::size_t> iterates;
    std::string pairing = "balanced";
    std::string distribution = "gaussian";
    double rec_tol = kDefaultRecTolerance;
    bool guard = false;
    double threshold = 1e-8;
    double respread_c = 2.0;
    bool reduced = false;
    std::optional<std::size_t> retries;
    std::size_t workers = 1;
    bool strict = false;
    double feas_scale = kDefaultFeasScale;
};

struct SystemFlags {
    std::optional<std::string> matrix;
    std::optional<std::string> rhs;
    std::vector<std::size_t> random;
    double cond = 1.0;
    std::optional<std::uint64_t> system_seed;
    bool complex = false;
};

void add_solver_flags(CLI::App* app, SolverFlags& f) {
    app->add_option("--seed", f.seed, "Seed for the starting vectors and pair choices")->capture_default_str();
    app->add_option("--iterates,-L", f.iterates, "Number of iterates L (default 2(n+1); n+1 in strict mode)");
    app->add_option("--pairing", f.pairing, "Pair rule: balanced, cycle or uniform")->capture_default_str();
    app->add_option("--distribution", f.distribution, "Starting law: gaussian, uniform or sphere")
        ->capture_default_str();
    app->add_option("--rec-tol", f.rec_tol, "Relative degeneracy tolerance of a recombination")
        ->capture_default_str();
    app->add_flag("--guard", f.guard, "Enable the degeneracy guard (respread or pull in pairs)");
    app->add_option("--degeneracy-threshold", f.threshold, "Relative distance below which a pair is respread")
        ->capture_default_str();
    app->add_option("--respread-c", f.respread_c, "Respread factor (> 1)")->capture_default_str();
    app->add_flag("--reduced", f.reduced, "Update only max(2, n+1-k) vectors in step k");
    app->add_option("--retries", f.retries, "Redraws allowed for a degenerate pair (default 3)");
    app->add_option("--parallel", f.workers, "Worker threads")->capture_default_str();
    app->add_flag("--strict-paper", f.strict, "L = n+1, no retries, no guard");
    app->add_option("--feas-scale", f.feas_scale, "Residual budget per step, relative to max(1, |b|_inf)")
        ->capture_default_str();
}

void add_system_flags(CLI::App* app, SystemFlags& f) {
    auto* a = app->add_option("-A,--matrix", f.matrix, "Matrix file (Matrix Market or dense text)");
    app->add_option("-b,--rhs", f.rhs, "Right-hand side file (one value per line)");
    auto* r = app->add_option("--random", f.random, "Random Gaussian system: n [m]")->expected(1, 2);
    app->add_option("--cond", f.cond, "Target condition number of the random system (row scaling)")
        ->capture_default_str();
    app->add_option("--system-seed", f.system_seed, "Seed of the random system (default: --seed)");
    app->add_flag("--complex", f.complex, "Random system with complex entries");
    a->excludes(r);
}

SolverConfig build_config(const SolverFlags& f) {
    if (f.strict && f.guard) throw UsageError("--strict-paper conflicts with --guard");
    if (f.strict && f.retries) throw UsageError("--strict-paper conflicts with --retries");
    if (f.strict && f.iterates) throw UsageError("--strict-paper fixes L = n+1; drop --iterates");
    SolverConfig c = f.strict ? SolverConfig::strict_paper() : SolverConfig{};
    c.seed = f.seed;
    c.iterates = f.iterates.value_or(0);
    c.pairing = parse_pairing_rule(f.pairing);
    c.distribution = DistributionSpec::parse(f.distribution);
    c.rec_tol = f.rec_tol;
    c.guard = f.guard;
    c.degeneracy_dist_threshold = f.threshold;
    c.respread_c = f.respread_c;
    c.reduced_updates = f.reduced;
    if (f.retries) c.max_retries_per_step = *f.retries;
    c.workers = f.workers;
    c.feas_scale = f.feas_scale;
    return c;
}

AnySystem load_system(const SystemFlags& f, std::uint64_t default_seed) {
    if (!f.random.empty()) {
        if (f.rhs) throw UsageError("--rhs cannot be combined with --random");
        const std::size_t n = f.random[0];
        const std::size_t m = f.random.size() > 1 ? f.random[1] : n;
        if (n == 0 || m == 0) throw UsageError("--random dimensions must be positive");
        const SystemSpec spec{m, n, f.system_seed.value_or(default_seed), f.cond};
        if (f.complex) return random_system<Complex>(spec);
        return random_system<double>(spec);
    }
    if (!f.matrix) throw UsageError("give a system with -A/--matrix or --random");
    if (f.complex) throw UsageError("--complex applies to --random only");
    return parse_system(*f.matrix, f.rhs);
}

std::string format_ms(std::int64_t ns) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f ms", static_cast<double>(ns) / 1e6);
    return buf;
}

std::string format_sci(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

template <Field S>
std::string format_scalar(const S& v) {
    if constexpr (is_complex_v<S>) {
        return "(" + format_double(v.real()) + ", " + format_double(v.imag()) + ")";
    } else {
        return format_double(v);
    }
}

struct SolveOutput {
    std::optional<std::string> report_path;
    bool full_iterates = false;
    bool print_solution = false;
};

template <Field S>
int solve_system(const LinearSystem<S>& sys, const SolverConfig& config, const SolveOutput& output, std::ostream& out) {
    const DenseRowOracle<S> oracle(sys.matrix, sys.rhs);
    const SolveReport<S> report = solve<S>(oracle, config);
    if (output.report_path) write_report(report, *output.report_path, output.full_iterates);

    out << "status: " << to_string(report.status);
    if (!report.solved()) out << " (" << to_string(report.failure) << ")";
    out << '\n';
    out << "system: " << report.rows << " x " << report.dim << ' ' << field_name<S>() << ", L = "
        << report.iterates.size() << '\n';
    out << "completed steps: " << report.completed_steps << '/' << report.rows << '\n';
    out << "max residual: " << format_sci(report.max_residual) << " (tolerance " << format_sci(report.tolerance)
        << ")\n";
    out << "flops: " << report.flops.total() << " (critical path " << report.depth_flops << ")\n";
    out << "wall time: " << format_ms(report.wall_time.count()) << '\n';
    out << "retries: " << report.retries_used << '\n';
    if (report.step_failure) {
        const StepFailure& f = *report.step_failure;
        out << "failure: row " << f.row + 1 << ", slot " << f.slot + 1 << ", pair (" << f.pair.first + 1 << ", "
            << f.pair.second + 1 << ")\n";
    }
    if (output.print_solution && report.iterates.size() > 0) {
        out << "solution:";
        for (const S& v : report.iterates[0]) out << ' ' << format_scalar(v);
        out << '\n';
    }
    return report.solved() ? kExitSolved : kExitPartial;
}

template <Field S>
int check_vectors(const ReportRecord& record, const LinearSystem<S>& sys, std::ostream& out, std::ostream& err) {
    if (sys.matrix.rows() != record.rows || sys.matrix.cols() != record.dim) {
        throw UsageError("report is for a " + std::to_string(record.rows) + " x " + std::to_string(record.dim) +
                         " system but the given system is " + std::to_string(sys.matrix.rows()) + " x " +
                         std::to_string(sys.matrix.cols()));
    }
    if (record.vectors.empty()) throw UsageError("report carries no vectors");
    const DenseRowOracle<S> oracle(sys.matrix, sys.rhs);
    const std::size_t k = record.status == "solved" ? record.rows : record.completed_steps;
    const double tol = feas_tol(k, oracle.rhs_norm_inf(), record.config.feas_scale);

    for (std::size_t l = 0; l < record.vectors.size(); ++l) {
        Vector<S> v(record.dim);
        for (std::size_t i = 0; i < record.dim; ++i) {
            if constexpr (is_complex_v<S>) v[i] = record.vectors[l][i];
            else v[i] = record.vectors[l][i].real();
        }
        for (std::size_t row = 0; row < k; ++row) {
            const double r = magnitude(oracle.row_action(row, v) - oracle.rhs_entry(row));
            if (!(r <= tol)) {
                err << "violated row " << row + 1 << ": residual " << format_sci(r) << " exceeds tolerance "
                    << format_sci(tol) << " (vector " << l + 1 << ")\n";
                return kExitPartial;
            }
        }
    }
    out << "ok: " << record.vectors.size() << " vector(s) satisfy rows 1.." << k << " within " << format_sci(tol)
        << '\n';
    return kExitSolved;
}

int run_check(const std::string& report_path, const SystemFlags& sf, std::ostream& out, std::ostream& err) {
    const ReportRecord record = read_report(report_path);
    const AnySystem sys = load_system(sf, record.seed);
    return std::visit(
        [&](const auto& s) -> int {
            using S = typename std::decay_t<decltype(s.rhs)>::value_type;
            if (record.field != field_name<S>()) {
                throw UsageError(std::string("report holds a ") + record.field + " solution but the system is " +
                                 field_name<S>());
            }
            return check_vectors<S>(record, s, out, err);
        },
        sys);
}

struct BenchFlags {
    std::vector<std::size_t> sizes{32, 64, 128, 256};
    std::size_t reps = 1;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    std::vector<std::string> variants{"default"};
    std::optional<std::string> csv;
    bool no_elimination = false;
    std::size_t crossover_max = 128;
};

int run_bench(const BenchFlags& f, std::ostream& out) {
    BenchOptions opt;
    opt.sizes = f.sizes;
    opt.repetitions = f.reps;
    opt.seed = f.seed;
    opt.workers = f.workers;
    opt.variants = f.variants;
    opt.include_elimination = !f.no_elimination;
    const std::vector<BenchRow> rows = run_benchmark(opt);

    if (f.csv) {
        std::ostringstream csv;
        write_bench_csv(csv, rows);
        write_text_file(*f.csv, csv.str());
    } else {
        write_bench_csv(out, rows);
    }

    // Mean per size for each (solver, variant), then log-log fits.
    std::map<std::pair<std::string, std::string>, std::map<std::size_t, std::pair<double, double>>> sums;
    std::map<std::pair<std::string, std::string>, std::map<std::size_t, int>> counts;
    bool all_solved = true;
    for (const BenchRow& r : rows) {
        auto& s = sums[{r.solver, r.variant}][r.n];
        s.first += static_cast<double>(r.flops);
        s.second += static_cast<double>(r.depth_flops);
        ++counts[{r.solver, r.variant}][r.n];
        if (r.status != "solved") all_solved = false;
    }
    for (const auto& [key, per_n] : sums) {
        if (per_n.size() < 2) continue;
        std::vector<double> x, total, depth;
        for (const auto& [n, s] : per_n) {
            const double c = counts[key][n];
            x.push_back(static_cast<double>(n));
            total.push_back(s.first / c);
            depth.push_back(s.second / c);
        }
        out << "# slope " << key.first << '/' << key.second << ": flops " << format_sci(fit_loglog_slope(x, total));
        if (key.first == "recombination") {
            out << ", critical path " << format_sci(fit_loglog_slope(x, depth));
        } else {
            out << ", multiply-adds " << format_sci(fit_loglog_slope(x, depth));
        }
        out << '\n';
    }

    if (f.crossover_max >= 2) {
        const CrossoverResult c = find_crossover(f.crossover_max, f.seed);
        auto show = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string("none"); };
        out << "# crossover (critical path with n+1 processors vs elimination multiply-adds): n = "
            << show(c.depth_vs_multiply_add) << '\n';
        out << "# crossover (total flops vs elimination total flops, scanned to n = " << c.scanned_max
            << "): n = " << show(c.total_vs_total) << '\n';
        out << "# reference point 15 n^2 < n^3/3 first holds at n = " << c.reference << '\n';
        out << "# measured critical-path constant at n = " << c.scanned_max << ": " << format_sci(c.depth_constant)
            << " n^2\n";
    }
    return all_solved ? kExitSolved : kExitPartial;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Randomized recombination solver for full-row-rank linear systems", "recomb"};
    app.require_subcommand(1);

    SolverFlags solve_flags;
    SystemFlags solve_system_flags;
    SolveOutput solve_output;
    std::string report_out;
    auto* solve_cmd = app.add_subcommand("solve", "Solve a system and write a report");
    add_solver_flags(solve_cmd, solve_flags);
    add_system_flags(solve_cmd, solve_system_flags);
    solve_cmd->add_option("-o,--output", report_out, "Write the JSON report here");
    solve_cmd->add_flag("--full-iterates", solve_output.full_iterates, "Store every output vector in the report");
    solve_cmd->add_flag("--print-solution", solve_output.print_solution, "Print the first output vector");

    BenchFlags bench_flags;
    auto* bench_cmd = app.add_subcommand("bench", "Flop and time scaling against Gaussian elimination");
    bench_cmd->add_option("--sizes", bench_flags.sizes, "Square sizes")->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--reps", bench_flags.reps, "Repetitions per size")->capture_default_str();
    bench_cmd->add_option("--seed", bench_flags.seed, "Base seed")->capture_default_str();
    bench_cmd->add_option("--parallel", bench_flags.workers, "Worker threads")->capture_default_str();
    bench_cmd->add_option("--variants", bench_flags.variants, "default, strict, reduced, guard")
        ->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_option("--csv", bench_flags.csv, "Write CSV rows here instead of standard output");
    bench_cmd->add_flag("--no-elimination", bench_flags.no_elimination, "Skip the elimination baseline");
    bench_cmd->add_option("--crossover-max", bench_flags.crossover_max, "Largest n of the crossover scan (0: skip)")
        ->capture_default_str();

    std::string check_report;
    SystemFlags check_system_flags;
    auto* check_cmd = app.add_subcommand("check", "Recompute the residuals of a report against its system");
    check_cmd->add_option("--report", check_report, "Report written by solve")->required();
    check_cmd->add_option("--seed", check_system_flags.system_seed, "Seed of the random system (default: the report's seed)");
    add_system_flags(check_cmd, check_system_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*solve_cmd) {
            if (!report_out.empty()) solve_output.report_path = report_out;
            const SolverConfig config = build_config(solve_flags);
            const AnySystem sys = load_system(solve_system_flags, solve_flags.seed);
            return std::visit([&](const auto& s) { return solve_system(s, config, solve_output, out); }, sys);
        }
        if (*bench_cmd) return run_bench(bench_flags, out);
        if (*check_cmd) return run_check(check_report, check_system_flags, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace recomb
