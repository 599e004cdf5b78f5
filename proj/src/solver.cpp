#include "recomb/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace recomb {

void SolverConfig::validate(std::size_t n) const {
    if (n == 0) throw ConfigError("system has no unknowns");
    if (iterates != 0 && iterates < 2) throw ConfigError("iterate count L must be at least 2");
    if (strict && iterates != 0 && iterates != n + 1) {
        throw ConfigError("strict mode fixes L = n+1");
    }
    if (iterate_count(n) < n + 1) {
        throw ConfigError("iterate count L = " + std::to_string(iterate_count(n)) + " is below n+1 = " +
                          std::to_string(n + 1));
    }
    if (!(rec_tol >= 0.0) || !std::isfinite(rec_tol)) throw ConfigError("rec_tol must be a finite value >= 0");
    if (!(degeneracy_dist_threshold >= 0.0)) throw ConfigError("degeneracy threshold must be >= 0");
    if (!(respread_c > 1.0) || !std::isfinite(respread_c)) throw ConfigError("respread_c must be > 1");
    if (!(spread_limit > 0.0)) throw ConfigError("spread limit must be > 0");
    if (!(shrink_c > 0.0 && shrink_c < 1.0)) throw ConfigError("shrink factor must lie in (0, 1)");
    if (workers == 0) throw ConfigError("worker count must be at least 1");
    if (!(feas_scale > 0.0)) throw ConfigError("feasibility scale must be > 0");
    if (strict && (guard || max_retries_per_step != 0)) {
        throw ConfigError("strict mode excludes the degeneracy guard and retries");
    }
}

template <Field S>
GuardDecision degeneracy_guard(std::span<const S> vi, std::span<const S> vj, const SolverConfig& config,
                               FlopCounter* counter) {
    const double gap = counted_distance<S>(vi, vj, counter);
    if (gap == 0.0) return {GuardKind::unusable, 1.0};
    const double ni = counted_norm2<S>(vi, counter);
    if (gap > config.spread_limit * std::max(ni, 1.0)) return {GuardKind::pull_in, config.shrink_c};
    const double nj = counted_norm2<S>(vj, counter);
    if (gap < config.degeneracy_dist_threshold * std::max({ni, nj, 1.0})) {
        return {GuardKind::respread, config.respread_c};
    }
    return {GuardKind::keep, 1.0};
}

template <Field S>
void apply_guard(std::span<const S> vi, std::span<const S> vj, double c, std::span<S> out, FlopCounter* counter) {
    count_adds(counter, 1);
    counted_axpby<S>(S{1.0 - c}, vi, S{c}, vj, out, counter);
}

std::size_t update_count(const SolverConfig& config, std::size_t n, std::size_t current_size, std::size_t row) {
    if (!config.reduced_updates) return current_size;
    const std::size_t step = row + 1;
    const std::size_t wanted = step < n + 1 ? n + 1 - step : 0;
    return std::min(current_size, std::max<std::size_t>(2, wanted));
}

namespace {

// Parallel depth of `items` distributed round-robin over `workers` processors.
std::uint64_t round_robin_depth(std::span<const FlopCounter> items, std::size_t workers) {
    std::vector<std::uint64_t> load(std::min(workers, items.size()), 0);
    for (std::size_t i = 0; i < items.size(); ++i) load[i % load.size()] += items[i].total();
    return load.empty() ? 0 : *std::max_element(load.begin(), load.end());
}

void run_indexed(WorkerPool* pool, std::size_t count, const std::function<void(std::size_t)>& fn) {
    if (pool) {
        pool->parallel_for(count, fn);
    } else {
        for (std::size_t i = 0; i < count; ++i) fn(i);
    }
}

template <Field S>
struct ActionTable {
    std::vector<S> actions;
    std::vector<S> residuals;
    std::vector<FlopCounter> cost;
};

template <Field S>
ActionTable<S> evaluate_actions(const IterateSet<S>& current, const RowOracle<S>& oracle, std::size_t row,
                                WorkerPool* pool) {
    const std::size_t l = current.size();
    const S beta = oracle.rhs_entry(row);
    ActionTable<S> table{std::vector<S>(l), std::vector<S>(l), std::vector<FlopCounter>(l)};
    run_indexed(pool, l, [&](std::size_t i) {
        table.actions[i] = oracle.row_action(row, current[i], &table.cost[i]);
        table.residuals[i] = table.actions[i] - beta;
        count_adds(&table.cost[i], 1);
    });
    return table;
}

struct SlotOutcome {
    bool ok = true;
    std::size_t retries = 0;
    std::size_t guard_events = 0;
    IndexPair pair{};
    double denominator = 0.0;
};

template <Field S>
StepResult<S> recombine_schedule(const IterateSet<S>& current, const RowOracle<S>& oracle, std::size_t row,
                                 const PairSchedule& schedule, const ActionTable<S>& table,
                                 const SolverConfig& config, const CounterRng& root, StepStats* stats,
                                 WorkerPool* pool) {
    const std::size_t l = current.size();
    const std::size_t n = current.dim();
    const std::size_t count = schedule.size();
    const S beta = oracle.rhs_entry(row);
    for (const auto& [i, j] : schedule.pairs) {
        if (i >= l || j >= l || i == j) throw ConfigError("pair schedule index out of range");
    }

    IterateSet<S> next(count, n, row + 1);
    std::vector<FlopCounter> cost(count);
    std::vector<SlotOutcome> outcomes(count);

    run_indexed(pool, count, [&](std::size_t slot) {
        FlopCounter& c = cost[slot];
        SlotOutcome& out = outcomes[slot];
        auto [i, j] = schedule[slot];
        std::optional<CounterRng> redraw;
        Vector<S> scratch;

        for (std::size_t attempt = 0;; ++attempt) {
            std::span<const S> u = current[i];
            std::span<const S> v = current[j];
            S s_v = table.actions[j];
            bool usable = true;
            double dmag = 0.0;

            if (config.guard) {
                const GuardDecision g = degeneracy_guard<S>(u, v, config, &c);
                if (g.kind == GuardKind::unusable) {
                    usable = false;
                } else if (g.kind != GuardKind::keep) {
                    scratch.resize(n);
                    apply_guard<S>(u, v, g.c, scratch, &c);
                    v = scratch;
                    s_v = table.actions[i] + S{g.c} * (s_v - table.actions[i]);
                    count_adds(&c, 2);
                    count_muls(&c, 1);
                    ++out.guard_events;
                }
            }
            if (usable) {
                auto r = recombine_into<S>(u, v, table.actions[i], s_v, beta, config.rec_tol, next[slot], &c);
                if (std::holds_alternative<S>(r)) {
                    out.pair = {i, j};
                    return;
                }
                dmag = std::get<RecDegenerate>(r).denominator_magnitude;
            }

            if (attempt >= config.max_retries_per_step) {
                out.ok = false;
                out.pair = ordered_pair(i, j);
                out.denominator = dmag;
                return;
            }
            // Keep the first index, redraw its partner uniformly from the others.
            if (!redraw) redraw = root.child({2, row, slot});
            std::size_t q = static_cast<std::size_t>(redraw->below(l - 1));
            if (q >= i) ++q;
            j = q;
            ++out.retries;
        }
    });

    StepStats local;
    for (std::size_t i = 0; i < l; ++i) local.flops += table.cost[i];
    for (std::size_t s = 0; s < count; ++s) {
        local.flops += cost[s];
        local.retries += outcomes[s].retries;
        local.guard_events += outcomes[s].guard_events;
    }
    const std::size_t processors = config.depth_workers ? config.depth_workers : n + 1;
    local.depth_flops = round_robin_depth(table.cost, processors) + round_robin_depth(cost, processors);
    if (stats) *stats += local;

    for (std::size_t s = 0; s < count; ++s) {
        if (!outcomes[s].ok) return StepFailure{row, s, outcomes[s].pair, outcomes[s].denominator};
    }
    return next;
}

template <Field S>
void check_step_inputs(const IterateSet<S>& current, const RowOracle<S>& oracle, std::size_t row) {
    if (row >= oracle.row_count()) throw DimensionError("step: row index out of range");
    if (current.dim() != oracle.dim()) throw DimensionError("step: iterate dimension does not match the system");
    if (current.size() < 2) throw ConfigError("step: need at least two iterates");
}

} // namespace

template <Field S>
StepResult<S> step_with_schedule(const IterateSet<S>& current, const RowOracle<S>& oracle, std::size_t row,
                                  const PairSchedule& schedule, const SolverConfig& config, const CounterRng& root,
                                  StepStats* stats, WorkerPool* pool) {
    check_step_inputs(current, oracle, row);
    const ActionTable<S> table = evaluate_actions(current, oracle, row, pool);
    return recombine_schedule(current, oracle, row, schedule, table, config, root, stats, pool);
}

template <Field S>
StepResult<S> step(const IterateSet<S>& current, const RowOracle<S>& oracle, std::size_t row,
                   const SolverConfig& config, const CounterRng& root, StepStats* stats, WorkerPool* pool) {
    check_step_inputs(current, oracle, row);
    const ActionTable<S> table = evaluate_actions(current, oracle, row, pool);
    CounterRng selection = root.child({1, row});
    const std::size_t count = update_count(config, oracle.dim(), current.size(), row);
    const PairSchedule schedule =
        select_pairs<S>(config.pairing, std::span<const S>(table.residuals), selection, count);
    return recombine_schedule(current, oracle, row, schedule, table, config, root, stats, pool);
}

template <Field S>
std::vector<double> iterate_row_residuals(const RowOracle<S>& oracle, const IterateSet<S>& iterates,
                                          WorkerPool* pool) {
    if (iterates.dim() != oracle.dim()) throw DimensionError("residual: iterate dimension mismatch");
    std::vector<double> worst(oracle.row_count(), 0.0);
    run_indexed(pool, oracle.row_count(), [&](std::size_t k) {
        const S b = oracle.rhs_entry(k);
        double w = 0.0;
        for (std::size_t l = 0; l < iterates.size(); ++l) {
            w = std::max(w, magnitude(oracle.row_action(k, iterates[l]) - b));
        }
        worst[k] = w;
    });
    return worst;
}

std::size_t consistent_prefix(std::span<const double> row_residuals, std::size_t upto, double rhs_norm_inf,
                              double scale) {
    upto = std::min(upto, row_residuals.size());
    std::size_t best = 0;
    double running = 0.0;
    for (std::size_t p = 1; p <= upto; ++p) {
        // std::max would drop a NaN, so it ends the prefix explicitly.
        if (std::isnan(row_residuals[p - 1])) break;
        running = std::max(running, row_residuals[p - 1]);
        if (running <= feas_tol(p, rhs_norm_inf, scale)) best = p;
    }
    return best;
}

template <Field S>
SolveReport<S> solve(const RowOracle<S>& oracle, const SolverConfig& config, const GenerationObserver<S>& observer) {
    const std::size_t m = oracle.row_count();
    const std::size_t n = oracle.dim();
    config.validate(n);
    if (m > n) throw ConfigError("more equations than unknowns: the solver needs m <= n");

    SolveReport<S> report;
    report.rows = m;
    report.dim = n;
    report.config = config;
    report.rhs_norm_inf = oracle.rhs_norm_inf();

    WorkerPool pool(config.workers);
    const CounterRng root(config.seed);
    const auto start = std::chrono::steady_clock::now();

    CounterRng init = root.child({0});
    IterateSet<S> current = sample_iterates<S>(config.distribution, n, config.iterate_count(n), init);
    if (observer) observer(current);

    StepStats totals;
    for (std::size_t row = 0; row < m; ++row) {
        StepResult<S> r = step<S>(current, oracle, row, config, root, &totals, &pool);
        if (auto* failure = std::get_if<StepFailure>(&r)) {
            report.failure = FailureKind::degenerate;
            report.step_failure = *failure;
            break;
        }
        current = std::move(std::get<IterateSet<S>>(r));
        if (observer) observer(current);
    }
    report.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);

    report.flops = totals.flops;
    report.depth_flops = totals.depth_flops;
    report.retries_used = totals.retries;
    report.guard_events = totals.guard_events;

    report.row_residuals = iterate_row_residuals(oracle, current, &pool);
    const std::size_t reached = current.generation();
    report.completed_steps = consistent_prefix(report.row_residuals, reached, report.rhs_norm_inf, config.feas_scale);
    if (report.failure == FailureKind::none && report.completed_steps < m) report.failure = FailureKind::inaccurate;
    report.status = report.failure == FailureKind::none ? SolveStatus::solved : SolveStatus::partial;

    for (std::size_t k = 0; k < report.completed_steps; ++k) {
        report.max_residual = std::max(report.max_residual, report.row_residuals[k]);
    }
    report.tolerance = feas_tol(report.completed_steps, report.rhs_norm_inf, config.feas_scale);
    report.iterates = std::move(current);
    return report;
}

#define RECOMB_SOLVER_INSTANTIATE(S)                                                                               \
    template GuardDecision degeneracy_guard<S>(std::span<const S>, std::span<const S>, const SolverConfig&,         \
                                               FlopCounter*);                                                     \
    template void apply_guard<S>(std::span<const S>, std::span<const S>, double, std::span<S>, FlopCounter*);      \
    template StepResult<S> step_with_schedule<S>(const IterateSet<S>&, const RowOracle<S>&, std::size_t,           \
                                                 const PairSchedule&, const SolverConfig&, const CounterRng&,      \
                                                 StepStats*, WorkerPool*);                                        \
    template StepResult<S> step<S>(const IterateSet<S>&, const RowOracle<S>&, std::size_t, const SolverConfig&,    \
                                   const CounterRng&, StepStats*, WorkerPool*);                                   \
    template SolveReport<S> solve<S>(const RowOracle<S>&, const SolverConfig&, const GenerationObserver<S>&);      \
    template std::vector<double> iterate_row_residuals<S>(const RowOracle<S>&, const IterateSet<S>&, WorkerPool*);

RECOMB_SOLVER_INSTANTIATE(double)
RECOMB_SOLVER_INSTANTIATE(Complex)

} // namespace recomb
