#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "recomb/flops.hpp"
#include "recomb/iterates.hpp"
#include "recomb/linop.hpp"
#include "recomb/pairing.hpp"
#include "recomb/random.hpp"
#include "recomb/rec.hpp"
#include "recomb/scalar.hpp"
#include "recomb/worker_pool.hpp"

namespace recomb {

inline constexpr double kDefaultFeasScale = 1e-9;

// Residual budget after k completed steps: scale * k * max(1, |b|_inf).
inline double feas_tol(std::size_t k, double rhs_norm_inf, double scale = kDefaultFeasScale) noexcept {
    return scale * static_cast<double>(k) * std::max(1.0, rhs_norm_inf);
}

struct SolverConfig {
    DistributionSpec distribution = DistributionSpec::gaussian();
    std::uint64_t seed = 0;

    // Number of iterates L; 0 selects the default, 2(n+1), or n+1 in strict mode.
    std::size_t iterates = 0;
    PairingRule pairing = PairingRule::balanced;
    double rec_tol = kDefaultRecTolerance;

    bool guard = false;
    double degeneracy_dist_threshold = 1e-8;
    double respread_c = 2.0;
    double spread_limit = 1e6;
    double shrink_c = 0.5;

    bool reduced_updates = false;
    std::size_t max_retries_per_step = 3;
    std::size_t workers = 1;

    // Virtual processor count used for the parallel-depth tally; 0 means n+1.
    std::size_t depth_workers = 0;
    double feas_scale = kDefaultFeasScale;
    bool strict = false;

    // Literal reading of the algorithm: L = n+1, stop on the first degenerate
    // pair, no guard.
    static SolverConfig strict_paper() {
        SolverConfig c;
        c.strict = true;
        c.max_retries_per_step = 0;
        c.guard = false;
        return c;
    }

    std::size_t iterate_count(std::size_t n) const noexcept {
        if (iterates != 0) return iterates;
        return strict ? n + 1 : 2 * (n + 1);
    }

    // Throws ConfigError on any out-of-range field. n is the unknown count.
    void validate(std::size_t n) const;

    friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct StepStats {
    FlopCounter flops;
    std::uint64_t depth_flops = 0;
    std::size_t retries = 0;
    std::size_t guard_events = 0;

    StepStats& operator+=(const StepStats& other) noexcept {
        flops += other.flops;
        depth_flops += other.depth_flops;
        retries += other.retries;
        guard_events += other.guard_events;
        return *this;
    }
};

struct StepFailure {
    std::size_t row = 0;   // 0-based row whose step failed
    std::size_t slot = 0;  // lowest failing slot
    IndexPair pair{};      // last pair tried in that slot
    double denominator_magnitude = 0.0;
};

template <Field S>
using StepResult = std::variant<IterateSet<S>, StepFailure>;

enum class GuardKind { keep, respread, pull_in, unusable };

struct GuardDecision {
    GuardKind kind = GuardKind::keep;
    double c = 1.0;
};

// Decides how the pair (vi, vj) is adjusted before recombination: nearly equal
// vectors are pushed apart by respread_c, far-apart ones pulled together by
// shrink_c, identical ones are unusable. The adjusted partner is
// vi + c (vj - vi); see apply_guard.
template <Field S>
GuardDecision degeneracy_guard(std::span<const S> vi, std::span<const S> vj, const SolverConfig& config,
                               FlopCounter* counter = nullptr);

// out = vi + c (vj - vi).
template <Field S>
void apply_guard(std::span<const S> vi, std::span<const S> vj, double c, std::span<S> out,
                 FlopCounter* counter = nullptr);

// Number of slots filled in the step for 0-based `row`.
std::size_t update_count(const SolverConfig& config, std::size_t n, std::size_t current_size, std::size_t row);

// One outer step with a caller-supplied schedule; slot l of the result is the
// recombination of schedule[l] for row `row`. Every output is computed from
// `current`, which is never written.
template <Field S>
StepResult<S> step_with_schedule(const IterateSet<S>& current, const RowOracle<S>& oracle, std::size_t row,
                                  const PairSchedule& schedule, const SolverConfig& config, const CounterRng& root,
                                  StepStats* stats = nullptr, WorkerPool* pool = nullptr);

// One outer step: evaluates the row action on every iterate, draws the pair
// schedule from root.child({1, row}), then recombines.
template <Field S>
StepResult<S> step(const IterateSet<S>& current, const RowOracle<S>& oracle, std::size_t row,
                   const SolverConfig& config, const CounterRng& root, StepStats* stats = nullptr,
                   WorkerPool* pool = nullptr);

enum class SolveStatus { solved, partial };
enum class FailureKind { none, degenerate, inaccurate };

inline std::string to_string(SolveStatus s) { return s == SolveStatus::solved ? "solved" : "partial"; }

inline std::string to_string(FailureKind f) {
    switch (f) {
    case FailureKind::none: return "none";
    case FailureKind::degenerate: return "degenerate";
    case FailureKind::inaccurate: return "inaccurate";
    }
    return "unknown";
}

template <Field S>
struct SolveReport {
    SolveStatus status = SolveStatus::partial;
    // Rows 1..completed_steps are satisfied within feas_tol(completed_steps).
    std::size_t completed_steps = 0;
    FailureKind failure = FailureKind::none;
    std::optional<StepFailure> step_failure;

    IterateSet<S> iterates;
    // Worst residual over the iterates for every row of the system.
    std::vector<double> row_residuals;
    // Worst residual over rows 1..completed_steps, and the budget it met.
    double max_residual = 0.0;
    double tolerance = 0.0;

    FlopCounter flops;
    std::uint64_t depth_flops = 0;
    std::chrono::nanoseconds wall_time{0};
    std::size_t retries_used = 0;
    std::size_t guard_events = 0;

    std::size_t rows = 0;
    std::size_t dim = 0;
    double rhs_norm_inf = 0.0;
    SolverConfig config;

    bool solved() const noexcept { return status == SolveStatus::solved; }
};

// Called with every completed generation, starting with generation 0.
template <Field S>
using GenerationObserver = std::function<void(const IterateSet<S>&)>;

// Largest p <= upto such that rows 1..p all have residual <= feas_tol(p).
std::size_t consistent_prefix(std::span<const double> row_residuals, std::size_t upto, double rhs_norm_inf,
                              double scale);

template <Field S>
SolveReport<S> solve(const RowOracle<S>& oracle, const SolverConfig& config,
                     const GenerationObserver<S>& observer = {});

// Per-row worst residual over all iterates.
template <Field S>
std::vector<double> iterate_row_residuals(const RowOracle<S>& oracle, const IterateSet<S>& iterates,
                                          WorkerPool* pool = nullptr);

#define RECOMB_SOLVER_EXTERN(S)                                                                                   \
    extern template GuardDecision degeneracy_guard<S>(std::span<const S>, std::span<const S>, const SolverConfig&, \
                                                      FlopCounter*);                                              \
    extern template void apply_guard<S>(std::span<const S>, std::span<const S>, double, std::span<S>,              \
                                        FlopCounter*);                                                            \
    extern template StepResult<S> step_with_schedule<S>(const IterateSet<S>&, const RowOracle<S>&, std::size_t,   \
                                                        const PairSchedule&, const SolverConfig&,                 \
                                                        const CounterRng&, StepStats*, WorkerPool*);              \
    extern template StepResult<S> step<S>(const IterateSet<S>&, const RowOracle<S>&, std::size_t,                 \
                                          const SolverConfig&, const CounterRng&, StepStats*, WorkerPool*);       \
    extern template SolveReport<S> solve<S>(const RowOracle<S>&, const SolverConfig&,                             \
                                            const GenerationObserver<S>&);                                        \
    extern template std::vector<double> iterate_row_residuals<S>(const RowOracle<S>&, const IterateSet<S>&,       \
                                                                 WorkerPool*);

RECOMB_SOLVER_EXTERN(double)
RECOMB_SOLVER_EXTERN(Complex)
#undef RECOMB_SOLVER_EXTERN

} // namespace recomb
