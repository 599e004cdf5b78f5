#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "recomb/flops.hpp"
#include "recomb/linop.hpp"
#include "recomb/scalar.hpp"
#include "recomb/solver.hpp"

namespace recomb {

// Flat form of a solve report as stored on disk. Vectors are held as complex
// numbers for both fields; `field` says which instantiation produced them.
struct ReportRecord {
    std::string status;
    std::size_t completed_steps = 0;
    std::string failure;
    std::optional<StepFailure> step_failure;

    std::string field;
    std::size_t rows = 0;
    std::size_t dim = 0;
    std::size_t iterate_count = 0;

    double max_residual = 0.0;
    double tolerance = 0.0;
    double rhs_norm_inf = 0.0;

    FlopCounter flops;
    std::uint64_t depth_flops = 0;
    std::int64_t wall_time_ns = 0;
    std::size_t retries_used = 0;
    std::size_t guard_events = 0;

    std::uint64_t seed = 0;
    SolverConfig config;

    // The first output vector, or every output vector when written in full.
    std::vector<Vector<Complex>> vectors;
    bool full_iterates = false;

    bool operator==(const ReportRecord& other) const;
};

bool operator==(const StepFailure& a, const StepFailure& b);

template <Field S>
ReportRecord make_record(const SolveReport<S>& report, bool full_iterates);

// One JSON object. Doubles use the shortest representation that reads back
// exactly; complex scalars are [re, im] pairs; NaN is written as null.
std::string record_to_json(const ReportRecord& record, bool pretty = true);
ReportRecord record_from_json(const std::string& text, const std::string& name = "report");

template <Field S>
void write_report(const SolveReport<S>& report, const std::string& path, bool full_iterates = false);

ReportRecord read_report(const std::string& path);

extern template ReportRecord make_record<double>(const SolveReport<double>&, bool);
extern template ReportRecord make_record<Complex>(const SolveReport<Complex>&, bool);
extern template void write_report<double>(const SolveReport<double>&, const std::string&, bool);
extern template void write_report<Complex>(const SolveReport<Complex>&, const std::string&, bool);

} // namespace recomb
