#include "recomb/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "recomb/errors.hpp"
#include "recomb/io.hpp"

namespace recomb {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kFormatTag = "recomb-report";
constexpr int kFormatVersion = 1;

json number(double x) { return std::isnan(x) ? json(nullptr) : json(x); }

double number_from(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return j.get<double>();
}

json vector_json(const Vector<Complex>& v, bool complex) {
    json out = json::array();
    for (const Complex& z : v) {
        if (complex) out.push_back(json::array({number(z.real()), number(z.imag())}));
        else out.push_back(number(z.real()));
    }
    return out;
}

Vector<Complex> vector_from(const json& j, bool complex) {
    Vector<Complex> v;
    v.reserve(j.size());
    for (const json& e : j) {
        if (complex) v.emplace_back(number_from(e.at(0)), number_from(e.at(1)));
        else v.emplace_back(number_from(e), 0.0);
    }
    return v;
}

json config_json(const SolverConfig& c) {
    const auto [p0, p1] = c.distribution.parameters();
    return json{
        {"distribution", {{"kind", c.distribution.name()}, {"p0", p0}, {"p1", p1}}},
        {"seed", c.seed},
        {"iterates", c.iterates},
        {"pairing", to_string(c.pairing)},
        {"rec_tol", c.rec_tol},
        {"guard", c.guard},
        {"degeneracy_dist_threshold", c.degeneracy_dist_threshold},
        {"respread_c", c.respread_c},
        {"spread_limit", c.spread_limit},
        {"shrink_c", c.shrink_c},
        {"reduced_updates", c.reduced_updates},
        {"max_retries_per_step", c.max_retries_per_step},
        {"workers", c.workers},
        {"depth_workers", c.depth_workers},
        {"feas_scale", c.feas_scale},
        {"strict", c.strict},
    };
}

SolverConfig config_from(const json& j) {
    SolverConfig c;
    const json& d = j.at("distribution");
    const DistributionSpec kind = DistributionSpec::parse(d.at("kind").get<std::string>());
    c.distribution = DistributionSpec::from_parameters(kind.kind(), d.at("p0").get<double>(), d.at("p1").get<double>());
    c.seed = j.at("seed").get<std::uint64_t>();
    c.iterates = j.at("iterates").get<std::size_t>();
    c.pairing = parse_pairing_rule(j.at("pairing").get<std::string>());
    c.rec_tol = j.at("rec_tol").get<double>();
    c.guard = j.at("guard").get<bool>();
    c.degeneracy_dist_threshold = j.at("degeneracy_dist_threshold").get<double>();
    c.respread_c = j.at("respread_c").get<double>();
    c.spread_limit = j.at("spread_limit").get<double>();
    c.shrink_c = j.at("shrink_c").get<double>();
    c.reduced_updates = j.at("reduced_updates").get<bool>();
    c.max_retries_per_step = j.at("max_retries_per_step").get<std::size_t>();
    c.workers = j.at("workers").get<std::size_t>();
    c.depth_workers = j.at("depth_workers").get<std::size_t>();
    c.feas_scale = j.at("feas_scale").get<double>();
    c.strict = j.at("strict").get<bool>();
    return c;
}

bool same_number(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

bool same_vectors(const std::vector<Vector<Complex>>& a, const std::vector<Vector<Complex>>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return false;
        for (std::size_t k = 0; k < a[i].size(); ++k) {
            if (!same_number(a[i][k].real(), b[i][k].real()) || !same_number(a[i][k].imag(), b[i][k].imag())) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

bool operator==(const StepFailure& a, const StepFailure& b) {
    return a.row == b.row && a.slot == b.slot && a.pair == b.pair &&
           same_number(a.denominator_magnitude, b.denominator_magnitude);
}

bool ReportRecord::operator==(const ReportRecord& o) const {
    return status == o.status && completed_steps == o.completed_steps && failure == o.failure &&
           step_failure == o.step_failure && field == o.field && rows == o.rows && dim == o.dim &&
           iterate_count == o.iterate_count && same_number(max_residual, o.max_residual) &&
           same_number(tolerance, o.tolerance) && same_number(rhs_norm_inf, o.rhs_norm_inf) && flops == o.flops &&
           depth_flops == o.depth_flops && wall_time_ns == o.wall_time_ns && retries_used == o.retries_used &&
           guard_events == o.guard_events && seed == o.seed && config == o.config &&
           same_vectors(vectors, o.vectors) && full_iterates == o.full_iterates;
}

template <Field S>
ReportRecord make_record(const SolveReport<S>& report, bool full_iterates) {
    ReportRecord r;
    r.status = to_string(report.status);
    r.completed_steps = report.completed_steps;
    r.failure = to_string(report.failure);
    r.step_failure = report.step_failure;
    r.field = field_name<S>();
    r.rows = report.rows;
    r.dim = report.dim;
    r.iterate_count = report.iterates.size();
    r.max_residual = report.max_residual;
    r.tolerance = report.tolerance;
    r.rhs_norm_inf = report.rhs_norm_inf;
    r.flops = report.flops;
    r.depth_flops = report.depth_flops;
    r.wall_time_ns = report.wall_time.count();
    r.retries_used = report.retries_used;
    r.guard_events = report.guard_events;
    r.seed = report.config.seed;
    r.config = report.config;
    r.full_iterates = full_iterates;
    const std::size_t count = full_iterates ? report.iterates.size() : std::min<std::size_t>(1, report.iterates.size());
    for (std::size_t l = 0; l < count; ++l) {
        const auto v = report.iterates[l];
        r.vectors.emplace_back(v.begin(), v.end());
    }
    return r;
}

std::string record_to_json(const ReportRecord& r, bool pretty) {
    const bool complex = r.field == "complex";
    json j{
        {"format", kFormatTag},
        {"version", kFormatVersion},
        {"status", r.status},
        {"completed_steps", r.completed_steps},
        {"failure", r.failure},
        {"field", r.field},
        {"rows", r.rows},
        {"dim", r.dim},
        {"iterate_count", r.iterate_count},
        {"max_residual", number(r.max_residual)},
        {"tolerance", number(r.tolerance)},
        {"rhs_norm_inf", number(r.rhs_norm_inf)},
        {"flops", {{"adds", r.flops.adds}, {"muls", r.flops.muls}, {"divs", r.flops.divs}, {"total", r.flops.total()}}},
        {"depth_flops", r.depth_flops},
        {"wall_time_ns", r.wall_time_ns},
        {"retries_used", r.retries_used},
        {"guard_events", r.guard_events},
        {"seed", r.seed},
        {"config", config_json(r.config)},
    };
    if (r.step_failure) {
        const StepFailure& f = *r.step_failure;
        j["step_failure"] = {{"row", f.row + 1},
                             {"slot", f.slot + 1},
                             {"pair", {f.pair.first + 1, f.pair.second + 1}},
                             {"denominator", number(f.denominator_magnitude)}};
    }
    if (!r.vectors.empty()) j["solution"] = vector_json(r.vectors.front(), complex);
    if (r.full_iterates) {
        json all = json::array();
        for (const auto& v : r.vectors) all.push_back(vector_json(v, complex));
        j["iterates"] = std::move(all);
    }
    return j.dump(pretty ? 2 : -1) + "\n";
}

ReportRecord record_from_json(const std::string& text, const std::string& name) {
    try {
        const json j = json::parse(text);
        if (j.value("format", std::string()) != kFormatTag) throw IoError(name + ": not a solve report");
        if (j.at("version").get<int>() != kFormatVersion) throw IoError(name + ": unsupported report version");
        ReportRecord r;
        r.status = j.at("status").get<std::string>();
        if (r.status != "solved" && r.status != "partial") throw IoError(name + ": unknown status '" + r.status + "'");
        r.completed_steps = j.at("completed_steps").get<std::size_t>();
        r.failure = j.at("failure").get<std::string>();
        r.field = j.at("field").get<std::string>();
        if (r.field != "real" && r.field != "complex") throw IoError(name + ": unknown field '" + r.field + "'");
        r.rows = j.at("rows").get<std::size_t>();
        r.dim = j.at("dim").get<std::size_t>();
        r.iterate_count = j.at("iterate_count").get<std::size_t>();
        r.max_residual = number_from(j.at("max_residual"));
        r.tolerance = number_from(j.at("tolerance"));
        r.rhs_norm_inf = number_from(j.at("rhs_norm_inf"));
        const json& f = j.at("flops");
        r.flops = FlopCounter{f.at("adds").get<std::uint64_t>(), f.at("muls").get<std::uint64_t>(),
                              f.at("divs").get<std::uint64_t>()};
        r.depth_flops = j.at("depth_flops").get<std::uint64_t>();
        r.wall_time_ns = j.at("wall_time_ns").get<std::int64_t>();
        r.retries_used = j.at("retries_used").get<std::size_t>();
        r.guard_events = j.at("guard_events").get<std::size_t>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.config = config_from(j.at("config"));
        if (j.contains("step_failure")) {
            const json& s = j.at("step_failure");
            r.step_failure = StepFailure{s.at("row").get<std::size_t>() - 1, s.at("slot").get<std::size_t>() - 1,
                                         {s.at("pair").at(0).get<std::size_t>() - 1,
                                          s.at("pair").at(1).get<std::size_t>() - 1},
                                         number_from(s.at("denominator"))};
        }
        const bool complex = r.field == "complex";
        if (j.contains("iterates")) {
            r.full_iterates = true;
            for (const json& v : j.at("iterates")) r.vectors.push_back(vector_from(v, complex));
        } else if (j.contains("solution")) {
            r.vectors.push_back(vector_from(j.at("solution"), complex));
        }
        for (const auto& v : r.vectors) {
            if (v.size() != r.dim) throw IoError(name + ": vector length does not match dim");
        }
        return r;
    } catch (const json::exception& e) {
        throw IoError(name + ": malformed report: " + e.what());
    } catch (const ConfigError& e) {
        throw IoError(name + ": malformed report config: " + e.what());
    }
}

template <Field S>
void write_report(const SolveReport<S>& report, const std::string& path, bool full_iterates) {
    write_text_file(path, record_to_json(make_record(report, full_iterates)));
}

ReportRecord read_report(const std::string& path) { return record_from_json(read_text_file(path), path); }

template ReportRecord make_record<double>(const SolveReport<double>&, bool);
template ReportRecord make_record<Complex>(const SolveReport<Complex>&, bool);
template void write_report<double>(const SolveReport<double>&, const std::string&, bool);
template void write_report<Complex>(const SolveReport<Complex>&, const std::string&, bool);

} // namespace recomb
