#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <variant>

#include "recomb/errors.hpp"
#include "recomb/flops.hpp"
#include "recomb/linop.hpp"
#include "recomb/scalar.hpp"

namespace recomb {

inline constexpr double kDefaultRecTolerance = 1e-12;

template <Field S>
struct RecSuccess {
    Vector<S> z;
    S t;
};

struct RecDegenerate {
    // |a^T u - a^T v| at the time of the test.
    double denominator_magnitude;
};

template <Field S>
using RecOutcome = std::variant<RecSuccess<S>, RecDegenerate>;

// Degenerate when |s_u - s_v| <= tol * max(|s_u|, |s_v|, tiny). With tol = 0
// only an exactly zero denominator is degenerate.
inline bool is_degenerate_denominator(double denominator, double s_u, double s_v, double tol) noexcept {
    return denominator <= tol * std::max({s_u, s_v, kTinyNormal});
}

// Recombination from precomputed actions s_u = a^T u, s_v = a^T v. The solver
// uses this form because it already evaluated every action for pair selection.
// Writes z = t u + (1 - t) v into `out` and returns t, or the degenerate marker.
template <Field S>
std::variant<S, RecDegenerate> recombine_into(std::span<const S> u, std::span<const S> v, const S& s_u,
                                              const S& s_v, const S& beta, double tol, std::span<S> out,
                                              FlopCounter* counter) {
    if (u.size() != v.size() || u.size() != out.size()) throw DimensionError("recombine: length mismatch");
    if (tol < 0.0) throw ConfigError("recombine: tolerance must be nonnegative");

    const S denominator = s_u - s_v;
    count_adds(counter, 1);
    const double dmag = magnitude(denominator);
    if (is_degenerate_denominator(dmag, magnitude(s_u), magnitude(s_v), tol)) return RecDegenerate{dmag};

    const S t = (beta - s_v) / denominator;
    const S one_minus_t = S{1.0} - t;
    count_adds(counter, 2);
    count_divs(counter, 1);
    counted_axpby<S>(t, u, one_minus_t, v, out, counter);
    return t;
}

template <Field S>
RecOutcome<S> recombine_from_actions(std::span<const S> u, std::span<const S> v, const S& s_u, const S& s_v,
                                     const S& beta, double tol, FlopCounter* counter) {
    Vector<S> z(u.size());
    auto r = recombine_into<S>(u, v, s_u, s_v, beta, tol, z, counter);
    if (auto* d = std::get_if<RecDegenerate>(&r)) return *d;
    return RecSuccess<S>{std::move(z), std::get<S>(r)};
}

// The recombination subroutine: the point z on the line through u and v with
// a^T z = beta, where `a_action` evaluates w -> a^T w. Exactly two action
// evaluations per call.
template <Field S, typename Action>
    requires std::invocable<Action&, std::span<const S>>
RecOutcome<S> recombine(std::span<const S> u, std::span<const S> v, Action&& a_action, const S& beta,
                        double tol = kDefaultRecTolerance, FlopCounter* counter = nullptr) {
    if (u.size() != v.size()) throw DimensionError("recombine: u and v differ in length");
    const S s_u = a_action(u);
    const S s_v = a_action(v);
    return recombine_from_actions<S>(u, v, s_u, s_v, beta, tol, counter);
}

// Convenience overload for an explicit row vector; the action is counted.
template <Field S>
RecOutcome<S> recombine(std::span<const S> u, std::span<const S> v, std::span<const S> a, const S& beta,
                        double tol = kDefaultRecTolerance, FlopCounter* counter = nullptr) {
    auto action = [&](std::span<const S> w) { return counted_row_product<S>(a, w, counter); };
    return recombine<S>(u, v, action, beta, tol, counter);
}

} // namespace recomb
