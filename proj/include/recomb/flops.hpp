#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>

#include "recomb/errors.hpp"
#include "recomb/scalar.hpp"

namespace recomb {

// Tally of scalar-field operations. A complex multiply counts as one mul:
// the unit is an operation of the field the solver runs over.
struct FlopCounter {
    std::uint64_t adds = 0;
    std::uint64_t muls = 0;
    std::uint64_t divs = 0;

    std::uint64_t total() const noexcept { return adds + muls + divs; }

    FlopCounter& operator+=(const FlopCounter& other) noexcept {
        adds += other.adds;
        muls += other.muls;
        divs += other.divs;
        return *this;
    }

    friend FlopCounter operator+(FlopCounter a, const FlopCounter& b) noexcept { return a += b; }
    friend bool operator==(const FlopCounter&, const FlopCounter&) = default;
};

// Kernels take a nullable counter so uninstrumented callers pay nothing.
inline void count_adds(FlopCounter* c, std::uint64_t n) noexcept {
    if (c) c->adds += n;
}
inline void count_muls(FlopCounter* c, std::uint64_t n) noexcept {
    if (c) c->muls += n;
}
inline void count_divs(FlopCounter* c, std::uint64_t n) noexcept {
    if (c) c->divs += n;
}

namespace detail {
inline void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw DimensionError(std::string(what) + ": length mismatch");
}
} // namespace detail

// Inner product conj(u)^T v. Costs n muls and n-1 adds.
template <Field S>
S counted_dot(std::span<const S> u, std::span<const S> v, FlopCounter* counter) {
    detail::require_same_length(u.size(), v.size(), "counted_dot");
    S acc{};
    for (std::size_t i = 0; i < u.size(); ++i) acc += conj_of(u[i]) * v[i];
    count_muls(counter, u.size());
    count_adds(counter, u.empty() ? 0 : u.size() - 1);
    return acc;
}

// Bilinear row product a^T v (no conjugation); this is what A x = b needs.
template <Field S>
S counted_row_product(std::span<const S> a, std::span<const S> v, FlopCounter* counter) {
    detail::require_same_length(a.size(), v.size(), "counted_row_product");
    S acc{};
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * v[i];
    count_muls(counter, a.size());
    count_adds(counter, a.empty() ? 0 : a.size() - 1);
    return acc;
}

// out = alpha * x + beta * y. Costs 2n muls and n adds.
template <Field S>
void counted_axpby(const S& alpha, std::span<const S> x, const S& beta, std::span<const S> y,
                   std::span<S> out, FlopCounter* counter) {
    detail::require_same_length(x.size(), y.size(), "counted_axpby");
    detail::require_same_length(x.size(), out.size(), "counted_axpby");
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = alpha * x[i] + beta * y[i];
    count_muls(counter, 2 * x.size());
    count_adds(counter, x.size());
}

// Euclidean norm of x - y. Costs n subtractions, n muls, n-1 adds (sqrt not counted).
template <Field S>
double counted_distance(std::span<const S> x, std::span<const S> y, FlopCounter* counter) {
    detail::require_same_length(x.size(), y.size(), "counted_distance");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = magnitude(x[i] - y[i]);
        acc += d * d;
    }
    count_adds(counter, x.size() + (x.empty() ? 0 : x.size() - 1));
    count_muls(counter, x.size());
    return std::sqrt(acc);
}

template <Field S>
double counted_norm2(std::span<const S> x, FlopCounter* counter) {
    double acc = 0.0;
    for (const S& xi : x) {
        const double d = magnitude(xi);
        acc += d * d;
    }
    count_muls(counter, x.size());
    count_adds(counter, x.empty() ? 0 : x.size() - 1);
    return std::sqrt(acc);
}

} // namespace recomb
