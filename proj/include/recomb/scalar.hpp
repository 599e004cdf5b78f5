#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <type_traits>

#include "recomb/errors.hpp"

namespace recomb {

using Complex = std::complex<double>;

// The two fields every numeric module is instantiated over.
template <typename S>
concept Field = std::same_as<S, double> || std::same_as<S, Complex>;

template <typename S>
inline constexpr bool is_complex_v = std::same_as<S, Complex>;

// Unit roundoff of IEEE binary64 (2^-53). All tolerances are expressed in it.
inline constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2.0;

// Smallest positive normal double; floor of the degeneracy scale in rec.
inline constexpr double kTinyNormal = std::numeric_limits<double>::min();

inline double magnitude(double s) noexcept { return std::fabs(s); }
inline double magnitude(const Complex& s) noexcept { return std::abs(s); }

inline double conj_of(double s) noexcept { return s; }
inline Complex conj_of(const Complex& s) noexcept { return std::conj(s); }

inline double real_part(double s) noexcept { return s; }
inline double real_part(const Complex& s) noexcept { return s.real(); }

// Division that refuses a zero divisor instead of producing inf/nan.
template <Field S>
S checked_divide(const S& numerator, const S& denominator) {
    if (magnitude(denominator) == 0.0) {
        throw DivisionByZero("division by a scalar of magnitude zero");
    }
    return numerator / denominator;
}

inline const char* field_name(double) noexcept { return "real"; }
inline const char* field_name(const Complex&) noexcept { return "complex"; }

template <Field S>
const char* field_name() noexcept {
    return field_name(S{});
}

} // namespace recomb
