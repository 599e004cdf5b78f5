#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

#include "recomb/errors.hpp"
#include "recomb/flops.hpp"
#include "recomb/linop.hpp"
#include "recomb/scalar.hpp"

namespace recomb {

template <Field S>
struct EliminationResult {
    Vector<S> x;
    // max |U_ij| / max |A_ij|
    double pivot_growth = 1.0;
    // Every add, multiply and divide performed; about (2/3) n^3.
    FlopCounter flops;
    // Multiply-add pairs in the update loops, the convention behind the
    // classical n^3/3 figure.
    std::uint64_t multiply_adds = 0;
};

// Gaussian elimination with partial pivoting on a square system. A pivot with
// |p| <= n * eps * |column k of A|_inf is treated as singular.
template <Field S>
EliminationResult<S> gauss_solve(const DenseMatrix<S>& a, std::span<const S> b) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw DimensionError("gauss_solve: matrix is not square");
    if (b.size() != n) throw DimensionError("gauss_solve: rhs length does not match");

    DenseMatrix<S> u = a;
    Vector<S> y(b.begin(), b.end());
    EliminationResult<S> result;
    FlopCounter& fc = result.flops;

    double max_a = 0.0;
    for (const S& e : a.entries()) max_a = std::max(max_a, magnitude(e));
    double max_u = max_a;

    const double eps = 2.0 * kUnitRoundoff;
    for (std::size_t k = 0; k < n; ++k) {
        double column_norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) column_norm = std::max(column_norm, magnitude(a(i, k)));

        std::size_t p = k;
        double best = magnitude(u(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = magnitude(u(i, k));
            if (m > best) {
                best = m;
                p = i;
            }
        }
        if (best <= static_cast<double>(n) * eps * column_norm) throw SingularMatrixError(k, best);
        if (p != k) {
            std::swap_ranges(u.row(k).begin(), u.row(k).end(), u.row(p).begin());
            std::swap(y[k], y[p]);
        }

        const S pivot = u(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const S factor = u(i, k) / pivot;
            count_divs(&fc, 1);
            u(i, k) = S{};
            for (std::size_t j = k + 1; j < n; ++j) {
                u(i, j) -= factor * u(k, j);
                max_u = std::max(max_u, magnitude(u(i, j)));
            }
            y[i] -= factor * y[k];
            const std::uint64_t updates = n - k;
            count_muls(&fc, updates);
            count_adds(&fc, updates);
            result.multiply_adds += updates;
        }
    }

    result.x.assign(n, S{});
    for (std::size_t ii = n; ii-- > 0;) {
        S acc = y[ii];
        for (std::size_t j = ii + 1; j < n; ++j) acc -= u(ii, j) * result.x[j];
        const std::uint64_t terms = n - 1 - ii;
        count_muls(&fc, terms);
        count_adds(&fc, terms);
        result.multiply_adds += terms;
        result.x[ii] = acc / u(ii, ii);
        count_divs(&fc, 1);
    }

    result.pivot_growth = max_a > 0.0 ? max_u / max_a : 1.0;
    return result;
}

template <Field S>
EliminationResult<S> gauss_solve(const LinearSystem<S>& system) {
    return gauss_solve<S>(system.matrix, system.rhs);
}

} // namespace recomb
