#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "recomb/errors.hpp"
#include "recomb/linop.hpp"
#include "recomb/random.hpp"
#include "recomb/scalar.hpp"

namespace recomb {

// Seeded test systems. Entries of G are i.i.d. standard Gaussian (complex
// entries have independent standard Gaussian parts). With cond > 1 the rows of
// G are scaled by a geometric ladder from 1 down to 1/cond, A = D G, which
// raises the condition number by roughly that factor. The right-hand side is
// b = A * (1, ..., 1), so the all-ones vector is a solution.
struct SystemSpec {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::uint64_t seed = 0;
    double cond = 1.0;
};

template <Field S>
LinearSystem<S> random_system(const SystemSpec& spec) {
    if (spec.rows == 0 || spec.cols == 0) throw ConfigError("random system: dimensions must be positive");
    if (!(spec.cond >= 1.0) || !std::isfinite(spec.cond)) throw ConfigError("random system: cond must be >= 1");

    CounterRng rng = CounterRng(spec.seed).child({7});
    const Vector<S> entries =
        sample_vector<S>(DistributionSpec::gaussian(), spec.rows * spec.cols, rng);
    DenseMatrix<S> a(spec.rows, spec.cols, entries);

    if (spec.cond > 1.0 && spec.rows > 1) {
        for (std::size_t i = 0; i < spec.rows; ++i) {
            const double frac = static_cast<double>(i) / static_cast<double>(spec.rows - 1);
            const double d = std::pow(spec.cond, -frac);
            for (S& e : a.row(i)) e *= d;
        }
    }

    const Vector<S> ones(spec.cols, S{1.0});
    Vector<S> b = a.multiply(ones);
    return {std::move(a), std::move(b)};
}

template <Field S>
LinearSystem<S> random_system(std::size_t rows, std::size_t cols, std::uint64_t seed, double cond = 1.0) {
    return random_system<S>(SystemSpec{rows, cols, seed, cond});
}

} // namespace recomb
