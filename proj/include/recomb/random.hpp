#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "recomb/errors.hpp"
#include "recomb/iterates.hpp"
#include "recomb/linop.hpp"
#include "recomb/scalar.hpp"

namespace recomb {

// Counter-based generator. The n-th output of a stream is a pure function of
// (key, n), so child streams can be derived for any (step, slot) without
// consuming the parent. The mixing function is the SplitMix64 finalizer.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed) noexcept : key_(mix(seed ^ 0x6A09E667F3BCC908ULL)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept { return mix(key_ + (++counter_) * kGolden); }

    // Independent stream keyed by a tag path; does not advance this stream.
    CounterRng child(std::initializer_list<std::uint64_t> tags) const noexcept {
        CounterRng c(0);
        std::uint64_t k = key_;
        for (std::uint64_t t : tags) k = mix(k ^ mix(t + kGolden));
        c.key_ = k;
        c.counter_ = 0;
        return c;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound). Rejection keeps it exactly unbiased.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw ConfigError("below(0)");
        const std::uint64_t limit = max() - max() % bound;
        for (;;) {
            const std::uint64_t x = (*this)();
            if (x < limit) return x % bound;
        }
    }

    // Two independent standard normals (Box-Muller).
    std::pair<double, double> normal_pair() noexcept {
        const double u1 = 1.0 - uniform01(); // (0, 1]
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = below(i);
            std::swap(items[i - 1], items[j]);
        }
    }

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t position() const noexcept { return counter_; }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

enum class DistributionKind { gaussian, uniform, sphere };

// Law of the random starting vectors. Each law gives every affine hyperplane
// probability zero. Complex instantiations draw real and imaginary parts
// independently from the same law.
class DistributionSpec {
public:
    static DistributionSpec gaussian(double mean = 0.0, double stddev = 1.0) {
        if (!(stddev > 0.0) || !std::isfinite(stddev) || !std::isfinite(mean)) {
            throw ConfigError("gaussian: stddev must be positive and finite");
        }
        return DistributionSpec(DistributionKind::gaussian, mean, stddev);
    }

    static DistributionSpec uniform(double lo = -1.0, double hi = 1.0) {
        if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
            throw ConfigError("uniform: need finite lo < hi");
        }
        return DistributionSpec(DistributionKind::uniform, lo, hi);
    }

    static DistributionSpec sphere() { return DistributionSpec(DistributionKind::sphere, 0.0, 1.0); }

    DistributionKind kind() const noexcept { return kind_; }
    double mean() const noexcept { return a_; }
    double stddev() const noexcept { return b_; }
    double lo() const noexcept { return a_; }
    double hi() const noexcept { return b_; }

    // The two law parameters: (mean, stddev), (lo, hi), or unused for sphere.
    std::pair<double, double> parameters() const noexcept { return {a_, b_}; }

    static DistributionSpec from_parameters(DistributionKind kind, double a, double b) {
        switch (kind) {
        case DistributionKind::gaussian: return gaussian(a, b);
        case DistributionKind::uniform: return uniform(a, b);
        case DistributionKind::sphere: return sphere();
        }
        throw ConfigError("unknown distribution kind");
    }

    friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;

    std::string name() const {
        switch (kind_) {
        case DistributionKind::gaussian: return "gaussian";
        case DistributionKind::uniform: return "uniform";
        case DistributionKind::sphere: return "sphere";
        }
        return "unknown";
    }

    static DistributionSpec parse(const std::string& name) {
        if (name == "gaussian") return gaussian();
        if (name == "uniform") return uniform();
        if (name == "sphere") return sphere();
        throw ConfigError("unknown distribution '" + name + "' (expected gaussian|uniform|sphere)");
    }

private:
    DistributionSpec(DistributionKind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

    DistributionKind kind_;
    double a_;
    double b_;
};

namespace detail {

inline void fill_real(const DistributionSpec& spec, std::span<double> out, CounterRng& rng) {
    switch (spec.kind()) {
    case DistributionKind::uniform:
        for (double& x : out) x = spec.lo() + (spec.hi() - spec.lo()) * rng.uniform01();
        return;
    case DistributionKind::gaussian:
    case DistributionKind::sphere: {
        const double mean = spec.kind() == DistributionKind::gaussian ? spec.mean() : 0.0;
        const double sd = spec.kind() == DistributionKind::gaussian ? spec.stddev() : 1.0;
        std::size_t i = 0;
        for (; i + 1 < out.size(); i += 2) {
            const auto [z0, z1] = rng.normal_pair();
            out[i] = mean + sd * z0;
            out[i + 1] = mean + sd * z1;
        }
        if (i < out.size()) out[i] = mean + sd * rng.normal_pair().first;
        return;
    }
    }
}

} // namespace detail

// One draw of the random vector. Sphere draws are normalized Gaussian draws.
template <Field S>
Vector<S> sample_vector(const DistributionSpec& spec, std::size_t dim, CounterRng& rng);

template <>
inline Vector<double> sample_vector<double>(const DistributionSpec& spec, std::size_t dim, CounterRng& rng) {
    if (dim == 0) throw ConfigError("sample_vector: dimension must be positive");
    Vector<double> v(dim);
    detail::fill_real(spec, v, rng);
    if (spec.kind() == DistributionKind::sphere) {
        double sq = 0.0;
        for (double x : v) sq += x * x;
        const double norm = std::sqrt(sq);
        for (double& x : v) x /= norm;
    }
    return v;
}

template <>
inline Vector<Complex> sample_vector<Complex>(const DistributionSpec& spec, std::size_t dim, CounterRng& rng) {
    if (dim == 0) throw ConfigError("sample_vector: dimension must be positive");
    std::vector<double> parts(2 * dim);
    detail::fill_real(spec, parts, rng);
    Vector<Complex> v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = Complex(parts[2 * i], parts[2 * i + 1]);
    if (spec.kind() == DistributionKind::sphere) {
        double sq = 0.0;
        for (const Complex& x : v) sq += std::norm(x);
        const double norm = std::sqrt(sq);
        for (Complex& x : v) x /= norm;
    }
    return v;
}

// `count` sequential draws from the same stream.
template <Field S>
IterateSet<S> sample_iterates(const DistributionSpec& spec, std::size_t dim, std::size_t count, CounterRng& rng) {
    if (count < dim + 1) {
        throw ConfigError("need at least n+1 = " + std::to_string(dim + 1) + " iterates, got " +
                          std::to_string(count));
    }
    IterateSet<S> set(count, dim);
    for (std::size_t l = 0; l < count; ++l) {
        const Vector<S> v = sample_vector<S>(spec, dim, rng);
        std::copy(v.begin(), v.end(), set[l].begin());
    }
    return set;
}

} // namespace recomb
