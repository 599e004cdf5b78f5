#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "recomb/generator.hpp"
#include "recomb/random.hpp"

using namespace recomb;

TEST_CASE("same seed, same stream") {
    CounterRng a(42), b(42), c(43);
    for (int i = 0; i < 10; ++i) {
        const auto x = a();
        CHECK(x == b());
        CHECK(x != c());
    }
}

TEST_CASE("child streams are independent of parent position") {
    CounterRng root(5);
    const CounterRng before = root.child({1, 2});
    root();
    root();
    CounterRng after = root.child({1, 2});
    CounterRng copy = before;
    CHECK(copy() == after());
    CHECK(root.child({1, 2}).key() != root.child({2, 1}).key());
    CHECK(root.child({1}).key() != root.child({1, 0}).key());
}

TEST_CASE("below stays in range and covers it") {
    CounterRng rng(9);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const auto x = rng.below(7);
        REQUIRE(x < 7);
        seen.insert(x);
    }
    CHECK(seen.size() == 7);
}

TEST_CASE("gaussian samples have roughly unit moments") {
    CounterRng rng(1);
    const auto v = sample_vector<double>(DistributionSpec::gaussian(), 20001, rng);
    double mean = 0.0, sq = 0.0;
    for (double x : v) {
        mean += x;
        sq += x * x;
    }
    mean /= v.size();
    sq /= v.size();
    CHECK(std::fabs(mean) < 0.05);
    CHECK(std::fabs(sq - 1.0) < 0.05);
}

TEST_CASE("uniform samples respect their bounds") {
    CounterRng rng(2);
    const auto v = sample_vector<double>(DistributionSpec::uniform(-3, 5), 1000, rng);
    for (double x : v) {
        CHECK(x >= -3.0);
        CHECK(x < 5.0);
    }
}

TEST_CASE("sphere samples have unit norm, complex ones too") {
    CounterRng rng(3);
    const auto v = sample_vector<double>(DistributionSpec::sphere(), 17, rng);
    double s = 0.0;
    for (double x : v) s += x * x;
    CHECK(std::sqrt(s) == doctest::Approx(1.0).epsilon(1e-14));
    const auto z = sample_vector<Complex>(DistributionSpec::sphere(), 9, rng);
    double t = 0.0;
    for (const Complex& x : z) t += std::norm(x);
    CHECK(std::sqrt(t) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("distribution specs validate arguments") {
    CHECK_THROWS_AS(DistributionSpec::gaussian(0, 0), ConfigError);
    CHECK_THROWS_AS(DistributionSpec::uniform(1, 1), ConfigError);
    CHECK_THROWS_AS(DistributionSpec::parse("cauchy"), ConfigError);
    CHECK(DistributionSpec::parse("sphere").kind() == DistributionKind::sphere);
}

TEST_CASE("sample_iterates needs at least n+1 vectors") {
    CounterRng rng(4);
    CHECK_THROWS_AS(sample_iterates<double>(DistributionSpec::gaussian(), 3, 3, rng), ConfigError);
    const auto set = sample_iterates<double>(DistributionSpec::gaussian(), 3, 4, rng);
    CHECK(set.size() == 4);
    CHECK(set.dim() == 3);
    CHECK(set.generation() == 0);
}

TEST_CASE("random systems are reproducible and consistent") {
    const auto a = random_system<double>(4, 5, 11);
    const auto b = random_system<double>(4, 5, 11);
    CHECK(a.matrix == b.matrix);
    const std::vector<double> ones(5, 1.0);
    CHECK(residual_inf<double>(a.matrix, a.rhs, ones) == 0.0);
    const auto c = random_system<double>(4, 5, 12);
    CHECK_FALSE(a.matrix == c.matrix);
}

TEST_CASE("row scaling spans the requested ratio") {
    const auto plain = random_system<double>(3, 3, 8);
    const auto scaled = random_system<double>(3, 3, 8, 100.0);
    CHECK(scaled.matrix(0, 0) == plain.matrix(0, 0));
    CHECK(scaled.matrix(2, 1) == doctest::Approx(plain.matrix(2, 1) / 100.0));
    CHECK_THROWS_AS(random_system<double>(3, 3, 8, 0.5), ConfigError);
}
