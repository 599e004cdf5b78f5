#include "doctest.h"

#include <cmath>
#include <vector>

#include "recomb/elimination.hpp"
#include "recomb/generator.hpp"

using namespace recomb;

TEST_CASE("identity") {
    const auto r = gauss_solve<double>(DenseMatrix<double>::identity(2), std::vector<double>{3, 4});
    CHECK(r.x == std::vector<double>{3, 4});
}

TEST_CASE("diagonal") {
    const auto r = gauss_solve<double>(DenseMatrix<double>(2, 2, {2, 0, 0, 4}), std::vector<double>{2, 8});
    CHECK(r.x == std::vector<double>{1, 2});
}

TEST_CASE("permutation forces a row swap") {
    const auto r = gauss_solve<double>(DenseMatrix<double>(2, 2, {0, 1, 1, 0}), std::vector<double>{5, 6});
    CHECK(r.x == std::vector<double>{6, 5});
}

TEST_CASE("repeated row is singular") {
    const DenseMatrix<double> a(3, 3, {1, 2, 3, 4, 5, 6, 1, 2, 3});
    CHECK_THROWS_AS(gauss_solve<double>(a, std::vector<double>{1, 2, 3}), SingularMatrixError);
    const DenseMatrix<double> z(2, 2, {0, 1, 0, 1});
    CHECK_THROWS_AS(gauss_solve<double>(z, std::vector<double>{1, 1}), SingularMatrixError);
}

TEST_CASE("shape errors") {
    CHECK_THROWS_AS(gauss_solve<double>(DenseMatrix<double>(2, 3), std::vector<double>{1, 2}), DimensionError);
    CHECK_THROWS_AS(gauss_solve<double>(DenseMatrix<double>::identity(2), std::vector<double>{1}), DimensionError);
}

TEST_CASE("random well-conditioned systems have small residuals") {
    for (std::size_t n : {4, 16, 64, 128}) {
        const auto sys = random_system<double>(n, n, 1000 + n);
        const auto r = gauss_solve<double>(sys);
        CHECK(residual_inf<double>(sys.matrix, sys.rhs, r.x) <= 1e-9 * n * norm_inf<double>(sys.rhs));
        CHECK(r.pivot_growth >= 1.0);
    }
}

TEST_CASE("flop counts follow the closed forms") {
    // Elimination: per column k (0-based) and row below it, one divide and
    // n-k multiply-add pairs (n-k-1 matrix entries plus the rhs). Back
    // substitution: n divides and n(n-1)/2 multiply-add pairs.
    for (std::uint64_t n : {1, 2, 5, 12}) {
        const auto sys = random_system<double>(n, n, 3);
        const auto r = gauss_solve<double>(sys);
        std::uint64_t madds = n * (n - 1) / 2, divs = n;
        for (std::uint64_t k = 0; k < n; ++k) {
            madds += (n - 1 - k) * (n - k);
            divs += n - 1 - k;
        }
        CHECK(r.multiply_adds == madds);
        CHECK(r.flops.divs == divs);
        CHECK(r.flops.total() == 2 * madds + divs);
    }
}

TEST_CASE("complex systems") {
    const auto sys = random_system<Complex>(10, 10, 5);
    const auto r = gauss_solve<Complex>(sys);
    for (const Complex& x : r.x) CHECK(std::abs(x - Complex(1, 0)) < 1e-10);
}
