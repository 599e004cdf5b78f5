#include "doctest.h"

#include <vector>

#include "recomb/linop.hpp"

using namespace recomb;

TEST_CASE("dense matrix construction validates shape") {
    CHECK_THROWS_AS(DenseMatrix<double>(0, 3), DimensionError);
    CHECK_THROWS_AS(DenseMatrix<double>(2, 2, {1, 2, 3}), DimensionError);
    const DenseMatrix<double> a(2, 3, {1, 2, 3, 4, 5, 6});
    CHECK(a(1, 0) == 4);
    CHECK(a.row(1)[2] == 6);
    const std::vector<double> x{1, 0, -1};
    CHECK(a.multiply(x) == std::vector<double>{-2, -2});
}

TEST_CASE("dense oracle exposes rows and rhs") {
    const auto oracle = oracle_from_dense<double>(DenseMatrix<double>::identity(2), {3, 4});
    CHECK(oracle->row_count() == 2);
    CHECK(oracle->dim() == 2);
    const std::vector<double> v{7, 9};
    FlopCounter c;
    CHECK(oracle->row_action(1, v, &c) == 9);
    CHECK(c.total() == 3);
    CHECK(oracle->rhs_entry(0) == 3);
    CHECK(oracle->rhs_norm_inf() == 4);
    CHECK_THROWS_AS(oracle->row_action(2, v), DimensionError);
}

TEST_CASE("dense oracle rejects a rhs of the wrong length") {
    CHECK_THROWS_AS(DenseRowOracle<double>(DenseMatrix<double>::identity(2), {1, 2, 3}), DimensionError);
}

TEST_CASE("function oracle evaluates the callable") {
    // Row k of a 3x3 matrix whose rows are all (1, k, 0).
    FunctionRowOracle<double> oracle(
        3, 3,
        [](std::size_t k, std::span<const double> v, FlopCounter* c) {
            count_muls(c, 1);
            count_adds(c, 1);
            return v[0] + static_cast<double>(k) * v[1];
        },
        [](std::size_t k) { return static_cast<double>(k); });
    const std::vector<double> v{1, 2, 3};
    CHECK(oracle.row_action(2, v) == 5);
    CHECK(oracle.rhs_norm_inf() == 2);
    const std::vector<double> short_v{1};
    CHECK_THROWS_AS(oracle.row_action(0, short_v), DimensionError);
}

TEST_CASE("residual helpers agree") {
    const DenseMatrix<double> a(2, 2, {1, 1, 0, 2});
    const std::vector<double> b{3, 4}, x{1, 2};
    CHECK(residual_inf<double>(a, b, x) == 0.0);
    const DenseRowOracle<double> oracle(a, b);
    const std::vector<double> y{0, 0};
    CHECK(residual_inf<double>(oracle, y) == 4.0);
    CHECK(residual_inf<double>(oracle, y, 1) == 3.0);
}

TEST_CASE("complex oracle is bilinear") {
    const DenseMatrix<Complex> a(1, 1, {Complex(0, 1)});
    const DenseRowOracle<Complex> oracle(a, {Complex(0, 0)});
    const std::vector<Complex> v{Complex(0, 1)};
    CHECK(oracle.row_action(0, v) == Complex(-1, 0));
}
