#pragma once

#include <algorithm>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "recomb/errors.hpp"
#include "recomb/flops.hpp"
#include "recomb/scalar.hpp"

namespace recomb {

template <Field S>
using Vector = std::vector<S>;

// Row-major dense m x n matrix.
template <Field S>
class DenseMatrix {
public:
    using value_type = S;

    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
        if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
    }

    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<S> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
        if (data_.size() != rows * cols) throw DimensionError("entry count does not match m*n");
    }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix a(n, n);
        for (std::size_t i = 0; i < n; ++i) a(i, i) = S{1.0};
        return a;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    S& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<const S> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<S> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    std::span<const S> entries() const noexcept { return data_; }

    Vector<S> multiply(std::span<const S> x) const {
        if (x.size() != cols_) throw DimensionError("matrix-vector product: length mismatch");
        Vector<S> y(rows_);
        for (std::size_t i = 0; i < rows_; ++i) y[i] = counted_row_product<S>(row(i), x, nullptr);
        return y;
    }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<S> data_;
};

// A linear system A x = b with matching dimensions.
template <Field S>
struct LinearSystem {
    DenseMatrix<S> matrix;
    Vector<S> rhs;
};

// The solver's only view of a system: the action v -> a_k^T v of each row and
// the right-hand entries b_k. Rows are 0-based. Implementations must be safe to
// call concurrently from many threads.
template <Field S>
class RowOracle {
public:
    virtual ~RowOracle() = default;

    virtual std::size_t row_count() const = 0;
    virtual std::size_t dim() const = 0;
    virtual S row_action(std::size_t k, std::span<const S> v, FlopCounter* counter) const = 0;
    virtual S rhs_entry(std::size_t k) const = 0;

    S row_action(std::size_t k, std::span<const S> v) const { return row_action(k, v, nullptr); }

    double rhs_norm_inf() const {
        double r = 0.0;
        for (std::size_t k = 0; k < row_count(); ++k) r = std::max(r, magnitude(rhs_entry(k)));
        return r;
    }
};

template <Field S>
class DenseRowOracle final : public RowOracle<S> {
public:
    DenseRowOracle(DenseMatrix<S> a, Vector<S> b) : a_(std::move(a)), b_(std::move(b)) {
        if (a_.rows() != b_.size()) {
            throw DimensionError("row count " + std::to_string(a_.rows()) + " does not match rhs length " +
                                 std::to_string(b_.size()));
        }
    }

    std::size_t row_count() const override { return a_.rows(); }
    std::size_t dim() const override { return a_.cols(); }

    using RowOracle<S>::row_action;
    S row_action(std::size_t k, std::span<const S> v, FlopCounter* counter) const override {
        check_row(k);
        return counted_row_product<S>(a_.row(k), v, counter);
    }

    S rhs_entry(std::size_t k) const override {
        check_row(k);
        return b_[k];
    }

    const DenseMatrix<S>& matrix() const noexcept { return a_; }
    const Vector<S>& rhs() const noexcept { return b_; }

private:
    void check_row(std::size_t k) const {
        if (k >= a_.rows()) throw DimensionError("row index " + std::to_string(k) + " out of range");
    }

    DenseMatrix<S> a_;
    Vector<S> b_;
};

// Matrix-free oracle backed by callables. The action callable must be linear in v
// and thread-safe; it may report its own cost through the counter.
template <Field S>
class FunctionRowOracle final : public RowOracle<S> {
public:
    using Action = std::function<S(std::size_t, std::span<const S>, FlopCounter*)>;
    using Rhs = std::function<S(std::size_t)>;

    FunctionRowOracle(std::size_t rows, std::size_t dim, Action action, Rhs rhs)
        : rows_(rows), dim_(dim), action_(std::move(action)), rhs_(std::move(rhs)) {
        if (rows == 0 || dim == 0) throw DimensionError("oracle dimensions must be positive");
    }

    std::size_t row_count() const override { return rows_; }
    std::size_t dim() const override { return dim_; }

    using RowOracle<S>::row_action;
    S row_action(std::size_t k, std::span<const S> v, FlopCounter* counter) const override {
        if (v.size() != dim_) throw DimensionError("row action: vector length mismatch");
        return action_(k, v, counter);
    }

    S rhs_entry(std::size_t k) const override { return rhs_(k); }

private:
    std::size_t rows_;
    std::size_t dim_;
    Action action_;
    Rhs rhs_;
};

template <Field S>
std::shared_ptr<const DenseRowOracle<S>> oracle_from_dense(DenseMatrix<S> a, Vector<S> b) {
    return std::make_shared<const DenseRowOracle<S>>(std::move(a), std::move(b));
}

// max_k |a_k^T x - b_k| over the first `rows` rows (all rows by default).
template <Field S>
double residual_inf(const RowOracle<S>& oracle, std::span<const S> x, std::size_t rows = SIZE_MAX) {
    if (x.size() != oracle.dim()) throw DimensionError("residual: vector length mismatch");
    rows = std::min(rows, oracle.row_count());
    double worst = 0.0;
    for (std::size_t k = 0; k < rows; ++k) {
        worst = std::max(worst, magnitude(oracle.row_action(k, x) - oracle.rhs_entry(k)));
    }
    return worst;
}

template <Field S>
double residual_inf(const DenseMatrix<S>& a, std::span<const S> b, std::span<const S> x) {
    if (a.rows() != b.size()) throw DimensionError("residual: rhs length mismatch");
    if (a.cols() != x.size()) throw DimensionError("residual: vector length mismatch");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.rows(); ++k) {
        worst = std::max(worst, magnitude(counted_row_product<S>(a.row(k), x, nullptr) - b[k]));
    }
    return worst;
}

template <Field S>
double norm_inf(std::span<const S> x) {
    double r = 0.0;
    for (const S& xi : x) r = std::max(r, magnitude(xi));
    return r;
}

} // namespace recomb
