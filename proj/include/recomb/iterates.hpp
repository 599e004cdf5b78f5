#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "recomb/scalar.hpp"

namespace recomb {

// L vectors of dimension n stored row-major; `generation` counts completed
// outer steps.
template <Field S>
class IterateSet {
public:
    IterateSet() = default;
    IterateSet(std::size_t count, std::size_t dim, std::size_t generation = 0)
        : count_(count), dim_(dim), generation_(generation), data_(count * dim) {}

    std::size_t size() const noexcept { return count_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t generation() const noexcept { return generation_; }
    void set_generation(std::size_t g) noexcept { generation_ = g; }

    std::span<const S> operator[](std::size_t l) const { return {data_.data() + l * dim_, dim_}; }
    std::span<S> operator[](std::size_t l) { return {data_.data() + l * dim_, dim_}; }

    std::span<const S> raw() const noexcept { return data_; }

    friend bool operator==(const IterateSet&, const IterateSet&) = default;

private:
    std::size_t count_ = 0;
    std::size_t dim_ = 0;
    std::size_t generation_ = 0;
    std::vector<S> data_;
};

} // namespace recomb
