#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "recomb/errors.hpp"
#include "recomb/random.hpp"
#include "recomb/scalar.hpp"

namespace recomb {

// How the pairs of iterates are chosen in each outer step.
//
//   uniform   distinct pairs drawn uniformly from all C(L,2) pairs.
//   cycle     the edges of a uniformly random Hamiltonian cycle.
//   balanced  a randomized Hamiltonian cycle that alternates between iterates
//             on opposite sides of the current hyperplane, so most outputs are
//             convex combinations.
//
// Pair sets containing short cycles (triangles in particular) make some
// outputs collinear, and those collapse into identical vectors a step or two
// later. A Hamiltonian cycle has no short cycles, which is why the default
// rules are cycle based.
enum class PairingRule { balanced, cycle, uniform };

inline std::string to_string(PairingRule rule) {
    switch (rule) {
    case PairingRule::balanced: return "balanced";
    case PairingRule::cycle: return "cycle";
    case PairingRule::uniform: return "uniform";
    }
    return "unknown";
}

inline PairingRule parse_pairing_rule(const std::string& name) {
    if (name == "balanced") return PairingRule::balanced;
    if (name == "cycle") return PairingRule::cycle;
    if (name == "uniform") return PairingRule::uniform;
    throw ConfigError("unknown pairing rule '" + name + "' (expected balanced|cycle|uniform)");
}

using IndexPair = std::pair<std::size_t, std::size_t>;

// Ordered list of 0-based index pairs (i < j); slot l of the next generation
// is the recombination of pairs[l].
struct PairSchedule {
    std::vector<IndexPair> pairs;

    std::size_t size() const noexcept { return pairs.size(); }
    const IndexPair& operator[](std::size_t l) const { return pairs[l]; }
};

inline IndexPair ordered_pair(std::size_t a, std::size_t b) noexcept {
    return a < b ? IndexPair{a, b} : IndexPair{b, a};
}

inline std::uint64_t pair_count(std::size_t l) noexcept {
    return static_cast<std::uint64_t>(l) * (l - 1) / 2;
}

namespace detail {

// q-th pair in lexicographic order of {(i, j) : 0 <= i < j < L}.
inline IndexPair decode_pair(std::uint64_t q, std::size_t l) {
    std::size_t i = 0;
    for (;;) {
        const std::uint64_t row = l - 1 - i;
        if (q < row) return {i, i + 1 + static_cast<std::size_t>(q)};
        q -= row;
        ++i;
    }
}

} // namespace detail

// `count` pairs sampled uniformly without replacement while count <= C(L,2).
// Beyond that every pair is used once and the remainder is drawn with
// replacement (for L = 2 the single pair repeats).
inline PairSchedule choose_pairs(CounterRng& rng, std::size_t l, std::size_t count) {
    if (l < 2) throw ConfigError("choose_pairs: need at least two iterates");
    if (count == 0) throw ConfigError("choose_pairs: count must be positive");
    const std::uint64_t total = pair_count(l);

    PairSchedule schedule;
    schedule.pairs.reserve(count);
    if (count <= total) {
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(count * 2);
        while (schedule.size() < count) {
            const std::uint64_t q = rng.below(total);
            if (seen.insert(q).second) schedule.pairs.push_back(detail::decode_pair(q, l));
        }
        return schedule;
    }

    std::vector<std::uint64_t> all(total);
    std::iota(all.begin(), all.end(), std::uint64_t{0});
    rng.shuffle(std::span<std::uint64_t>(all));
    for (std::uint64_t q : all) schedule.pairs.push_back(detail::decode_pair(q, l));
    while (schedule.size() < count) schedule.pairs.push_back(detail::decode_pair(rng.below(total), l));
    return schedule;
}

// First `count` edges of the closed walk order[0] -> order[1] -> ... -> order[0].
// count < L gives a path, which is all the reduced-update variant needs.
inline PairSchedule cycle_pairs_from_order(std::span<const std::size_t> order, std::size_t count) {
    const std::size_t l = order.size();
    if (l < 2) throw ConfigError("cycle: need at least two iterates");
    PairSchedule schedule;
    schedule.pairs.reserve(count);
    for (std::size_t e = 0; e < count; ++e) {
        schedule.pairs.push_back(ordered_pair(order[e % l], order[(e + 1) % l]));
    }
    return schedule;
}

inline PairSchedule random_cycle_pairs(CounterRng& rng, std::size_t l, std::size_t count) {
    std::vector<std::size_t> order(l);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(order));
    return cycle_pairs_from_order(order, count);
}

// Visiting order for the balanced rule. Iterates are split by the sign of their
// residual r = a^T v - beta (complex residuals have no sign and form one group).
// The larger group is laid out alternating between its smaller-|r| and
// larger-|r| halves, so same-side neighbours extrapolate as little as possible,
// then cut into runs separated by members of the smaller group. Linear time.
template <Field S>
std::vector<std::size_t> balanced_cycle_order(std::span<const S> residuals, CounterRng& rng) {
    const std::size_t l = residuals.size();
    std::vector<std::size_t> major;
    std::vector<std::size_t> minor;
    major.reserve(l);
    for (std::size_t i = 0; i < l; ++i) {
        if constexpr (is_complex_v<S>) {
            major.push_back(i);
        } else {
            (residuals[i] < 0.0 ? minor : major).push_back(i);
        }
    }
    if (minor.size() > major.size()) std::swap(minor, major);

    const std::size_t half = (major.size() + 1) / 2;
    auto by_magnitude = [&](std::size_t a, std::size_t b) {
        const double ma = magnitude(residuals[a]);
        const double mb = magnitude(residuals[b]);
        return ma < mb || (ma == mb && a < b);
    };
    if (half < major.size()) {
        std::nth_element(major.begin(), major.begin() + static_cast<std::ptrdiff_t>(half), major.end(),
                         by_magnitude);
    }
    std::span<std::size_t> small(major.data(), half);
    std::span<std::size_t> large(major.data() + half, major.size() - half);
    rng.shuffle(small);
    rng.shuffle(large);

    std::vector<std::size_t> sequence;
    sequence.reserve(major.size());
    for (std::size_t q = 0; q < half; ++q) {
        sequence.push_back(small[q]);
        if (q < large.size()) sequence.push_back(large[q]);
    }
    if (minor.empty()) return sequence;

    rng.shuffle(std::span<std::size_t>(minor));

    // minor.size() - 1 distinct cut points among the interior gaps 1..M-1.
    const std::size_t m = sequence.size();
    std::vector<std::size_t> gaps(m - 1);
    std::iota(gaps.begin(), gaps.end(), std::size_t{1});
    const std::size_t cuts = minor.size() - 1;
    for (std::size_t c = 0; c < cuts; ++c) {
        const std::size_t pick = c + static_cast<std::size_t>(rng.below(gaps.size() - c));
        std::swap(gaps[c], gaps[pick]);
    }
    std::vector<char> is_cut(m + 1, 0);
    for (std::size_t c = 0; c < cuts; ++c) is_cut[gaps[c]] = 1;

    std::vector<std::size_t> order;
    order.reserve(l);
    std::size_t next_minor = 0;
    order.push_back(minor[next_minor++]);
    for (std::size_t p = 0; p < m; ++p) {
        if (is_cut[p]) order.push_back(minor[next_minor++]);
        order.push_back(sequence[p]);
    }
    return order;
}

template <Field S>
PairSchedule select_pairs(PairingRule rule, std::span<const S> residuals, CounterRng& rng, std::size_t count) {
    const std::size_t l = residuals.size();
    switch (rule) {
    case PairingRule::uniform: return choose_pairs(rng, l, count);
    case PairingRule::cycle: return random_cycle_pairs(rng, l, count);
    case PairingRule::balanced: {
        const std::vector<std::size_t> order = balanced_cycle_order<S>(residuals, rng);
        return cycle_pairs_from_order(order, count);
    }
    }
    throw ConfigError("unknown pairing rule");
}

} // namespace recomb
