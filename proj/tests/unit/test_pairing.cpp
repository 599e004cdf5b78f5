#include "doctest.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "recomb/pairing.hpp"

using namespace recomb;

namespace {

std::set<IndexPair> as_set(const PairSchedule& s) { return {s.pairs.begin(), s.pairs.end()}; }

void check_well_formed(const PairSchedule& s, std::size_t l) {
    for (const auto& [i, j] : s.pairs) {
        CHECK(i < j);
        CHECK(j < l);
    }
}

// Degree of every vertex and whether the edges form one closed cycle over all of them.
bool is_hamiltonian_cycle(const PairSchedule& s, std::size_t l) {
    if (s.size() != l) return false;
    std::vector<std::vector<std::size_t>> adj(l);
    for (const auto& [i, j] : s.pairs) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    for (const auto& a : adj) {
        if (a.size() != 2) return false;
    }
    std::size_t prev = l, cur = 0, steps = 0;
    do {
        const std::size_t next = adj[cur][0] != prev ? adj[cur][0] : adj[cur][1];
        prev = cur;
        cur = next;
        ++steps;
    } while (cur != 0 && steps <= l);
    return steps == l;
}

} // namespace

TEST_CASE("three iterates, three pairs: every pair once") {
    CounterRng rng(1);
    const auto s = choose_pairs(rng, 3, 3);
    CHECK(as_set(s) == std::set<IndexPair>{{0, 1}, {0, 2}, {1, 2}});
}

TEST_CASE("two iterates force a duplicate") {
    CounterRng rng(1);
    const auto s = choose_pairs(rng, 2, 2);
    CHECK(s.pairs == std::vector<IndexPair>{{0, 1}, {0, 1}});
}

TEST_CASE("eleven pairs out of ten iterates are distinct and reproducible") {
    CounterRng a(3), b(3);
    const auto s = choose_pairs(a, 10, 11);
    CHECK(s.size() == 11);
    CHECK(as_set(s).size() == 11);
    check_well_formed(s, 10);
    CHECK(choose_pairs(b, 10, 11).pairs == s.pairs);
}

TEST_CASE("beyond C(L,2) every pair still appears") {
    CounterRng rng(4);
    const auto s = choose_pairs(rng, 4, 9);
    CHECK(s.size() == 9);
    CHECK(as_set(s).size() == 6);
}

TEST_CASE("uniform pair draws are roughly uniform") {
    CounterRng rng(5);
    std::map<IndexPair, int> hits;
    const int draws = 20000;
    for (int k = 0; k < draws; ++k) ++hits[choose_pairs(rng, 5, 1)[0]];
    CHECK(hits.size() == 10);
    for (const auto& [p, c] : hits) CHECK(std::abs(c - draws / 10) < 300);
}

TEST_CASE("bad arguments are rejected") {
    CounterRng rng(1);
    CHECK_THROWS_AS(choose_pairs(rng, 1, 1), ConfigError);
    CHECK_THROWS_AS(choose_pairs(rng, 4, 0), ConfigError);
    CHECK_THROWS_AS(parse_pairing_rule("triangle"), ConfigError);
}

TEST_CASE("random cycle visits every iterate twice") {
    CounterRng rng(6);
    for (std::size_t l : {3, 4, 9, 33}) {
        const auto s = random_cycle_pairs(rng, l, l);
        check_well_formed(s, l);
        CHECK(is_hamiltonian_cycle(s, l));
    }
}

TEST_CASE("fewer edges than iterates give a path") {
    const std::vector<std::size_t> order{4, 2, 0, 1, 3};
    const auto s = cycle_pairs_from_order(order, 3);
    CHECK(s.pairs == std::vector<IndexPair>{{2, 4}, {0, 2}, {0, 1}});
}

TEST_CASE("balanced order is a permutation with minimal same-side edges") {
    CounterRng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t l = 2 + rng.below(40);
        std::vector<double> r(l);
        for (double& x : r) x = rng.uniform01() - 0.3;
        const auto order = balanced_cycle_order<double>(r, rng);
        std::vector<std::size_t> sorted = order;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::size_t> expect(l);
        std::iota(expect.begin(), expect.end(), std::size_t{0});
        REQUIRE(sorted == expect);

        const std::size_t negatives = std::count_if(r.begin(), r.end(), [](double x) { return x < 0.0; });
        const std::size_t major = std::max(negatives, l - negatives);
        const std::size_t minor = l - major;
        std::size_t same_side = 0;
        for (std::size_t e = 0; e < l; ++e) {
            const bool a = r[order[e]] < 0.0, b = r[order[(e + 1) % l]] < 0.0;
            same_side += a == b;
        }
        // Each minor vertex separates two runs of the major side.
        CHECK(same_side == (minor == 0 ? l : major - minor));
    }
}

TEST_CASE("balanced schedule on complex residuals is a Hamiltonian cycle") {
    CounterRng rng(8);
    std::vector<Complex> r(12);
    for (auto& z : r) z = Complex(rng.uniform01(), rng.uniform01());
    const auto s = select_pairs<Complex>(PairingRule::balanced, r, rng, r.size());
    CHECK(is_hamiltonian_cycle(s, r.size()));
}

TEST_CASE("select_pairs dispatches every rule") {
    std::vector<double> r{1, -1, 2, -2, 3};
    for (PairingRule rule : {PairingRule::balanced, PairingRule::cycle, PairingRule::uniform}) {
        CounterRng rng(9);
        const auto s = select_pairs<double>(rule, r, rng, 5);
        CHECK(s.size() == 5);
        check_well_formed(s, 5);
        CHECK(parse_pairing_rule(to_string(rule)) == rule);
    }
}
