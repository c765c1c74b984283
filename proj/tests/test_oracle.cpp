#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "shofa/codec_exact.hpp"
#include "shofa/graph.hpp"
#include "shofa/oracle.hpp"
#include "shofa/rng.hpp"
#include "shofa/signal.hpp"

using namespace shofa;

TEST_CASE("brute_2core: empty support has an empty core") {
    const auto g = testfix::toy_graph();
    CHECK(brute_2core_empty(g, {}));
}

TEST_CASE("brute_2core: two nodes sharing all neighbors are a core") {
    const auto g = testfix::toy_graph();
    CHECK_FALSE(brute_2core_empty(g, {1, 4}));
    CHECK(brute_2core_empty(g, {1, 3}));
}

TEST_CASE("brute_2core: budget guard") {
    const auto g = sample_graph(20, 25, 3, 3) /* m' too large */;
    std::vector<std::size_t> sup{0};
    CHECK_THROWS_AS(brute_2core_empty(g, sup), std::invalid_argument);
}

TEST_CASE("peel_2core agrees with the definitional check on random instances") {
    std::size_t agreements = 0;
    for (int s = 0; s < 10000; ++s) {
        Rng rng(derive_seed(41, s));
        const std::size_t n = 4 + rng.next_index(5);
        const std::size_t mp = 3 + rng.next_index(6);
        const auto g = sample_graph(n, mp, 3, derive_seed(42, s));
        std::vector<std::size_t> sup;
        for (std::size_t l = 0; l < n; ++l)
            if (rng.next_double() < 0.5) sup.push_back(l);
        REQUIRE(peel_2core(g, sup).empty_core == brute_2core_empty(g, sup));
        ++agreements;
    }
    CHECK(agreements == 10000);
}

TEST_CASE("brute_force_decode: zero measurements give the unique zero signal") {
    const auto g = sample_graph(10, 6, 3, 50);
    const auto ens = ExactEnsemble::build(g, MatrixMode::Split, 51);
    SparseVector zero;
    zero.length = 10;
    const auto res = brute_force_decode(ens, encode(ens, zero), 2);
    REQUIRE(res.unique);
    CHECK(res.solutions[0].entries.empty());
}

TEST_CASE("brute_force_decode: recovers a scaled basis vector") {
    const auto g = sample_graph(10, 6, 3, 52);
    const auto ens = ExactEnsemble::build(g, MatrixMode::Split, 53);
    SparseVector x;
    x.length = 10;
    x.entries.emplace_back(2, 3.0);
    const auto res = brute_force_decode(ens, encode(ens, x), 1);
    REQUIRE(res.unique);
    REQUIRE(res.solutions[0].entries.size() == 1);
    CHECK(res.solutions[0].entries[0].first == 2);
    CHECK(res.solutions[0].entries[0].second == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("brute_force_decode: budget guard") {
    std::vector<std::vector<double>> matrix(4, std::vector<double>(17, 0.0));
    std::vector<double> y(4, 0.0);
    CHECK_THROWS_AS(brute_force_decode(matrix, y, 2), std::invalid_argument);
}

TEST_CASE("oracle cross-validation: peeling decode matches exhaustive search") {
    std::size_t successes = 0;
    for (int s = 0; s < 500; ++s) {
        const auto g = sample_graph(12, 7, 3, derive_seed(61, s));
        const auto ens = ExactEnsemble::build(g, MatrixMode::Split, derive_seed(62, s));
        const auto x =
            make_sparse_signal(12, 2, ValueDist::uniform(0.5, 2.0), derive_seed(63, s));
        const auto y = encode(ens, x);
        const auto rep = decode(ens, y, derive_seed(64, s), 20);
        const auto oracle = brute_force_decode(ens, y, 2);
        if (rep.status != DecodeStatus::Success || !oracle.unique) continue;
        ++successes;
        const auto& sol = oracle.solutions[0];
        REQUIRE(sol.entries.size() == rep.xhat.entries.size());
        for (std::size_t t = 0; t < sol.entries.size(); ++t) {
            CHECK(sol.entries[t].first == rep.xhat.entries[t].first);
            CHECK(std::abs(sol.entries[t].second - rep.xhat.entries[t].second) <= 1e-8);
        }
    }
    CHECK(successes >= 350);
}
