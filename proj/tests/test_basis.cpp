#include <doctest.h>

#include <algorithm>
#include <bit>
#include <numeric>

#include "oracles.hpp"
#include "stuckelberg/basis.hpp"

using namespace stuckelberg;

TEST_CASE("three-site blockade basis")
{
    const auto b = enumerate_basis(3, ConstraintKind::nn_blockade, chain_adjacency(3, 1));
    REQUIRE(b.size() == 5);
    const std::vector<Config> expected{0b000, 0b001, 0b010, 0b100, 0b101};
    CHECK(std::equal(b.configs().begin(), b.configs().end(), expected.begin()));
}

TEST_CASE("unconstrained two sites")
{
    const auto b = enumerate_basis(2, ConstraintKind::unconstrained, {});
    CHECK(b.size() == 4);
    CHECK(b.is_complete());
    CHECK(*b.index_of(3) == 3);
    CHECK_FALSE(b.index_of(4).has_value());
}

TEST_CASE("open-chain blockade dimensions follow D(L) = D(L-1) + D(L-2)")
{
    std::size_t d1 = 2;
    std::size_t d2 = 3;
    for (std::size_t L = 1; L <= 20; ++L) {
        const auto b = enumerate_basis(L, ConstraintKind::nn_blockade, chain_adjacency(L, 1));
        std::size_t expected = 0;
        if (L == 1) expected = d1;
        else if (L == 2) expected = d2;
        else {
            expected = d1 + d2;
            d1 = d2;
            d2 = expected;
        }
        CHECK(b.size() == expected);
        if (L <= 16) CHECK(b.size() == oracle::brute_force_basis(L, chain_adjacency(L, 1)).size());
    }
    CHECK(enumerate_basis(14, ConstraintKind::nn_blockade, chain_adjacency(14, 1)).size() == 987);
}

TEST_CASE("enumeration matches brute force on 2D graphs")
{
    for (auto kind : {GeometryKind::square, GeometryKind::honeycomb}) {
        const auto a = build_geometry(kind, 12, 4.7);
        for (auto c : {ConstraintKind::nn_blockade, ConstraintKind::nnn_blockade}) {
            const auto adj = geometric_adjacency(a, c);
            const auto b = enumerate_basis(12, c, adj);
            const auto ref = oracle::brute_force_basis(12, adj);
            REQUIRE(b.size() == ref.size());
            CHECK(std::equal(b.configs().begin(), b.configs().end(), ref.begin()));
        }
    }
}

TEST_CASE("basis invariants")
{
    const auto adj = chain_adjacency(11, 2);
    const auto b = enumerate_basis(11, ConstraintKind::nnn_blockade, adj);
    CHECK(std::is_sorted(b.configs().begin(), b.configs().end()));
    for (std::size_t k = 0; k < b.size(); ++k) {
        CHECK(check_constraint(b.config(k), adj));
        CHECK(*b.index_of(b.config(k)) == k);
    }
    const auto again = enumerate_basis(11, ConstraintKind::nnn_blockade, adj);
    CHECK(std::equal(b.configs().begin(), b.configs().end(), again.configs().begin()));
}

TEST_CASE("nnn basis is a subset of the nn basis")
{
    for (std::size_t L : {5u, 9u, 13u}) {
        const auto nn = enumerate_basis(L, ConstraintKind::nn_blockade, chain_adjacency(L, 1));
        const auto nnn = enumerate_basis(L, ConstraintKind::nnn_blockade, chain_adjacency(L, 2));
        CHECK(nnn.size() < nn.size());
        for (Config c : nnn.configs()) CHECK(nn.index_of(c).has_value());
    }
}

TEST_CASE("check_constraint examples")
{
    const std::vector<SitePair> adj{{0, 1}, {1, 2}};
    CHECK(check_constraint(0b101, adj));
    CHECK_FALSE(check_constraint(0b011, adj));
    CHECK(check_constraint(0b111, {}));
}

TEST_CASE("reflection pairing")
{
    const auto b = enumerate_basis(3, ConstraintKind::nn_blockade, chain_adjacency(3, 1));
    const auto p = reflection_pairing(b);
    CHECK(b.config(p[*b.index_of(0b001)]) == 0b100);
    CHECK(b.config(p[*b.index_of(0b010)]) == 0b010);
    CHECK(b.config(p[*b.index_of(0b000)]) == 0b000);
    CHECK(b.config(p[*b.index_of(0b101)]) == 0b101);

    const auto big = enumerate_basis(12, ConstraintKind::nn_blockade, chain_adjacency(12, 1));
    const auto q = reflection_pairing(big);
    for (std::size_t k = 0; k < big.size(); ++k) {
        CHECK(q[q[k]] == k);
        CHECK(std::popcount(big.config(q[k])) == std::popcount(big.config(k)));
    }

    const auto lopsided = enumerate_basis(4, ConstraintKind::nn_blockade, std::vector<SitePair>{{0, 1}});
    CHECK_THROWS_AS(reflection_pairing(lopsided), std::invalid_argument);
}

TEST_CASE("basis errors")
{
    CHECK_THROWS_AS(enumerate_basis(0, ConstraintKind::unconstrained, {}), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_basis(3, ConstraintKind::nn_blockade, std::vector<SitePair>{{0, 3}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(enumerate_basis(20, ConstraintKind::unconstrained, {}, 1000), std::length_error);
    CHECK_THROWS_AS(enumerate_basis(30, ConstraintKind::nn_blockade, chain_adjacency(30, 1), 1000), std::length_error);
    CHECK(parse_constraint("pxp") == ConstraintKind::nn_blockade);
    CHECK(parse_constraint("ppxpp") == ConstraintKind::nnn_blockade);
}
