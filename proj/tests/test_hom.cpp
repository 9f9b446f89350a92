#include "loopcond/algebra.hpp"
#include "loopcond/condition.hpp"
#include "loopcond/error.hpp"
#include "loopcond/hom.hpp"
#include "loopcond/indicator.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace loopcond;

namespace
{
    auto random_relation(std::mt19937 & rng, std::size_t domain, std::size_t arity, std::size_t count) -> Relation
    {
        std::vector<Tuple> tuples;
        for (std::size_t i = 0; i < count; ++i) {
            Tuple t(arity);
            for (auto & e : t)
                e = Element(rng() % domain);
            tuples.push_back(t);
        }
        return Relation(domain, arity, tuples);
    }
}

TEST_CASE("cliques have every non-constant tuple")
{
    CHECK(make_clique(3, 2).size() == 6);
    CHECK(make_clique(2, 3).size() == 6);
    CHECK(make_clique(4, 3).size() == 60);
    CHECK_FALSE(find_loop(make_clique(4, 2)));
    CHECK_THROWS_AS(make_clique(1, 2), InputError);
    Relation looped(2, 2, {{0, 1}, {1, 1}});
    CHECK(find_loop(looped) == Element(1));
}

TEST_CASE("clique homomorphisms follow the chromatic order")
{
    for (std::size_t m = 2; m <= 3; ++m)
        for (std::size_t k = 2; k <= 4; ++k) {
            CHECK(find_hom(make_clique(k, m), make_clique(k + 1, m)));
            CHECK_FALSE(find_hom(make_clique(k + 1, m), make_clique(k, m), true));
        }
    CHECK_FALSE(find_hom(make_clique(4, 2), make_clique(3, 2)));
    // tuples like (a,a,b) force every pair of points apart
    CHECK_FALSE(find_hom(make_clique(3, 3), make_clique(2, 3)));
}

TEST_CASE("returned maps are homomorphisms and agree with exhaustive search")
{
    std::mt19937 rng(2024);
    for (int round = 0; round < 300; ++round) {
        std::size_t arity = 1 + rng() % 3;
        auto a = random_relation(rng, 1 + rng() % 4, arity, rng() % 8);
        auto b = random_relation(rng, 1 + rng() % 4, arity, rng() % 12);
        for (bool injective : {false, true}) {
            HomSearchStats stats;
            auto h = find_hom(a, b, injective, &stats);
            CHECK(h.has_value() == oracle::hom_exists(a, b, injective));
            if (h) {
                CHECK(is_hom(a, b, *h));
                if (injective)
                    CHECK(is_injective(*h));
            }
        }
    }
}

TEST_CASE("homomorphism edge cases")
{
    CHECK_THROWS_AS(find_hom(make_clique(2, 2), make_clique(2, 3)), InputError);
    Relation empty_src(0, 2, {});
    CHECK(find_hom(empty_src, make_clique(2, 2)) == HomMap{});
    Relation no_tuples(3, 2, {});
    auto h = find_hom(no_tuples, make_clique(2, 2));
    REQUIRE(h);
    CHECK(h->size() == 3);
    Relation nowhere(0, 2, {});
    CHECK_FALSE(find_hom(no_tuples, nowhere));
    CHECK(compose(HomMap{1, 0}, HomMap{2, 3}) == HomMap{3, 2});
    CHECK_FALSE(is_hom(make_clique(3, 2), make_clique(3, 2), HomMap{0, 0, 1}));
}

TEST_CASE("implication between clique conditions")
{
    auto l4 = condition_of(make_clique(4, 2));
    auto l5 = condition_of(make_clique(5, 2));
    auto l3 = condition_of(make_clique(3, 2));
    HomSearchStats stats;
    CHECK(implies_by_hom(l4, l5, &stats));
    CHECK(stats.nodes > 0);
    CHECK_FALSE(implies_by_hom(l4, l3));
    CHECK_THROWS_AS(implies_by_hom(l4, condition_of(make_clique(3, 3))), InputError);
}

TEST_CASE("transported witnesses verify on the target condition")
{
    auto min2 = FiniteAlgebra(2, {make_operation("s", 2, 2, [] (std::span<const Element> a) {
        return std::min(a[0], a[1]);
    })});
    auto comm = parse_condition("f(x,y) = f(y,x)");
    auto k3 = condition_of(make_clique(3, 2));
    auto witness = satisfies(min2, comm);
    REQUIRE(witness);
    auto hom = implies_by_hom(comm, k3);
    REQUIRE(hom);
    auto moved = transport_witness(comm, k3, *hom, *witness);
    CHECK(moved.arity() == k3.arity());
    CHECK(verify_witness(min2, k3, moved));
    CHECK_THROWS_AS(transport_witness(comm, k3, HomMap{0, 0}, *witness), InputError);
}
