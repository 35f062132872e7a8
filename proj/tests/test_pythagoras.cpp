#include <doctest.h>

#include <numeric>

#include "bpc/error.hpp"
#include "bpc/pythagoras.hpp"

using namespace bpc;

TEST_CASE("admissibility")
{
    CHECK(ParamPair::admissible(2, 1));
    CHECK_FALSE(ParamPair::admissible(3, 1));  // both odd
    CHECK_FALSE(ParamPair::admissible(4, 2));  // common factor
    CHECK_FALSE(ParamPair::admissible(2, 2));
    CHECK_FALSE(ParamPair::admissible(1, 0));
    CHECK_THROWS_AS(ParamPair::make(5, 3), DomainError);
}

TEST_CASE("triple from (3,2)")
{
    auto t = triple_from(ParamPair::make(3, 2), 1);
    CHECK(t.leg_even == 12);
    CHECK(t.leg_odd == 5);
    CHECK(t.hypotenuse == 13);
    CHECK(t.primitive());
    auto t3 = triple_from(ParamPair::make(3, 2), 3);
    CHECK(t3.hypotenuse == 39);
    CHECK_FALSE(t3.primitive());
}

TEST_CASE("pair stream length matches a brute count")
{
    for (std::uint64_t pm : {1ull, 2ull, 10ull, 57ull, 300ull}) {
        std::uint64_t brute = 0;
        for (std::uint64_t p = 2; p <= pm; ++p)
            for (std::uint64_t q = 1; q < p; ++q)
                if ((p + q) % 2 == 1 && std::gcd(p, q) == 1) ++brute;
        PairStream s(pm);
        std::uint64_t n = 0;
        std::optional<ParamPair> prev;
        while (auto pp = s.next()) {
            if (prev) CHECK(*prev < *pp);
            prev = pp;
            ++n;
        }
        CHECK(n == brute);
        CHECK(count_admissible(pm) == brute);
    }
}

TEST_CASE("pair stream has 202861 pairs up to 1000")
{
    CHECK(count_admissible(1000) == 202861);
    PairStream s(1000);
    std::uint64_t n = 0;
    while (s.next()) ++n;
    CHECK(n == 202861);
}

TEST_CASE("pair stream resumes after the cursor")
{
    PairStream all(40);
    std::vector<ParamPair> full;
    while (auto pp = all.next()) full.push_back(*pp);
    PairStream tail(40, full[100]);
    std::vector<ParamPair> rest;
    while (auto pp = tail.next()) rest.push_back(*pp);
    CHECK(rest == std::vector<ParamPair>(full.begin() + 101, full.end()));
}

TEST_CASE("leg_product_sfp")
{
    CHECK(leg_product_sfp(ParamPair::make(2678, 399)) == Integer("3746496180063"));
    CHECK(leg_product_sfp(ParamPair::make(28798, 28779)) == Integer("3746496180063"));
    CHECK(leg_product_sfp(ParamPair::make(6580798, 386019)) == Integer("3746496180063"));
    CHECK(leg_product_sfp(ParamPair::make(24336, 17689)) == 46);
    // oracle: sfp of the whole product
    for (auto pp : {ParamPair::make(7, 2), ParamPair::make(40, 11), ParamPair::make(99, 70)}) {
        Integer p = pp.p, q = pp.q;
        CHECK(leg_product_sfp(pp) == sfp(Integer(2 * p * q * (p * p - q * q))));
    }
}

TEST_CASE("pair from legs")
{
    auto pp = pair_from_legs(Integer(5), Integer(12));
    REQUIRE(pp);
    CHECK(*pp == ParamPair::make(3, 2));
    CHECK(*pair_from_legs(Integer(24), Integer(10)) == ParamPair::make(3, 2));
    CHECK(*pair_from_legs(Integer(3), Integer(4)) == ParamPair::make(2, 1));
    CHECK_FALSE(pair_from_legs(Integer(2), Integer(3)));
}
