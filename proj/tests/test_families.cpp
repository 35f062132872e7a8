#include <doctest.h>

#include <set>

#include "bpc/cuboid.hpp"
#include "bpc/error.hpp"
#include "bpc/families.hpp"

using namespace bpc;

namespace {

Integer sq(const Integer& v) { return v * v; }

// Seven relations of an edge cuboid; third edge only known squared.
void check_edge_cuboid(const EdgeCuboidRecord& r)
{
    const Integer &e0 = r.integer_edges[0], &e1 = r.integer_edges[1], &c2 = r.third_edge_sq;
    CHECK(sgn(c2) > 0);
    CHECK(sq(r.face_diagonals[0]) == sq(e0) + sq(e1));
    CHECK(sq(r.face_diagonals[1]) == sq(e0) + c2);
    CHECK(sq(r.face_diagonals[2]) == sq(e1) + c2);
    CHECK(sq(r.main_diagonal) == sq(e0) + sq(e1) + c2);
    CHECK(r.perfect_cuboid == is_square(c2));
}

} // namespace

TEST_CASE("T2 at (3,2)")
{
    auto r = t2_family(ParamPair::make(3, 2));
    CHECK(r.integer_edges[0] == 18720);
    CHECK(r.integer_edges[1] == 7800);
    CHECK(r.main_diagonal == 24961);
    CHECK(r.third_edge_sq == 211773121);
    CHECK(r.face_diagonals[0] == 20280);
    CHECK(r.face_diagonals[1] == 23711);
    CHECK(r.face_diagonals[2] == 16511);
    check_edge_cuboid(r);
    // the first printed face diagonal does not match the edges
    REQUIRE(r.discrepancies.size() == 1);
    CHECK(r.discrepancies[0].printed == 17136600);
    CHECK(r.discrepancies[0].derived == 20280);
    CHECK(classify(sq(r.integer_edges[0]), sq(r.integer_edges[1]), r.third_edge_sq).cls == BpcClass::EdgeCuboid);
}

TEST_CASE("T2 admissibility is an exact sign test")
{
    CHECK_FALSE(t2_admissible(ParamPair::make(2, 1)));
    CHECK_THROWS_AS(t2_family(ParamPair::make(2, 1)), DomainError);
    CHECK(t2_admissible(ParamPair::make(3, 2)));
    // oracle: p^4 - q^4 > 4p^3 q or < 4pq^3
    PairStream s(60);
    while (auto pp = s.next()) {
        const Integer p = pp->p, q = pp->q, l = pow(p, 4) - pow(q, 4);
        CHECK(t2_admissible(*pp) == (l > 4 * pow(p, 3) * q || l < 4 * p * pow(q, 3)));
    }
}

TEST_CASE("T5a at (2,1)")
{
    auto r = t5a_family(ParamPair::make(2, 1));
    std::set<Integer> edges(r.integer_edges.begin(), r.integer_edges.end());
    CHECK(edges == std::set<Integer>{1443, 1800});
    CHECK(r.main_diagonal == 2405);
    CHECK(r.third_edge_sq == 461776);
    std::set<Integer> diag(r.face_diagonals.begin(), r.face_diagonals.end());
    CHECK(diag == std::set<Integer>{2307, 1595, 1924});
    CHECK(r.discrepancies.empty());
    check_edge_cuboid(r);
}

TEST_CASE("T5a rejects (4,1)")
{
    CHECK_FALSE(t5a_admissible(ParamPair::make(4, 1)));
    CHECK_THROWS_AS(t5a_family(ParamPair::make(4, 1)), DomainError);
}

TEST_CASE("T5b at (4,1)")
{
    auto r = t5b_family(ParamPair::make(4, 1));
    std::set<Integer> edges(r.integer_edges.begin(), r.integer_edges.end());
    CHECK(edges == std::set<Integer>{552968, 554880});
    CHECK(r.main_diagonal == 1175057);
    CHECK(sq(r.main_diagonal) - sq(r.integer_edges[0]) - sq(r.integer_edges[1]) == r.third_edge_sq);
    check_edge_cuboid(r);
    CHECK_FALSE(t5b_admissible(ParamPair::make(2, 1)));
    CHECK_THROWS_AS(t5b_family(ParamPair::make(2, 1)), DomainError);
}

TEST_CASE("every admissible family member up to p = 200 is an edge cuboid")
{
    PairStream s(200);
    int t2 = 0, t5a = 0, t5b = 0;
    while (auto pp = s.next()) {
        if (t2_admissible(*pp)) check_edge_cuboid(t2_family(*pp)), ++t2;
        if (t5a_admissible(*pp)) check_edge_cuboid(t5a_family(*pp)), ++t5a;
        if (t5b_admissible(*pp)) check_edge_cuboid(t5b_family(*pp)), ++t5b;
    }
    CHECK(t2 > 0);
    CHECK(t5a > 0);
    CHECK(t5b > 0);
}

TEST_CASE("Saunderson bricks")
{
    auto r = saunderson(ParamPair::make(2, 1));
    std::set<Integer> edges(r.edges.begin(), r.edges.end());
    CHECK(edges == std::set<Integer>{240, 44, 117});
    std::set<Integer> diag(r.face_diagonals.begin(), r.face_diagonals.end());
    CHECK(diag == std::set<Integer>{244, 267, 125});
    CHECK(classify(sq(r.edges[0]), sq(r.edges[1]), sq(r.edges[2])).cls == BpcClass::EulerBrick);

    PairStream s(80);
    while (auto pp = s.next()) {
        auto b = saunderson(*pp);
        CHECK(sq(b.face_diagonals[0]) == sq(b.edges[0]) + sq(b.edges[1]));
        CHECK(sq(b.face_diagonals[1]) == sq(b.edges[0]) + sq(b.edges[2]));
        CHECK(sq(b.face_diagonals[2]) == sq(b.edges[1]) + sq(b.edges[2]));
        CHECK(b.main_diagonal_sq == sq(b.edges[0]) + sq(b.edges[1]) + sq(b.edges[2]));
        CHECK_FALSE(is_square(b.main_diagonal_sq));
        CHECK_FALSE(b.perfect_cuboid);
    }
}

TEST_CASE("t3 identity and e never square up to p = 500")
{
    auto r = t3_check(ParamPair::make(3, 2));
    CHECK(r.e == 211773121);
    CHECK(r.e == sq(Integer(24961)) - 4 * Integer(28561) * 3600);
    CHECK(r.identity_ok);
    CHECK_FALSE(r.e_is_square);
    CHECK(t2_family(ParamPair::make(3, 2)).third_edge_sq == r.e);

    PairStream s(500);
    std::size_t n = 0, bad = 0;
    while (auto pp = s.next()) {
        auto c = t3_check(*pp);
        if (!c.identity_ok || c.e_is_square) ++bad;
        // 4xy is the square of 4pq(p^2 - q^2)(p^2 + q^2)^2
        const Integer p = pp->p, q = pp->q;
        const Integer x = pow(p * p + q * q, 4), y = 4 * p * p * q * q * pow(p * p - q * q, 2);
        CHECK(4 * x * y == sq(4 * p * q * (p * p - q * q) * sq(p * p + q * q)));
        ++n;
    }
    CHECK(bad == 0);
    CHECK(n == count_admissible(500));
}
