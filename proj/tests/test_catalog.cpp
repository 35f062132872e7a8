#include <doctest.h>

#include <random>
#include <set>

#include "bpc/catalog.hpp"
#include "bpc/descent.hpp"
#include "bpc/error.hpp"

using namespace bpc;

namespace {

using Coeffs = std::array<Rational, 3>;

// The polynomials exactly as they are printed, expanded by hand here.
Coeffs printed(CurveId id, const Integer& p, const Integer& q)
{
    const Integer p2 = p * p, q2 = q * q, a = p2 - q2, b = 2 * p * q, d = p2 + q2, s = a + b;
    switch (id) {
    case CurveId::EF1: return {Rational(d * d), Rational(4 * p2 * q2 * a * a), 0};
    case CurveId::EF2: return {Rational(pow(a, 4) + 16 * p2 * p2 * q2 * q2), Rational(pow(a, 4) * 16 * p2 * p2 * q2 * q2), 0};
    case CurveId::EF3: return {Rational(a * a + s * s), Rational(a * a * s * s), 0};
    case CurveId::EF4: return {Rational(4 * p2 * q2 + s * s), Rational(4 * p2 * q2 * s * s), 0};
    case CurveId::EI1: {
        const Integer r = 8 * p2 * q2 * (p2 * p2 + q2 * q2);
        return {Rational(r - pow(a, 4)), Rational(-pow(a, 4) * r), 0};
    }
    case CurveId::EI2: {
        const Integer b4 = pow(b, 4), r = pow(d, 4) - b4;
        return {Rational(r - b4), Rational(-b4 * r), 0};
    }
    case CurveId::EI3: return {Rational(-2 * (p2 * p2 + q2 * q2)), Rational(pow(p2 * p2 - q2 * q2, 2)), 0};
    case CurveId::EI4: return {Rational(-(d * d + 4 * p2 * q2)), Rational(4 * p2 * q2 * d * d), 0};
    default: throw std::logic_error("no printed form");
    }
}

CatalogCurve build(CurveId id, const ParamPair& pp)
{
    const int i = static_cast<int>(id);
    return i < 4 ? ef_curve(i + 1, pp) : ei_curve(i - 3, pp);
}

} // namespace

TEST_CASE("catalog coefficients match the printed polynomials on 50 pairs")
{
    std::mt19937_64 rng(3);
    int n = 0;
    while (n < 50) {
        std::uint64_t p = 2 + rng() % 300, q = 1 + rng() % (p - 1);
        if (!ParamPair::admissible(p, q)) continue;
        ++n;
        auto pp = ParamPair::make(p, q);
        for (auto id : {CurveId::EF1, CurveId::EF2, CurveId::EF3, CurveId::EF4, CurveId::EI1, CurveId::EI2, CurveId::EI3,
                        CurveId::EI4}) {
            CHECK_MESSAGE(build(id, pp).curve.coefficients() == printed(id, Integer(p), Integer(q)),
                          curve_id_name(id) << " at " << pp.str());
        }
    }
}

TEST_CASE("catalog at (2,1)")
{
    auto pp = ParamPair::make(2, 1);
    CHECK(ef_curve(1, pp).curve.coefficients() == Coeffs{25, 144, 0});
    CHECK(ef_curve(2, pp).curve.coefficients() == Coeffs{337, 20736, 0});
    auto r3 = ef_curve(3, pp).curve.roots();
    CHECK(std::set<Rational>(r3.begin(), r3.end()) == std::set<Rational>{0, -9, -49});
    CHECK(ei_curve(3, pp).curve.coefficients() == Coeffs{-34, 225, 0});
    auto r1 = ei_curve(1, pp).curve.roots();
    CHECK(std::set<Rational>(r1.begin(), r1.end()) == std::set<Rational>{0, 81, -544});
    auto r2 = ei_curve(2, pp).curve.roots();
    CHECK(std::set<Rational>(r2.begin(), r2.end()) == std::set<Rational>{0, 256, -369});
}

TEST_CASE("EF2 torsion at a^2 b^2")
{
    for (auto pp : {ParamPair::make(2, 1), ParamPair::make(5, 2), ParamPair::make(8, 3)}) {
        auto cc = ef_curve(2, pp);
        const Integer ab = pp.odd_leg() * pp.even_leg();
        bool found = false;
        for (auto& t : torsion_points(cc.curve))
            if (!t.infinity && t.x == Rational(ab * ab)) found = true;
        CHECK(found);
    }
}

TEST_CASE("congruent curves")
{
    auto c6 = congruent_curve(6);
    CHECK(c6.curve.coefficients() == Coeffs{0, -36, 0});
    CHECK(on_curve(c6.curve, CurvePoint::affine(12, 36)));
    CHECK(two_descent(congruent_curve(1).curve).status == RankStatus::RankZeroCertified);
    CHECK_THROWS_AS(congruent_curve(4), DomainError);
    CHECK(c6.key() == "CN:6");
}

TEST_CASE("T2 curve generators lie on the curve")
{
    auto t = t2_curve(ParamPair::make(3, 2));
    REQUIRE(t.known_generators.size() == 2);
    for (auto& g : t.known_generators) CHECK(on_curve(t.curve, g));
    // (d-a)(d-b) = 8 on the translate X(X - a^2)(X - b^2), X = x + d^2
    CHECK(t.known_generators[1].x == Rational(8 - 169));
    CHECK(t.known_generators[1].y == 136);
    CHECK(Integer(8) * (8 - 25) * (8 - 144) == Integer(136) * 136);

    auto t21 = t2_curve(ParamPair::make(2, 1));
    CHECK(t21.known_generators[0].y == 60);
    for (auto& tp : torsion_points(t21.curve)) CHECK((tp.infinity || tp.x != 0));
}

TEST_CASE("two tangent steps on T2 reach the (3,2) edge cuboid")
{
    auto t = t2_curve(ParamPair::make(3, 2));
    const auto& c = t.curve;
    const auto& g = t.known_generators[1];
    // primitive edges 5 and 12 scaled by 1560 give 7800 and 18720; x is the irrational edge squared
    const Rational want(Integer(211773121), Integer(1560) * 1560);
    CHECK(dbl(c, dbl(c, g)).x == want);
    CHECK_FALSE(is_square(want));
    // one step gives the degenerate cuboid: x = 0
    CHECK(dbl(c, g).x == 0);
    // the x = 0 point is not independent of the other generator
    CHECK(add(c, t.known_generators[0], dbl(c, g)).infinity);
}

TEST_CASE("T5 curves and generators")
{
    auto a = t5_curve(ParamPair::make(2, 1), false);
    auto b = t5_curve(ParamPair::make(2, 1), true);
    bool g1 = false, g2 = false;
    for (auto& g : a.known_generators) {
        CHECK(on_curve(a.curve, g));
        if (g.x == 1 && abs(g.y) == 60) g1 = true;
    }
    for (auto& g : b.known_generators) {
        CHECK(on_curve(b.curve, g));
        if (g.x == -11 && abs(g.y) == 60) g2 = true;
    }
    CHECK(g1);
    CHECK(g2);
    CHECK(on_curve(a.curve, CurvePoint::affine(0, 60)));
}

TEST_CASE("keys round trip")
{
    for (auto cc : {ef_curve(2, ParamPair::make(5, 2)), ei_curve(4, ParamPair::make(4, 1)), congruent_curve(7),
                    t2_curve(ParamPair::make(3, 2)), t5_curve(ParamPair::make(4, 1), true), face_curve(3, 7)}) {
        auto back = from_key(cc.key());
        CHECK(back.key() == cc.key());
        CHECK(back.curve == cc.curve);
    }
    CHECK_THROWS_AS(from_key("EF9:2,1"), DomainError);
    CHECK_THROWS_AS(from_key("EF1:3,1"), DomainError);
    CHECK_THROWS_AS(from_key("nonsense"), DomainError);
}

TEST_CASE("face curve is EF1 for the triangle legs")
{
    auto pp = ParamPair::make(5, 2);
    CHECK(face_curve(pp.odd_leg(), pp.even_leg()).curve.coefficients() == ef_curve(1, pp).curve.coefficients());
    CHECK_THROWS_AS(face_curve(3, 3), DomainError);
}
