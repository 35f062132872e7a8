#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include "bpc/cache.hpp"
#include "bpc/error.hpp"
#include "bpc/serialize.hpp"

using namespace bpc;

TEST_CASE("big integers and rationals are strings")
{
    const Integer big("123456789012345678901234567890");
    CHECK(int_json(big) == Json("123456789012345678901234567890"));
    CHECK(int_from(int_json(big)) == big);
    CHECK(rat_json(Rational(627, 182)) == Json("627/182"));
    CHECK(rat_json(Rational(5)) == Json("5/1"));
    CHECK(rat_from(Json("-10/4")) == Rational(-5, 2));
    CHECK(int_from(Json(42)) == 42);
    CHECK_THROWS(int_from(Json("4x")));
}

TEST_CASE("hits round trip")
{
    Algo1Options o;
    o.p_max = 300;
    for (auto& h : algo1_scan(o).hits) {
        const Json j = to_json(h);
        const BpcHit back = hit_from(j);
        CHECK(to_json(back).dump() == j.dump());
        CHECK(back.key() == h.key());
        CHECK(reverify(back));
    }
}

TEST_CASE("rank bounds and certificates round trip")
{
    auto b = two_descent(SplitCubic::make(0, Rational(6), Rational(-6)));
    const Json j = to_json(b);
    const RankBound back = rank_bound_from(j);
    CHECK(to_json(back).dump() == j.dump());
    CHECK(back.status == b.status);
    CHECK(back.points == b.points);
    CHECK(back.certificate.curve == b.certificate.curve);
}

TEST_CASE("points and curves")
{
    CHECK(to_json(CurvePoint::at_infinity()) == Json("O"));
    auto p = CurvePoint::affine(Rational(1, 4), Rational(-3, 8));
    CHECK(point_from(to_json(p)) == p);
    auto c = SplitCubic::make(0, Rational(-9), Rational(-16));
    CHECK(curve_from(to_json(c)) == c);
}

TEST_CASE("checkpoints and plinths")
{
    Algo1Checkpoint cp{8100, ParamPair::make(512, 7), 0xdeadbeefcafef00dull, 12};
    auto back = checkpoint_from(to_json(cp));
    CHECK(back.p_max == cp.p_max);
    CHECK(back.cursor == cp.cursor);
    CHECK(back.table_digest == cp.table_digest);
    CHECK(back.hit_count == cp.hit_count);

    auto pl = plinth_from(Json::parse(R"({"base":[104,"195"],"ceiling":["56/1",105],"height_sq":7200})"));
    CHECK(pl.b1 == 104);
    CHECK(pl.c1 == 56);
    CHECK(verify_plinth(pl).perfect);
    CHECK(plinth_from(to_json(pl)).height_sq == pl.height_sq);
}

TEST_CASE("envelope and deterministic timestamp")
{
    unsetenv("SOURCE_DATE_EPOCH");
    CHECK(record_timestamp(false) == "1970-01-01T00:00:00Z");
    setenv("SOURCE_DATE_EPOCH", "86400", 1);
    CHECK(record_timestamp(false) == "1970-01-02T00:00:00Z");
    unsetenv("SOURCE_DATE_EPOCH");
    auto e = envelope("classify", "classification", "t", Json::object());
    CHECK(e.at("schema_version") == kSchemaVersion);
    CHECK(e.begin().key() == "schema_version");
}

TEST_CASE("certificate cache")
{
    const auto dir = std::filesystem::temp_directory_path() / "bpc_cache_test";
    std::filesystem::remove_all(dir);
    CertificateCache cache(dir, DescentOptions{});
    auto cc = ef_curve(1, ParamPair::make(2, 1));
    auto first = cache.get(cc);
    CHECK(cache.misses() == 1);
    auto second = cache.get(cc);
    CHECK(cache.hits() == 1);
    CHECK(to_json(first).dump() == to_json(second).dump());
    CHECK(std::filesystem::exists(cache.path_for(cc.key())));

    // a different option set must not reuse the entry
    DescentOptions other;
    other.naive_bound = 30;
    CertificateCache cache2(dir, other);
    cache2.get(cc);
    CHECK(cache2.misses() == 1);
    std::filesystem::remove_all(dir);
}
