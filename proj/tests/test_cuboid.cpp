#include <doctest.h>

#include <random>
#include <set>

#include "bpc/cuboid.hpp"
#include "bpc/error.hpp"

using namespace bpc;

namespace {

// Independent class oracle: count non-squares among the seven values after
// dividing by their gcd and compare pairwise products.
int nonsquares_sharing(const Integer& a, const Integer& b, const Integer& c, bool& shared)
{
    std::vector<Integer> v = {a, b, c, a + b, a + c, b + c, a + b + c};
    Integer g = 0;
    for (auto& x : v) g = gcd(g, x);
    std::vector<Integer> ns;
    for (auto& x : v) {
        x /= g;
        Integer r = sqrt(x);
        if (r * r != x) ns.push_back(x);
    }
    shared = true;
    for (auto& x : ns) {
        Integer pr = x * ns[0], r = sqrt(pr);
        if (r * r != pr) shared = false;
    }
    return static_cast<int>(ns.size());
}

Integer sq(long v) { return Integer(v) * v; }

} // namespace

TEST_CASE("classify examples")
{
    auto brick = classify(sq(44), sq(117), sq(240));
    CHECK(brick.cls == BpcClass::EulerBrick);
    CHECK(brick.nonsquare_mask == slot_bit(IvdSlot::ABC));

    auto edge = classify(sq(7800), sq(18720), Integer(211773121));
    CHECK(edge.cls == BpcClass::EdgeCuboid);
    CHECK(edge.shared_sfp == sfp(Integer(211773121)));

    CHECK(classify(1, 1, 1).cls == BpcClass::NotBpc);
    CHECK(classify(sq(3), sq(4), sq(12)).cls == BpcClass::NotBpc);
    CHECK_THROWS_AS(classify(0, 1, 1), DomainError);
}

TEST_CASE("classify agrees with the brute oracle on small cuboids")
{
    for (long a = 1; a <= 24; ++a)
        for (long b = a; b <= 24; ++b)
            for (long c = b; c <= 24; ++c) {
                bool shared = false;
                int n = nonsquares_sharing(a, b, c, shared);
                auto cls = classify(a, b, c);
                if (n == 0) CHECK(cls.cls == BpcClass::Perfect);
                else if (!shared || n == 4) CHECK(cls.cls == BpcClass::NotBpc);
                else if (n == 2 || n == 5) CHECK(cls.cls == BpcClass::TwoBpc);
                else if (n == 1 || n == 6) CHECK((cls.cls == BpcClass::EulerBrick || cls.cls == BpcClass::FaceCuboid || cls.cls == BpcClass::EdgeCuboid));
                else CHECK((cls.cls == BpcClass::FBpc || cls.cls == BpcClass::IBpc || cls.cls == BpcClass::ThreeBpcOther));
            }
}

TEST_CASE("classify is scale invariant")
{
    auto a = classify(sq(44), sq(117), sq(240));
    auto b = classify(sq(44) * 7, sq(117) * 7, sq(240) * 7);
    CHECK(a.cls == b.cls);
    CHECK(b.reduction_gcd == 7);
}

TEST_CASE("kln quantities of the cousin pair")
{
    auto q = kln_quantities(KlnTriple::make(1456, 10140, 735));
    CHECK(q.values[0] == sq(2730));
    CHECK(q.values[1] == sq(10244));
    CHECK(q.values[2] == sq(3094));
    CHECK(q.values[3] == sq(1631));
    CHECK(q.values[4] == 95366700);
    CHECK(q.square == std::array<bool, 5>{true, true, true, true, false});

    auto r = kln_quantities(KlnTriple::make(10032, 36100, 9801));
    CHECK(r.values[0] == sq(18810));
    CHECK(r.values[1] == sq(37468));
    CHECK(r.values[2] == sq(21318));
    CHECK(r.values[3] == sq(14025));
    CHECK_FALSE(r.square[4]);

    CHECK_FALSE(kln_quantities(KlnTriple::make(1, 2, 1)).square[0]);
    CHECK_THROWS_AS(KlnTriple::make(1, 3, 3), DomainError);
}

TEST_CASE("cousin triples give face BPCs")
{
    CHECK(classify(cuboid_from_kln(KlnTriple::make(1456, 10140, 735))).cls == BpcClass::FBpc);
    CHECK(classify(cuboid_from_kln(KlnTriple::make(10032, 36100, 9801))).cls == BpcClass::FBpc);
    CHECK_THROWS_AS(cuboid_from_kln(KlnTriple::make(1, 2, 1)), DomainError);
}

TEST_CASE("cuboid_from_kln identities on 1000 random triples")
{
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 1000; ++i) {
        // ln square: l = s b^2, n = s a^2 with b > a
        long s = 1 + rng() % 50, a = 1 + rng() % 40, b = a + 1 + rng() % 40, kk = 1 + rng() % 5000;
        Integer k = kk, l = Integer(s) * b * b, n = Integer(s) * a * a;
        auto ivd = cuboid_from_kln(KlnTriple::make(k, l, n));
        Integer ln = l * n;
        CHECK(ivd.sa + ivd.sb + ivd.sc == l * l * (k * k + ln));
        CHECK(ivd.sa + ivd.sb == ln * (k * k + l * l));
        CHECK(ivd.sa + ivd.sc == l * l * (k * k + n * n));
        CHECK(ivd.sb + ivd.sc == (k * k + ln) * (l * l - ln));
    }
}

TEST_CASE("check_cousin")
{
    auto t1 = KlnTriple::make(1456, 10140, 735), t2 = KlnTriple::make(10032, 36100, 9801);
    auto rep = check_cousin(t1, t2);
    CHECK(rep.cousins);
    CHECK(rep.ratio_first == Rational(8, 15));
    CHECK(rep.ratio_second == Rational(8, 15));
    CHECK(rep.frame_second == Rational(627, 182));
    CHECK(rep.spread_first == Rational(627, 182));
    CHECK(Rational(26, 7) - Rational(7, 26) == Rational(627, 182));
    CHECK_FALSE(check_cousin(t1, t1).cousins);
}

TEST_CASE("variant h candidates")
{
    auto v = variant_params_h(ParamPair::make(2, 1), ParamPair::make(3, 2));
    REQUIRE(v.size() == 2);
    CHECK(v[0].first == 7);
    CHECK(v[0].second == 4);
    CHECK(v[1].first == 8);
    CHECK(v[1].second == 1);
    CHECK(v[0].admissible);
    CHECK(v[1].admissible);

    auto w = variant_params_h(ParamPair::make(2, 1), ParamPair::make(2, 1));
    REQUIRE(w.size() == 2);
    CHECK(w[0].first == 4);
    CHECK(w[0].second == 3);
    CHECK(w[0].admissible);
    CHECK(w[1].first == 5);
    CHECK(w[1].second == 0);
    CHECK_FALSE(w[1].admissible);
}

TEST_CASE("variant classification against a scan")
{
    CHECK_THROWS_AS(classify_variant(KlnTriple::make(1456, 10140, 735)), DomainError);
    CHECK(classify_variant(KlnTriple::make(1, 3, 1)) == VariantKind::None);
    auto isq = [](const Integer& x) { Integer r = sqrt(x); return sgn(x) >= 0 && r * r == x; };
    // small triples: no variant, by direct square tests
    for (long k = 1; k <= 40; ++k)
        for (long l = 2; l <= 40; ++l)
            for (long n = 1; n < l; ++n) {
                Integer K = k, L = l, N = n;
                if (isq(L * N)) continue;
                bool base = isq(K * K + L * L) && isq(K * K + L * N) && isq(K * K + N * N);
                bool lm = base && isq(L * L - L * N), mn = base && isq(L * N - N * N);
                auto v = classify_variant(KlnTriple::make(K, L, N));
                CHECK(v == (lm ? VariantKind::LM : mn ? VariantKind::MN : VariantKind::None));
            }
    // smallest-k variants from a divisor scan of k^2 = (m - l)(m + l)
    const KlnTriple lm = KlnTriple::make(2508, 9025, 1456), mn = KlnTriple::make(2240, 4875, 768);
    for (const auto& t : {lm, mn}) {
        CHECK_FALSE(isq(t.l * t.n));
        CHECK(isq(t.k * t.k + t.l * t.l));
        CHECK(isq(t.k * t.k + t.l * t.n));
        CHECK(isq(t.k * t.k + t.n * t.n));
    }
    CHECK(isq(lm.l * lm.l - lm.l * lm.n));
    CHECK(isq(mn.l * mn.n - mn.n * mn.n));
    CHECK(classify_variant(lm) == VariantKind::LM);
    CHECK(classify_variant(mn) == VariantKind::MN);
}

TEST_CASE("the smallest perfect plinth")
{
    auto pl = Plinth::make(104, 195, 56, 105, 7200);
    auto rep = verify_plinth(pl);
    CHECK(rep.distances.size() == 28);
    CHECK(rep.perfect);
    CHECK(rep.integer_count == 28);
    std::set<Integer> seen;
    for (auto& d : rep.distances) seen.insert(Integer(d.squared.get_num()));
    for (long v : {119, 221, 125, 174, 190, 99}) CHECK(seen.count(sq(v)));

    // independent distance oracle: corners at (+-w/2, +-h/2), height only enters squared
    std::multiset<Rational> want, got;
    std::vector<std::array<Rational, 3>> corners;
    for (int lvl = 0; lvl < 2; ++lvl)
        for (int sx : {1, -1})
            for (int sy : {1, -1})
                corners.push_back({(lvl ? pl.c1 : pl.b1) * sx / 2, (lvl ? pl.c2 : pl.b2) * sy / 2, Rational(lvl)});
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) {
            Rational dx = corners[i][0] - corners[j][0], dy = corners[i][1] - corners[j][1];
            want.insert(dx * dx + dy * dy + (corners[i][2] != corners[j][2] ? pl.height_sq : Rational(0)));
        }
    for (auto& d : rep.distances) got.insert(d.squared);
    CHECK(got == want);

    for (auto& t : plinth_trapezia(pl)) CHECK(t.identity_holds());
}

TEST_CASE("non-perfect plinths")
{
    CHECK_FALSE(verify_plinth(Plinth::make(1, 1, 1, 1, 1)).perfect);
    auto flat = verify_plinth(Plinth::make(4, 6, 2, 2, 0));
    CHECK(flat.distances.size() == 28);
}

TEST_CASE("scale_plinth")
{
    auto pl = Plinth::make(104, 195, 56, 105, 7200);
    auto same = scale_plinth(pl, 1, 1);
    CHECK(same.b1 == pl.b1);
    CHECK(same.c2 == pl.c2);
    CHECK(same.height_sq == pl.height_sq);
    // j = 2 pushes the base out further than the slant can reach
    CHECK_THROWS_AS(scale_plinth(pl, 1, 2), DomainError);
    // i = 2 inverts the frustum
    auto inv = scale_plinth(pl, 2, 1);
    CHECK(inv.c1 > inv.b1);
    CHECK(verify_plinth(inv).perfect);
    CHECK(inv.slant_sq() == pl.slant_sq() * 4);
}

TEST_CASE("picture frame from the smallest plinth")
{
    CHECK(Integer(221) * sq(119) - Integer(119) * sq(91) == Integer(2) * 99 * 119 * 91);
    auto pl = Plinth::make(104, 195, 56, 105, 7200);
    auto ppf = ppf_from_plinth(pl);
    CHECK(ppf.height_sq == 0);
    CHECK(verify_plinth(ppf).perfect);
    CHECK_THROWS_AS(ppf_from_plinth(Plinth::make(1, 1, 1, 1, 1)), DomainError);
}
