// Runs the ten acceptance checks and prints one PASS/FAIL line for each.
// Exit status is the number of failed checks.
#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "bpc/cache.hpp"
#include "bpc/catalog.hpp"
#include "bpc/cuboid.hpp"
#include "bpc/descent.hpp"
#include "bpc/elliptic.hpp"
#include "bpc/families.hpp"
#include "bpc/search.hpp"

using namespace bpc;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Integer sq(const Integer& v) { return v * v; }

bool isq(const Integer& v)
{
    if (sgn(v) < 0) return false;
    Integer r = sqrt(v);
    return r * r == v;
}

int failures = 0, evaluated = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail)
{
    ++evaluated;
    if (!ok) ++failures;
    std::cout << (ok ? "PASS " : "FAIL ") << id << "  " << what;
    if (!detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << std::endl;
}

bool edge_cuboid_ok(const EdgeCuboidRecord& r)
{
    const Integer &e0 = r.integer_edges[0], &e1 = r.integer_edges[1], &c2 = r.third_edge_sq;
    return sgn(c2) > 0 && sq(r.face_diagonals[0]) == sq(e0) + sq(e1) && sq(r.face_diagonals[1]) == sq(e0) + c2 &&
           sq(r.face_diagonals[2]) == sq(e1) + c2 && sq(r.main_diagonal) == sq(e0) + sq(e1) + c2;
}

std::set<Integer> as_set(const std::array<Integer, 2>& a) { return {a[0], a[1]}; }

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance checks"};
    std::string cache_dir;
    unsigned depth = 2;
    int threads = 0;
    app.add_option("--cache", cache_dir, "descent certificate cache directory");
    app.add_option("--depth", depth, "generator coefficient bound for the curve-driven search");
    app.add_option("--threads", threads);
    CLI11_PARSE(app, argc, argv);

    // 1. SFP collision scan
    auto t0 = Clock::now();
    Algo1Options o1;
    o1.p_max = 8100;
    o1.threads = threads;
    const Algo1Result scan = algo1_scan(o1);
    std::size_t nf = 0, ni = 0;
    for (auto& h : scan.hits) (h.kind == HitKind::FBpc ? nf : ni)++;
    {
        std::ostringstream d;
        d << scan.hits.size() << " hits, " << nf << " F, " << ni << " I; want 78, 51 F, 27 I; " << since(t0) << " s";
        report(1, scan.hits.size() == 78 && nf == 51 && ni == 27, "scan-sfp to p 8100", d.str());
    }

    // 2. admissible pairs
    {
        auto t = Clock::now();
        const auto n = count_admissible(1000);
        const double s = since(t);
        std::ostringstream d;
        d << n << " pairs in " << s << " s";
        report(2, n == 202861 && s <= 10, "admissible pairs to p 1000", d.str());
    }

    // 3. family witnesses
    {
        bool ok = true;
        auto t2 = t2_family(ParamPair::make(3, 2));
        ok &= as_set(t2.integer_edges) == std::set<Integer>{7800, 18720} && t2.main_diagonal == 24961;
        auto t5a = t5a_family(ParamPair::make(2, 1));
        ok &= as_set(t5a.integer_edges) == std::set<Integer>{1443, 1800} && t5a.main_diagonal == 2405;
        auto t5b = t5b_family(ParamPair::make(4, 1));
        ok &= as_set(t5b.integer_edges) == std::set<Integer>{552968, 554880} && t5b.main_diagonal == 1175057;
        for (auto* r : {&t2, &t5a, &t5b}) ok &= edge_cuboid_ok(*r);
        std::string d;
        for (auto& x : t2.discrepancies) d += x.what + " printed " + x.printed.get_str() + " derived " + x.derived.get_str();
        report(3, ok, "T2 (3,2), T5a (2,1), T5b (4,1) witnesses", d);
    }

    // 4. quartic identity, e never square
    {
        auto t = Clock::now();
        PairStream s(500);
        std::size_t n = 0, bad = 0;
        while (auto pp = s.next()) {
            auto c = t3_check(*pp);
            ++n;
            if (!c.identity_ok || c.e_is_square || isq(abs(c.e))) ++bad;
        }
        std::ostringstream d;
        d << n << " pairs, " << bad << " bad, " << since(t) << " s";
        report(4, bad == 0 && since(t) <= 60, "(x-y)^2-4xy=e, e non-square, p <= 500", d.str());
    }

    // 5. exclusion spot checks
    RankProvider rank = descent_provider();
    std::unique_ptr<CertificateCache> cache;
    if (!cache_dir.empty()) {
        cache = std::make_unique<CertificateCache>(cache_dir, DescentOptions{});
        rank = cache->provider();
    }
    {
        auto f21 = exclude_face(ParamPair::make(2, 1), rank);
        bool ef1 = false;
        for (auto& c : f21.curves)
            if (c.key == "EF1:2,1" && c.bound.status == RankStatus::RankZeroCertified &&
                c.bound.certificate.selmer_size == c.bound.certificate.image_size)
                ef1 = true;
        auto f52 = exclude_face(ParamPair::make(5, 2), rank);
        auto i41 = exclude_internal(ParamPair::make(4, 1), rank);
        const bool ok = f21.verdict == Verdict::Prohibited && ef1 && f52.verdict == Verdict::NotProhibited &&
                        i41.verdict == Verdict::NotProhibited;
        report(5, ok, "exclusion (2,1) face, (5,2) face, (4,1) internal",
               std::string(ef1 ? "EF1 rank 0 certified" : "no EF1 certificate"));
    }

    // 6. cousins and pentacycle
    {
        auto t1 = KlnTriple::make(1456, 10140, 735), t2 = KlnTriple::make(10032, 36100, 9801);
        auto r = check_cousin(t1, t2);
        const bool ok = r.cousins && r.ratio_first == Rational(8, 15) && r.ratio_second == Rational(8, 15) &&
                        r.frame_second == Rational(627, 182) && r.spread_first == Rational(627, 182) &&
                        pentacycle_check({Rational(190, 99), Rational(15, 8), Rational(26, 7)}, t1, t2);
        report(6, ok, "cousin pair 8/15 and 627/182, pentacycle", "");
    }

    // 7. shared leg-product SFP
    {
        const Integer want("3746496180063");
        bool ok = true;
        for (auto pp : {ParamPair::make(2678, 399), ParamPair::make(28798, 28779), ParamPair::make(6580798, 386019)})
            ok &= leg_product_sfp(pp) == want;
        report(7, ok, "leg-product SFP 3746496180063 on three pairs", "");
    }

    // 8. plinth
    {
        auto pl = Plinth::make(104, 195, 56, 105, 7200);
        auto rep = verify_plinth(pl);
        std::set<Integer> seen;
        for (auto& d : rep.distances)
            if (d.integer_square) seen.insert(sqrt(Integer(d.squared.get_num())));
        bool ok = rep.perfect && rep.distances.size() == 28 && rep.integer_count == 28;
        for (long v : {119, 221, 125, 174, 190}) ok &= seen.count(Integer(v)) == 1;
        auto frame = ppf_from_plinth(pl);
        ok &= sgn(frame.height_sq) == 0 && verify_plinth(frame).perfect;
        report(8, ok, "smallest perfect plinth and its picture frame", "");
    }

    // 9. property suites
    {
        std::vector<std::string> bad;
        std::mt19937_64 rng(2024);
        for (int i = 0; i < 1000; ++i) {
            long s = 1 + rng() % 50, a = 1 + rng() % 40, b = a + 1 + rng() % 40, kk = 1 + rng() % 5000;
            Integer k = kk, l = Integer(s) * b * b, n = Integer(s) * a * a, ln = l * n;
            auto ivd = cuboid_from_kln(KlnTriple::make(k, l, n));
            if (ivd.sabc() != l * l * (k * k + ln) || ivd.sab() != ln * (k * k + l * l) ||
                ivd.sac() != l * l * (k * k + n * n) || ivd.sbc() != (k * k + ln) * (l * l - ln)) {
                bad.push_back("kln");
                break;
            }
        }
        int samples = 0;
        bool tangent_ok = true;
        while (samples < 1000) {
            long r = rng() % 60, s = r + 1 + rng() % 60, t = s + 1 + rng() % 60;
            auto c = SplitCubic::from_offsets(r, s, t);
            for (const auto& P : naive_point_search(c, 12)) {
                if (samples >= 1000) break;
                if (P.infinity || sgn(P.y) == 0) continue;
                for (const auto& x : tangent_triple(r, s, t, P.x)) tangent_ok &= is_square(c.rhs(x));
                ++samples;
            }
        }
        if (!tangent_ok) bad.push_back("tangent");

        int pairs = 0;
        PairStream ps(40);
        while (pairs < 20) {
            auto pp = ps.next();
            if (!pp) break;
            ++pairs;
            const Integer a = pp->odd_leg(), b = pp->even_leg();
            std::set<Rational> want = {0, Rational(-a * a), Rational(-b * b), Rational(a * b), Rational(-a * b)}, got;
            for (auto& p : torsion_points(ef_curve(1, *pp).curve))
                if (!p.infinity) got.insert(p.x);
            if (got != want) {
                bad.push_back("torsion " + pp->str());
                break;
            }
        }
        for (long n : {1, 2, 3, 5, 6, 7}) {
            auto b = two_descent(SplitCubic::make(0, Rational(n), Rational(-n)));
            const bool ok = n <= 3 ? b.status == RankStatus::RankZeroCertified
                                   : b.status == RankStatus::PositiveRankCertified && b.lower >= 1;
            if (!ok) bad.push_back("congruent " + std::to_string(n));
        }
        if (!two_bpc_scan(200, true, threads).findings.empty()) bad.push_back("two-bpc");
        for (auto& h : scan.hits)
            if (!reverify(h)) bad.push_back("reverify");
        std::string d;
        for (auto& x : bad) d += x + " ";
        report(9, bad.empty(), "property suites", d);
    }

    // 10. curve-driven search against the collision scan
    {
        auto t = Clock::now();
        std::map<HitKind, std::set<ParamPair>> aspects;
        for (auto& h : scan.hits)
            for (auto& k : h.kln)
                if (auto a = kln_aspect_pair(k, h.kind)) aspects[h.kind].insert(*a);
        Algo2Options ao;
        ao.depth = depth;
        ao.threads = threads;
        std::set<std::array<Integer, 3>> found;
        std::set<std::pair<ParamPair, HitKind>> undecided;
        std::vector<std::string> listed;
        for (auto& [kind, set] : aspects) {
            auto r = algo2_scan({set.begin(), set.end()}, kind, rank, ao);
            for (auto& h : r.hits)
                if (reverify(h)) found.insert(h.key());
            for (auto& rep : r.reports)
                if (!rep.inconclusive.empty()) {
                    undecided.insert({rep.pair, kind});
                    for (auto& k : rep.inconclusive) listed.push_back(k);
                }
        }
        std::size_t reproduced = 0, excused = 0, missed = 0;
        std::string misses;
        for (auto& h : scan.hits) {
            if (found.count(h.key())) {
                ++reproduced;
                continue;
            }
            bool ex = false;
            for (auto& k : h.kln)
                if (auto a = kln_aspect_pair(k, h.kind); a && undecided.count({*a, h.kind})) ex = true;
            if (ex) ++excused;
            else {
                ++missed;
                misses += " " + hit_kind_name(h.kind) + (h.aspect_pair ? h.aspect_pair->str() : "");
            }
        }
        std::ostringstream d;
        d << reproduced << "/" << scan.hits.size() << " reproduced, " << excused << " excused, " << missed
          << " missed" << misses << "; inconclusive:";
        for (auto& k : listed) d << " " << k;
        d << "; " << since(t) << " s";
        report(10, missed == 0, "curve-driven search reproduces the scan hits", d.str());
    }

    std::cout << "criteria: " << evaluated << " evaluated, " << failures << " failed" << std::endl;
    return failures;
}
