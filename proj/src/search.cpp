#include "bpc/search.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <mutex>
#include <numeric>

#include "bpc/error.hpp"

namespace bpc {

namespace {

using u128 = unsigned __int128;

std::uint64_t splitmix(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t entry_mix(const SfpKey& k, std::uint32_t p, std::uint32_t q)
{
    return splitmix(k.hi ^ splitmix(k.lo ^ splitmix((std::uint64_t(p) << 32) | q)));
}

int thread_count(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

// First exception raised inside a parallel region, rethrown after it.
class ErrorSlot {
public:
    void capture()
    {
        std::lock_guard lock(mu_);
        if (!err_) err_ = std::current_exception();
    }
    void rethrow()
    {
        if (err_) std::rethrow_exception(err_);
    }

private:
    std::mutex mu_;
    std::exception_ptr err_;
};

template <class F>
void for_each_q(std::uint32_t p, F&& f)
{
    for (std::uint32_t q = (p % 2 == 0) ? 1 : 2; q < p; q += 2) {
        if (std::gcd(p, q) == 1) f(q);
    }
}

ParamPair last_pair_of(std::uint64_t p)
{
    for (std::uint64_t q = p - 1; q >= 1; --q) {
        if (ParamPair::admissible(p, q)) return ParamPair::make(p, q);
    }
    throw DomainError("no admissible pair with p = " + std::to_string(p));
}

bool hit_before(const BpcHit& a, const BpcHit& b)
{
    const bool sa = !a.sources.empty(), sb = !b.sources.empty();
    if (sa != sb) return sa;
    if (sa && a.sources.front() != b.sources.front()) return a.sources.front() < b.sources.front();
    return a.key() < b.key();
}

template <class T>
void sort_unique(std::vector<T>& v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

void merge_hit(std::map<std::array<Integer, 3>, BpcHit>& into, BpcHit h)
{
    auto [it, fresh] = into.try_emplace(h.key(), h);
    if (fresh) return;
    BpcHit& old = it->second;
    verify(old.kind == h.kind, "cuboid reported as both F-BPC and I-BPC");
    old.kln.insert(old.kln.end(), h.kln.begin(), h.kln.end());
    old.sources.insert(old.sources.end(), h.sources.begin(), h.sources.end());
    sort_unique(old.kln);
    sort_unique(old.sources);
    if (!old.collision_sfp) old.collision_sfp = h.collision_sfp;
    if (!old.aspect_pair) old.aspect_pair = h.aspect_pair;
    if (old.curve.empty()) {
        old.curve = h.curve;
        old.curve_x = h.curve_x;
    }
}

std::vector<BpcHit> flatten(std::map<std::array<Integer, 3>, BpcHit>& m)
{
    std::vector<BpcHit> out;
    out.reserve(m.size());
    for (auto& [k, h] : m) out.push_back(std::move(h));
    std::sort(out.begin(), out.end(), hit_before);
    return out;
}

IvdSquares primitive(const IvdSquares& raw)
{
    auto k = shape_key(raw);
    return IvdSquares::make(k[0], k[1], k[2]);
}

std::vector<BpcHit> hits_from_collision(const Collision& c, const Integer& sfp_value)
{
    std::vector<BpcHit> out;
    for (const auto& t : pair_to_kln(c.first, c.second)) {
        auto h = hit_from_kln(t);
        if (!h) continue;
        h->sources = {c};
        h->collision_sfp = sfp_value;
        out.push_back(std::move(*h));
    }
    return out;
}

} // namespace

// ---- SFP keys and table ----

Integer SfpKey::value() const
{
    Integer v(static_cast<unsigned long>(hi));
    v <<= 64;
    v += Integer(static_cast<unsigned long>(lo));
    return v;
}

SfpKey sfp_key(const SfpSieve& s, std::uint32_t p, std::uint32_t q)
{
    const std::uint32_t even = (p % 2 == 0) ? p : q;
    const std::uint32_t odd = (p % 2 == 0) ? q : p;
    const u128 k = u128(std::uint64_t(s[2 * even]) * s[odd]) * u128(std::uint64_t(s[p - q]) * s[p + q]);
    return {static_cast<std::uint64_t>(k >> 64), static_cast<std::uint64_t>(k)};
}

std::vector<ParamPair> SfpTable::insert(const Integer& key, const ParamPair& pp)
{
    auto& v = map_[key];
    std::vector<ParamPair> before = v;
    v.push_back(pp);
    ++pairs_;
    return before;
}

const std::vector<ParamPair>* SfpTable::find(const Integer& key) const
{
    auto it = map_.find(key);
    return it == map_.end() ? nullptr : &it->second;
}

// ---- hits ----

std::string hit_kind_name(HitKind k) { return k == HitKind::FBpc ? "FBpc" : "IBpc"; }

std::optional<HitKind> parse_hit_kind(const std::string& s)
{
    if (s == "FBpc" || s == "F" || s == "f") return HitKind::FBpc;
    if (s == "IBpc" || s == "I" || s == "i") return HitKind::IBpc;
    return std::nullopt;
}

bool reverify(const BpcHit& hit)
{
    const auto cls = classify(hit.cuboid);
    return cls.cls == (hit.kind == HitKind::FBpc ? BpcClass::FBpc : BpcClass::IBpc);
}

std::vector<KlnTriple> pair_to_kln(const ParamPair& pp1, const ParamPair& pp2)
{
    const std::array<Integer, 2> legs1 = {pp1.even_leg(), pp1.odd_leg()};
    const std::array<Integer, 2> legs2 = {pp2.even_leg(), pp2.odd_leg()};
    std::vector<KlnTriple> out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const Integer& k1 = legs1[i];
            const Integer& l1 = legs1[1 - i];
            const Integer& k2 = legs2[j];
            const Integer& n2 = legs2[1 - j];
            const Integer k = lcm(k1, k2);
            Integer l = l1 * (k / k1);
            Integer n = n2 * (k / k2);
            if (l == n) continue;
            if (l < n) std::swap(l, n);
            if (!is_square(Integer(l * n))) continue;
            const Integer g = gcd(gcd(k, l), n);
            out.push_back(KlnTriple::make(k / g, l / g, n / g));
        }
    }
    sort_unique(out);
    return out;
}

std::optional<ParamPair> kln_aspect_pair(const KlnTriple& t, HitKind kind)
{
    const Integer m = t.m();
    if (kind == HitKind::FBpc) return pair_from_legs(t.k, m);
    const Integer d = t.l * t.l - t.l * t.n;
    if (!is_square(d)) return std::nullopt;
    return pair_from_legs(isqrt(d), m);
}

std::optional<BpcHit> hit_from_kln(const KlnTriple& t)
{
    const Integer ln = t.l * t.n;
    const bool face = is_square(Integer(t.k * t.k + ln));
    const bool internal = is_square(Integer(t.l * t.l - ln));
    if (!face && !internal) return std::nullopt;
    const std::string tag =
        "(" + to_string(t.k) + "," + to_string(t.l) + "," + to_string(t.n) + ")";
    verify(!(face && internal), "triple " + tag + " passes both tests: perfect cuboid candidate");
    BpcHit h;
    h.kind = face ? HitKind::FBpc : HitKind::IBpc;
    h.cuboid = primitive(cuboid_from_kln(t));
    h.cls = classify(h.cuboid);
    verify(reverify(h), "triple " + tag + " classified as " + class_name(h.cls.cls) + ", expected " +
                            hit_kind_name(h.kind));
    h.kln = {t};
    h.aspect_pair = kln_aspect_pair(t, h.kind);
    return h;
}

void canonicalize_hits(std::vector<BpcHit>& hits)
{
    std::map<std::array<Integer, 3>, BpcHit> m;
    for (auto& h : hits) {
        sort_unique(h.kln);
        sort_unique(h.sources);
        merge_hit(m, std::move(h));
    }
    hits = flatten(m);
}

// ---- algorithm 1 ----

std::uint64_t table_digest(const ParamPair& cursor)
{
    require(cursor.p < (1ULL << 31), "table_digest: p too large");
    const SfpSieve sieve(static_cast<std::uint32_t>(2 * cursor.p + 2));
    std::uint64_t d = 0;
    PairStream ps(cursor.p);
    while (auto pp = ps.next()) {
        if (*pp > cursor) break;
        const auto p = static_cast<std::uint32_t>(pp->p), q = static_cast<std::uint32_t>(pp->q);
        d += entry_mix(sfp_key(sieve, p, q), p, q);
    }
    return d;
}

namespace {

struct Bloom {
    std::vector<std::uint64_t> bits;
    std::uint64_t mask;
    explicit Bloom(unsigned log2_bits) : bits((1ULL << log2_bits) / 64 + 1, 0), mask((1ULL << log2_bits) - 1) {}
    // Sets the key's bits; returns whether all were already set.
    bool insert(const SfpKey& k)
    {
        bool all = true;
        std::uint64_t h = splitmix(k.hi ^ splitmix(k.lo));
        for (int i = 0; i < 3; ++i) {
            const std::uint64_t b = h & mask;
            std::uint64_t& w = bits[b >> 6];
            const std::uint64_t bit = 1ULL << (b & 63);
            all = all && (w & bit);
            w |= bit;
            h = splitmix(h);
        }
        return all;
    }
    bool contains(const SfpKey& k) const
    {
        std::uint64_t h = splitmix(k.hi ^ splitmix(k.lo));
        for (int i = 0; i < 3; ++i) {
            const std::uint64_t b = h & mask;
            if (!(bits[b >> 6] & (1ULL << (b & 63)))) return false;
            h = splitmix(h);
        }
        return true;
    }
};

std::uint32_t key_spf(const SfpSieve& s, std::uint32_t p, std::uint32_t q)
{
    const std::uint32_t even = (p % 2 == 0) ? p : q;
    const std::uint32_t odd = (p % 2 == 0) ? q : p;
    std::uint32_t best = UINT32_MAX;
    for (std::uint32_t f : {s[2 * even], s[odd], s[p - q], s[p + q]}) {
        if (f > 1) best = std::min(best, s.smallest_prime_factor(f));
    }
    return best;
}

unsigned partition_of(std::uint32_t spf, const std::vector<std::uint32_t>& small_primes)
{
    for (unsigned i = 0; i < small_primes.size(); ++i) {
        if (spf == small_primes[i]) return i;
    }
    return static_cast<unsigned>(small_primes.size());
}

std::vector<std::uint32_t> first_primes(unsigned n)
{
    std::vector<std::uint32_t> out;
    for (std::uint32_t c = 2; out.size() < n; ++c) {
        if (is_prime(std::uint64_t(c))) out.push_back(c);
    }
    return out;
}

} // namespace

Algo1Result algo1_scan(const Algo1Options& opt)
{
    require(opt.p_max >= 2, "algo1_scan: p_max must be >= 2");
    require(opt.p_max < (1ULL << 31), "algo1_scan: p_max must be below 2^31");
    require(opt.block >= 1, "algo1_scan: block must be >= 1");
    const auto P = static_cast<std::uint32_t>(opt.p_max);
    const SfpSieve sieve(2 * P + 2);
    const int nt = thread_count(opt.threads);
    const bool par = opt.parallel;
    ErrorSlot err;

    Algo1Result res;
    std::vector<std::uint64_t> count(P + 2, 0), pdigest(P + 1, 0);
#pragma omp parallel for schedule(dynamic, 64) num_threads(nt) if (par)
    for (std::int64_t p = 2; p <= std::int64_t(P); ++p) {
        std::uint64_t c = 0;
        for_each_q(static_cast<std::uint32_t>(p), [&](std::uint32_t) { ++c; });
        count[p + 1] = c;
    }
    std::vector<std::uint64_t> offs(P + 2, 0);
    std::partial_sum(count.begin(), count.end(), offs.begin());
    res.pairs = offs[P + 1];

    std::vector<SfpEntry> entries;
    if (opt.store == StoreMode::Exact) {
        entries.resize(res.pairs);
#pragma omp parallel for schedule(dynamic, 64) num_threads(nt) if (par)
        for (std::int64_t p = 2; p <= std::int64_t(P); ++p) {
            const auto pu = static_cast<std::uint32_t>(p);
            std::uint64_t i = offs[p], d = 0;
            for_each_q(pu, [&](std::uint32_t q) {
                const SfpKey k = sfp_key(sieve, pu, q);
                entries[i++] = {k, pu, q};
                d += entry_mix(k, pu, q);
            });
            pdigest[p] = d;
        }
        res.candidates = res.pairs;
    } else {
        // Two passes per partition: a pair survives when its key was seen twice.
        const unsigned parts = std::max(1u, opt.bloom_partitions);
        const auto small = first_primes(parts - 1);
        for (std::uint32_t p = 2; p <= P; ++p) {
            std::uint64_t d = 0;
            for_each_q(p, [&](std::uint32_t q) { d += entry_mix(sfp_key(sieve, p, q), p, q); });
            pdigest[p] = d;
        }
        for (unsigned part = 0; part < parts; ++part) {
            Bloom seen(opt.bloom_log2_bits), twice(opt.bloom_log2_bits);
            auto mine = [&](std::uint32_t p, std::uint32_t q) {
                return parts == 1 || partition_of(key_spf(sieve, p, q), small) == part;
            };
            for (std::uint32_t p = 2; p <= P; ++p) {
                for_each_q(p, [&](std::uint32_t q) {
                    if (!mine(p, q)) return;
                    const SfpKey k = sfp_key(sieve, p, q);
                    if (seen.insert(k)) twice.insert(k);
                });
            }
            for (std::uint32_t p = 2; p <= P; ++p) {
                for_each_q(p, [&](std::uint32_t q) {
                    if (!mine(p, q)) return;
                    const SfpKey k = sfp_key(sieve, p, q);
                    if (twice.contains(k)) entries.push_back({k, p, q});
                });
            }
        }
        res.candidates = entries.size();
    }

    std::sort(entries.begin(), entries.end(), [](const SfpEntry& a, const SfpEntry& b) {
        if (a.key != b.key) return a.key < b.key;
        if (a.p != b.p) return a.p < b.p;
        return a.q < b.q;
    });

    struct Job {
        Collision c;
        SfpKey key;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < entries.size();) {
        std::size_t j = i;
        while (j < entries.size() && entries[j].key == entries[i].key) ++j;
        for (std::size_t a = i; a < j; ++a) {
            for (std::size_t b = a + 1; b < j; ++b) {
                jobs.push_back({{ParamPair{entries[a].p, entries[a].q}, ParamPair{entries[b].p, entries[b].q}},
                                entries[i].key});
            }
        }
        i = j;
    }
    entries.clear();
    entries.shrink_to_fit();
    res.collisions = jobs.size();

    std::uint64_t start_p = 1;  // collisions whose later pair has p <= start_p are done
    if (opt.resume) {
        const auto& ck = *opt.resume;
        require(ck.p_max == opt.p_max, "checkpoint was written for p_max " + std::to_string(ck.p_max));
        verify(ck.cursor == last_pair_of(ck.cursor.p), "checkpoint cursor is not at the end of a p row");
        std::uint64_t d = 0;
        for (std::uint64_t p = 2; p <= ck.cursor.p; ++p) d += pdigest[p];
        verify(d == ck.table_digest, "checkpoint table digest mismatch");
        verify(ck.hit_count == opt.prior.size(), "checkpoint hit count differs from the supplied hits");
        start_p = ck.cursor.p;
    }
    std::erase_if(jobs, [&](const Job& j) { return j.c.second.p <= start_p; });
    std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
        if (a.c.second != b.c.second) return a.c.second < b.c.second;
        return a.c.first < b.c.first;
    });

    std::map<std::array<Integer, 3>, BpcHit> merged;
    for (const auto& h : opt.prior) merge_hit(merged, h);

    std::uint64_t digest = 0;
    for (std::uint64_t p = 2; p <= start_p; ++p) digest += pdigest[p];
    std::size_t next = 0;
    Algo1Checkpoint ck;
    ck.p_max = opt.p_max;
    for (std::uint64_t lo = start_p; lo < P;) {
        const std::uint64_t hi = std::min<std::uint64_t>(P, lo + opt.block);
        std::size_t end = next;
        while (end < jobs.size() && jobs[end].c.second.p <= hi) ++end;
        std::vector<std::vector<BpcHit>> found(end - next);
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt) if (par)
        for (std::int64_t i = std::int64_t(next); i < std::int64_t(end); ++i) {
            try {
                const Job& j = jobs[i];
                found[i - next] = hits_from_collision(j.c, j.key.value());
            } catch (...) {
                err.capture();
            }
        }
        err.rethrow();
        for (auto& v : found) {
            for (auto& h : v) merge_hit(merged, std::move(h));
        }
        next = end;
        for (std::uint64_t p = lo + 1; p <= hi; ++p) digest += pdigest[p];
        lo = hi;
        ck.cursor = last_pair_of(hi);
        ck.table_digest = digest;
        ck.hit_count = merged.size();
        if (opt.on_checkpoint) {
            std::map<std::array<Integer, 3>, BpcHit> copy = merged;
            opt.on_checkpoint(ck, flatten(copy));
        }
    }
    if (start_p >= P) {
        ck.cursor = last_pair_of(P);
        ck.table_digest = digest;
        ck.hit_count = merged.size();
    }
    res.hits = flatten(merged);
    res.final_checkpoint = ck;
    return res;
}

std::vector<BpcHit> algo1_scan_reference(std::uint64_t p_max)
{
    require(p_max >= 2, "algo1_scan_reference: p_max must be >= 2");
    SfpTable table;
    std::vector<BpcHit> hits;
    PairStream ps(p_max);
    while (auto pp = ps.next()) {
        const Integer key = leg_product_sfp(*pp);
        for (const auto& earlier : table.insert(key, *pp)) {
            auto found = hits_from_collision({earlier, *pp}, key);
            hits.insert(hits.end(), found.begin(), found.end());
        }
    }
    canonicalize_hits(hits);
    return hits;
}

// ---- exclusion ----

RankProvider descent_provider(const DescentOptions& opt)
{
    return [opt](const CatalogCurve& c) { return two_descent(c.curve, opt); };
}

std::string target_name(ExclusionTarget t) { return t == ExclusionTarget::Face ? "face" : "internal"; }

std::string verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::Prohibited: return "Prohibited";
    case Verdict::NotProhibited: return "NotProhibited";
    case Verdict::Unknown: return "Unknown";
    }
    return "?";
}

bool rank_zero(const RankBound& b) { return b.status == RankStatus::RankZeroCertified; }
bool rank_positive(const RankBound& b) { return b.status == RankStatus::PositiveRankCertified && b.lower >= 1; }

namespace {

ExclusionVerdict run_exclusion(const ParamPair& pair, ExclusionTarget target, const RankProvider& rank)
{
    ExclusionVerdict v;
    v.pair = pair;
    v.target = target;
    std::array<bool, 4> zero{}, pos{};
    for (int i = 1; i <= 4; ++i) {
        const CatalogCurve cc = target == ExclusionTarget::Face ? ef_curve(i, pair) : ei_curve(i, pair);
        RankBound b = rank(cc);
        zero[i - 1] = rank_zero(b);
        pos[i - 1] = rank_positive(b);
        v.curves.push_back({cc.key(), std::move(b)});
    }
    bool prohibited, allowed;
    if (target == ExclusionTarget::Face) {
        prohibited = zero[0] || zero[1] || (zero[2] && zero[3]);
        allowed = pos[0] && pos[1] && (pos[2] || pos[3]);
    } else {
        prohibited = (zero[0] && zero[1]) || (zero[2] && zero[3]);
        allowed = (pos[0] || pos[1]) && (pos[2] || pos[3]);
    }
    verify(!(prohibited && allowed), "exclusion certificates contradict each other at " + pair.str());
    v.verdict = prohibited ? Verdict::Prohibited : allowed ? Verdict::NotProhibited : Verdict::Unknown;
    return v;
}

} // namespace

ExclusionVerdict exclude_face(const ParamPair& pair, const RankProvider& rank)
{
    return run_exclusion(pair, ExclusionTarget::Face, rank);
}

ExclusionVerdict exclude_internal(const ParamPair& pair, const RankProvider& rank)
{
    return run_exclusion(pair, ExclusionTarget::Internal, rank);
}

// ---- algorithm 2 ----

namespace {

std::optional<IvdSquares> integral_cuboid(const std::array<Rational, 3>& sq)
{
    Integer l = 1;
    for (const auto& s : sq) {
        if (sgn(s) <= 0) return std::nullopt;
        l = lcm(l, Integer(s.get_den()));
    }
    std::array<Integer, 3> v;
    for (int i = 0; i < 3; ++i) v[i] = sq[i].get_num() * (l / sq[i].get_den());
    return primitive(IvdSquares::make(v[0], v[1], v[2]));
}

} // namespace

std::optional<IvdSquares> face_cuboid_from_x(const Integer& a, const Integer& b, const Rational& x)
{
    const Integer ab2 = a * a * b * b;
    const Rational den = x - Rational(ab2);
    if (sgn(den) <= 0) return std::nullopt;
    Rational c2 = Rational(ab2 * (a * a + b * b)) / den;
    c2.canonicalize();
    return integral_cuboid({Rational(a * a), Rational(b * b), c2});
}

std::optional<IvdSquares> internal_cuboid_from_x(const Integer& u, const Integer& v, const Rational& x)
{
    const Integer uv2 = u * u * v * v;
    const Rational den = x + Rational(uv2);
    if (sgn(den) <= 0) return std::nullopt;
    Rational b2 = Rational(uv2 * (u * u + v * v)) / den;
    b2.canonicalize();
    Rational c2 = Rational(v * v) - b2;
    c2.canonicalize();
    return integral_cuboid({Rational(u * u), b2, c2});
}

Algo2PairReport algo2_pair(const ParamPair& pair, HitKind kind, const RankProvider& rank, const Algo2Options& opt,
                           std::vector<BpcHit>& hits)
{
    Algo2PairReport rep;
    rep.pair = pair;
    rep.kind = kind;
    const Integer a = pair.odd_leg(), b = pair.even_leg();
    struct Job {
        CatalogCurve curve;
        Integer u, v;
    };
    std::vector<Job> jobs;
    if (kind == HitKind::FBpc) {
        jobs.push_back({ef_curve(2, pair), a, b});
    } else {
        jobs.push_back({ei_curve(1, pair), a, b});
        jobs.push_back({ei_curve(2, pair), b, a});
    }
    const BpcClass want = kind == HitKind::FBpc ? BpcClass::FBpc : BpcClass::IBpc;
    const long N = static_cast<long>(opt.depth);
    for (auto& job : jobs) {
        const SplitCubic& c = job.curve.curve;
        RankBound rb = rank(job.curve);
        const std::string key = job.curve.key();
        if (rb.status == RankStatus::Inconclusive) rep.inconclusive.push_back(key);
        const auto gens = rb.points;
        rep.curves.push_back({key, std::move(rb)});
        if (gens.empty()) continue;
        const auto tors = torsion_points(c);
        const std::size_t r = gens.size();
        std::vector<std::vector<CurvePoint>> multiples(r);
        for (std::size_t i = 0; i < r; ++i) {
            for (long n = -N; n <= N; ++n) multiples[i].push_back(multiply(c, gens[i], n));
        }
        std::vector<long> coef(r, -N);
        auto try_point = [&](const CurvePoint& pt) {
            if (pt.infinity) return;
            ++rep.candidates;
            auto cub = kind == HitKind::FBpc ? face_cuboid_from_x(job.u, job.v, pt.x)
                                             : internal_cuboid_from_x(job.u, job.v, pt.x);
            if (!cub) return;
            auto cls = classify(*cub);
            if (cls.cls != want) return;
            BpcHit h;
            h.kind = kind;
            h.cuboid = *cub;
            h.cls = cls;
            h.aspect_pair = pair;
            h.curve = key;
            h.curve_x = pt.x;
            hits.push_back(std::move(h));
        };
        while (true) {
            // Skip zero and keep one of +-n: the first nonzero coefficient is positive.
            auto lead = std::find_if(coef.begin(), coef.end(), [](long x) { return x != 0; });
            if (lead != coef.end() && *lead > 0) {
                CurvePoint P = CurvePoint::at_infinity();
                for (std::size_t i = 0; i < r; ++i) P = add(c, P, multiples[i][coef[i] + N]);
                for (const auto& T : tors) {
                    const CurvePoint Q = add(c, P, T);
                    try_point(Q);
                    try_point(dbl(c, Q));
                }
            }
            std::size_t i = 0;
            while (i < r && coef[i] == N) coef[i++] = -N;
            if (i == r) break;
            ++coef[i];
        }
    }
    return rep;
}

Algo2Result algo2_scan(const std::vector<ParamPair>& pairs, HitKind kind, const RankProvider& rank,
                       const Algo2Options& opt)
{
    const int nt = thread_count(opt.threads);
    std::vector<Algo2PairReport> reports(pairs.size());
    std::vector<std::vector<BpcHit>> found(pairs.size());
    ErrorSlot err;
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt) if (opt.parallel)
    for (std::int64_t i = 0; i < std::int64_t(pairs.size()); ++i) {
        try {
            reports[i] = algo2_pair(pairs[i], kind, rank, opt, found[i]);
        } catch (...) {
            err.capture();
        }
    }
    err.rethrow();
    Algo2Result res;
    res.reports = std::move(reports);
    std::map<std::array<Integer, 3>, BpcHit> merged;
    for (auto& v : found) {
        for (auto& h : v) merge_hit(merged, std::move(h));
    }
    res.hits = flatten(merged);
    return res;
}

// ---- 2-BPC scan ----

namespace {

// Only 2 or 5 non-squares sharing one SFP can classify as a 2-BPC.
bool two_bpc_candidate(std::uint64_t a, std::uint64_t b, std::uint64_t c)
{
    const std::array<std::uint64_t, 7> v = {a, b, c, a + b, a + c, b + c, a + b + c};
    std::array<std::uint64_t, 7> ns{};
    int n = 0;
    for (auto x : v) {
        if (!is_square(x)) ns[n++] = x;
    }
    if (n != 2 && n != 5) return false;
    for (int i = 1; i < n; ++i) {
        const u128 prod = u128(ns[0]) * ns[i];
        const SfpKey wide{static_cast<std::uint64_t>(prod >> 64), static_cast<std::uint64_t>(prod)};
        if (!is_square(wide.value())) return false;
    }
    return true;
}

void finish_scan(TwoBpcScan& s)
{
    std::sort(s.findings.begin(), s.findings.end(), [](const TwoBpcFinding& x, const TwoBpcFinding& y) {
        return std::tie(x.cuboid.sa, x.cuboid.sb, x.cuboid.sc) < std::tie(y.cuboid.sa, y.cuboid.sb, y.cuboid.sc);
    });
}

} // namespace

TwoBpcScan two_bpc_scan(std::uint64_t bound, bool parallel, int threads)
{
    require(bound >= 1 && bound < (1ULL << 40), "two_bpc_scan: bound out of range");
    const int nt = thread_count(threads);
    TwoBpcScan out;
    std::mutex mu;
    ErrorSlot err;
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt) if (parallel)
    for (std::int64_t ia = 1; ia <= std::int64_t(bound); ++ia) {
        try {
            const auto a = static_cast<std::uint64_t>(ia);
            std::uint64_t local = 0;
            std::vector<TwoBpcFinding> mine;
            for (std::uint64_t b = a; b <= bound; ++b) {
                const std::uint64_t g = std::gcd(a, b);
                for (std::uint64_t c = b; c <= bound; ++c) {
                    if (std::gcd(g, c) != 1) continue;
                    ++local;
                    if (!two_bpc_candidate(a, b, c)) continue;
                    const auto ivd = IvdSquares::make(Integer(a), Integer(b), Integer(c));
                    const auto cls = classify(ivd);
                    if (cls.cls == BpcClass::TwoBpc) mine.push_back({ivd, cls});
                }
            }
            std::lock_guard lock(mu);
            out.triples += local;
            out.findings.insert(out.findings.end(), mine.begin(), mine.end());
        } catch (...) {
            err.capture();
        }
    }
    err.rethrow();
    finish_scan(out);
    return out;
}

TwoBpcScan two_bpc_scan_reference(std::uint64_t bound)
{
    require(bound >= 1, "two_bpc_scan_reference: bound must be >= 1");
    TwoBpcScan out;
    for (std::uint64_t a = 1; a <= bound; ++a) {
        for (std::uint64_t b = a; b <= bound; ++b) {
            for (std::uint64_t c = b; c <= bound; ++c) {
                if (std::gcd(std::gcd(a, b), c) != 1) continue;
                ++out.triples;
                const auto ivd = IvdSquares::make(Integer(a), Integer(b), Integer(c));
                const auto cls = classify(ivd);
                if (cls.cls == BpcClass::TwoBpc) out.findings.push_back({ivd, cls});
            }
        }
    }
    finish_scan(out);
    return out;
}

// ---- pentacycles ----

bool pentacycle_check(const std::array<Rational, 3>& trio, const KlnTriple& t1, const KlnTriple& t2)
{
    if (!t1.ln_square() || !t2.ln_square()) return false;
    const Rational mid1 = 1 / k_over_m(t1), mid2 = 1 / k_over_m(t2);
    if (trio[1] != mid1 || trio[1] != mid2) return false;
    const Rational f1 = sqrt_l_over_n(t1), f2 = sqrt_l_over_n(t2);
    return (trio[0] == f1 && trio[2] == f2) || (trio[0] == f2 && trio[2] == f1);
}

} // namespace bpc
