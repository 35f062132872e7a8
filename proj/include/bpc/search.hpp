#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bpc/catalog.hpp"
#include "bpc/cuboid.hpp"
#include "bpc/descent.hpp"

namespace bpc {

// ---- SFP collision store ----

// 128-bit SFP key; leg-product SFPs stay below 2^128 for p < 2^31.
struct SfpKey {
    std::uint64_t hi = 0, lo = 0;
    Integer value() const;
    friend auto operator<=>(const SfpKey&, const SfpKey&) = default;
};

struct SfpEntry {
    SfpKey key;
    std::uint32_t p = 0, q = 0;
};

// Fast leg-product SFP via the sieve; sieve limit must cover 2p + 2.
SfpKey sfp_key(const SfpSieve& sieve, std::uint32_t p, std::uint32_t q);

// SFP -> pairs sharing it, pairs kept in lexicographic order.
class SfpTable {
public:
    // Returns the pairs already stored under `key` (before this insert).
    std::vector<ParamPair> insert(const Integer& key, const ParamPair& pp);
    const std::vector<ParamPair>* find(const Integer& key) const;
    std::size_t size() const { return pairs_; }
    std::size_t distinct() const { return map_.size(); }
    const std::map<Integer, std::vector<ParamPair>>& buckets() const { return map_; }

private:
    std::map<Integer, std::vector<ParamPair>> map_;
    std::size_t pairs_ = 0;
};

// ---- hits ----

enum class HitKind { FBpc, IBpc };
std::string hit_kind_name(HitKind k);
std::optional<HitKind> parse_hit_kind(const std::string& s);

struct Collision {
    ParamPair first, second;  // first < second
    friend auto operator<=>(const Collision&, const Collision&) = default;
};

struct BpcHit {
    HitKind kind = HitKind::FBpc;
    IvdSquares cuboid;  // primitive squared edges, ascending
    BpcClassification cls;
    std::vector<KlnTriple> kln;       // sorted; empty for curve-only hits
    std::vector<Collision> sources;   // sorted; SFP collisions that produced it
    std::optional<Integer> collision_sfp;
    std::optional<ParamPair> aspect_pair;  // face or internal-rectangle pair
    std::string curve;                     // curve key for curve-driven hits
    std::optional<Rational> curve_x;

    std::array<Integer, 3> key() const { return {cuboid.sa, cuboid.sb, cuboid.sc}; }
};

// Re-runs classify on the stored cuboid; true iff it agrees with `kind`.
bool reverify(const BpcHit& hit);

// ---- (k,l,n) from two pairs ----

std::vector<KlnTriple> pair_to_kln(const ParamPair& pp1, const ParamPair& pp2);

// Hit built from a single triple, or nullopt if it is neither F nor I.
// Throws VerificationError if the quick square tests and classify disagree.
std::optional<BpcHit> hit_from_kln(const KlnTriple& t);

// Face (F) or internal-rectangle (I) aspect pair of a triple.
std::optional<ParamPair> kln_aspect_pair(const KlnTriple& t, HitKind kind);

// ---- algorithm 1 ----

struct Algo1Checkpoint {
    std::uint64_t p_max = 0;
    ParamPair cursor;                // every collision with second <= cursor is done
    std::uint64_t table_digest = 0;  // order-free digest of all (key, p, q) up to cursor
    std::uint64_t hit_count = 0;
};

enum class StoreMode { Exact, Bloom };

struct Algo1Options {
    std::uint64_t p_max = 100;
    bool parallel = true;
    int threads = 0;  // 0 keeps the OpenMP default
    std::uint64_t block = 512;  // checkpoint granularity in p
    StoreMode store = StoreMode::Exact;
    unsigned bloom_log2_bits = 26;
    unsigned bloom_partitions = 1;  // runs split by smallest prime of the SFP
    std::optional<Algo1Checkpoint> resume;
    std::vector<BpcHit> prior;  // hits already emitted before `resume`
    std::function<void(const Algo1Checkpoint&, const std::vector<BpcHit>&)> on_checkpoint;
};

struct Algo1Result {
    std::vector<BpcHit> hits;
    std::uint64_t pairs = 0;
    std::uint64_t collisions = 0;
    std::uint64_t candidates = 0;  // bloom mode: pairs surviving pass one
    Algo1Checkpoint final_checkpoint;
};

Algo1Result algo1_scan(const Algo1Options& opt);
// Straightforward streaming version: big-integer SFPs in an ordered map.
std::vector<BpcHit> algo1_scan_reference(std::uint64_t p_max);

// Order-free digest of all pairs up to and including `cursor`.
std::uint64_t table_digest(const ParamPair& cursor);

// Canonical output order and merge of hits with equal cuboids.
void canonicalize_hits(std::vector<BpcHit>& hits);

// ---- exclusion and curve-driven search ----

using RankProvider = std::function<RankBound(const CatalogCurve&)>;
RankProvider descent_provider(const DescentOptions& opt = {});

enum class ExclusionTarget { Face, Internal };
enum class Verdict { Prohibited, NotProhibited, Unknown };
std::string target_name(ExclusionTarget t);
std::string verdict_name(Verdict v);

struct CurveCertificate {
    std::string key;
    RankBound bound;
};

struct ExclusionVerdict {
    ParamPair pair;
    ExclusionTarget target = ExclusionTarget::Face;
    Verdict verdict = Verdict::Unknown;
    std::vector<CurveCertificate> curves;
};

bool rank_zero(const RankBound& b);
bool rank_positive(const RankBound& b);

ExclusionVerdict exclude_face(const ParamPair& pair, const RankProvider& rank);
ExclusionVerdict exclude_internal(const ParamPair& pair, const RankProvider& rank);

struct Algo2Options {
    unsigned depth = 2;  // |n_i| bound on generator coefficients
    bool parallel = true;
    int threads = 0;
};

struct Algo2PairReport {
    ParamPair pair;
    HitKind kind = HitKind::FBpc;
    std::vector<CurveCertificate> curves;
    std::vector<std::string> inconclusive;  // curve keys skipped for lack of a rank decision
    std::size_t candidates = 0;
};

struct Algo2Result {
    std::vector<BpcHit> hits;
    std::vector<Algo2PairReport> reports;
};

// Squared edges recovered from a point x on EF2 (F) or EI1/EI2 (I); nullopt
// when the point does not give a real cuboid.
std::optional<IvdSquares> face_cuboid_from_x(const Integer& a, const Integer& b, const Rational& x);
std::optional<IvdSquares> internal_cuboid_from_x(const Integer& u, const Integer& v, const Rational& x);

Algo2PairReport algo2_pair(const ParamPair& pair, HitKind kind, const RankProvider& rank, const Algo2Options& opt,
                           std::vector<BpcHit>& hits);
Algo2Result algo2_scan(const std::vector<ParamPair>& pairs, HitKind kind, const RankProvider& rank,
                       const Algo2Options& opt = {});

// ---- 2-BPC scan ----

struct TwoBpcFinding {
    IvdSquares cuboid;
    BpcClassification cls;
};

struct TwoBpcScan {
    std::uint64_t triples = 0;  // primitive triples examined
    std::vector<TwoBpcFinding> findings;
};

// All primitive squared-edge triples 1 <= sa <= sb <= sc <= bound.
TwoBpcScan two_bpc_scan(std::uint64_t bound, bool parallel = true, int threads = 0);
TwoBpcScan two_bpc_scan_reference(std::uint64_t bound);

// ---- pentacycles ----

bool pentacycle_check(const std::array<Rational, 3>& trio, const KlnTriple& t1, const KlnTriple& t2);

} // namespace bpc
