#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bpc/arith.hpp"
#include "bpc/elliptic.hpp"

namespace bpc {

enum class RankStatus { RankZeroCertified, PositiveRankCertified, Inconclusive };
std::string status_name(RankStatus s);

// Local image of E(Q_p)/2E(Q_p) in (Q_p^*/Q_p^*2)^2. Place 0 is the real place.
struct PlaceImage {
    std::uint64_t place = 0;
    std::size_t expected = 0;  // |E(Q_p)/2E(Q_p)|
    std::size_t found = 0;     // size of the sampled subgroup
    bool complete() const { return found == expected; }
};

struct TorsorEntry {
    Integer d1, d2;
    bool selmer = false;
    std::uint64_t failed_place = 0;  // first place whose image excludes (d1, d2); meaningful when !selmer
    std::optional<CurvePoint> point;  // global point on this torsor if one was found
};

struct DescentCertificate {
    SplitCubic curve;  // integral roots, in the order used by the Kummer map
    std::vector<PlaceImage> places;
    std::vector<TorsorEntry> table;
    std::size_t selmer_size = 0;
    std::size_t image_size = 0;  // subgroup generated by torsion and found points
    std::optional<unsigned> upper;
    unsigned lower = 0;
    std::string note;
};

struct RankBound {
    unsigned lower = 0;
    std::optional<unsigned> upper;
    RankStatus status = RankStatus::Inconclusive;
    std::vector<CurvePoint> points;  // non-torsion points found, independent mod 2E(Q) and torsion
    DescentCertificate certificate;
};

struct DescentOptions {
    std::uint64_t naive_bound = 60;    // direct search on the curve
    std::uint64_t conic_bound = 200;   // search for a base point on each torsor conic
    std::uint64_t torsor_bound = 400;  // parameter box on each torsor
    std::size_t max_primes = 14;       // per-root prime count before giving up
    std::uint64_t seed = 0x5eed;
    std::size_t sample_budget = 40000;
};

// Complete 2-descent via the Kummer map P -> (x - e1, x - e2). Requires
// integral roots.
RankBound two_descent(const SplitCubic& c, const DescentOptions& opt = {});

// (x - e1, x - e2) with the usual substitutions at the 2-torsion points;
// square classes reduced to signed square-free integers.
std::pair<Integer, Integer> kummer_image(const SplitCubic& c, const CurvePoint& p);

} // namespace bpc
