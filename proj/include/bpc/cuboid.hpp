#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bpc/arith.hpp"
#include "bpc/pythagoras.hpp"

namespace bpc {

// The seven inter-vertex distance slots of a cuboid with edges a, b, c.
enum class IvdSlot : std::uint8_t { A, B, C, AB, AC, BC, ABC };

inline constexpr std::uint8_t slot_bit(IvdSlot s) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(s)); }

std::string slot_name(IvdSlot s);

// Squared edges of a cuboid; the other four squared IVDs are sums of these.
struct IvdSquares {
    Integer sa, sb, sc;

    static IvdSquares make(Integer sa, Integer sb, Integer sc);

    Integer sab() const { return sa + sb; }
    Integer sac() const { return sa + sc; }
    Integer sbc() const { return sb + sc; }
    Integer sabc() const { return sa + sb + sc; }

    // In IvdSlot order.
    std::array<Integer, 7> values() const;
};

enum class BpcClass {
    Perfect,
    EulerBrick,
    FaceCuboid,
    EdgeCuboid,
    TwoBpc,
    FBpc,
    IBpc,
    ThreeBpcOther,
    NotBpc,
};

std::string class_name(BpcClass c);
std::optional<BpcClass> parse_class(const std::string& name);

// Six 2-BPC subclasses by the position of the two non-integer lengths.
enum class TwoBpcSubclass : int {
    None = 0,
    EdgeEdge = 1,
    EdgePerpendicularFaceDiagonal = 2,
    EdgeAdjacentFaceDiagonal = 3,
    EdgeMainDiagonal = 4,
    FaceDiagonalFaceDiagonal = 5,
    FaceDiagonalMainDiagonal = 6,
};

struct BpcClassification {
    BpcClass cls = BpcClass::NotBpc;
    TwoBpcSubclass subclass = TwoBpcSubclass::None;
    Integer shared_sfp = 1;  // 0 when the SFP was too costly to factor out
    std::uint8_t nonsquare_mask = 0;  // bits per IvdSlot, after primitive reduction
    Integer reduction_gcd = 1;
    // 1, or what every reduced squared IVD was multiplied by to expose the pattern.
    Integer twist = 1;

    bool is_bpc() const { return cls != BpcClass::NotBpc; }
    // Contradicts the 3-BPC impossibility argument; report, never drop.
    bool anomaly() const { return cls == BpcClass::ThreeBpcOther; }
};

BpcClassification classify(const IvdSquares& ivd);
BpcClassification classify(const Integer& sa, const Integer& sb, const Integer& sc);

// Primitive key of the cuboid shape: squared edges divided by their gcd, sorted.
std::array<Integer, 3> shape_key(const IvdSquares& ivd);

// Picture-frame triple: three Pythagorean triangles sharing leg k whose other
// legs l > n (and sqrt(ln)) are in geometric progression.
struct KlnTriple {
    Integer k, l, n;

    static KlnTriple make(Integer k, Integer l, Integer n);

    bool ln_square() const { return is_square(Integer(l * n)); }
    Integer m() const;  // sqrt(ln); requires ln_square()

    friend bool operator==(const KlnTriple&, const KlnTriple&) = default;
};

bool operator<(const KlnTriple& x, const KlnTriple& y);

struct KlnQuantities {
    // ln, k^2+l^2, k^2+ln, k^2+n^2, l^2-ln
    std::array<Integer, 5> values;
    std::array<bool, 5> square{};

    int nonsquare_count() const;
};

KlnQuantities kln_quantities(const KlnTriple& t);

// Edges sqrt(ln(k^2+ln)), l sqrt(ln-n^2), k sqrt(l^2-ln). Requires ln square.
IvdSquares cuboid_from_kln(const KlnTriple& t);

struct CousinReport {
    bool cousins = false;
    Rational ratio_first;   // k/sqrt(ln) of the first triple
    Rational ratio_second;
    Rational frame_first;   // 2(k^2+ln)/(k(l-n)) of the first triple
    Rational frame_second;
    Rational spread_first;  // sqrt(l/n) - sqrt(n/l) of the first triple
    Rational spread_second;

    explicit operator bool() const { return cousins; }
};

Rational sqrt_l_over_n(const KlnTriple& t);
Rational k_over_m(const KlnTriple& t);
CousinReport check_cousin(const KlnTriple& t1, const KlnTriple& t2);

struct VariantCandidate {
    Integer first;
    Integer second;
    bool admissible = false;
    std::optional<ParamPair> pair;
    std::string note;
};

// The two distinct candidates (p1q2+q1p2, |p1p2-q1q2|) and (p1p2+q1q2, |p1q2-q1p2|).
std::vector<VariantCandidate> variant_params_h(const ParamPair& pp1, const ParamPair& pp2);

enum class VariantKind { LM, MN, None };
std::string variant_name(VariantKind v);

// For triples with ln non-square. Throws DomainError when ln is a square.
VariantKind classify_variant(const KlnTriple& t);

// Isosceles rectangular frustum: base centred at the origin, ceiling centred
// above it at height sqrt(height_sq).
struct Plinth {
    Rational b1, b2;  // base edges
    Rational c1, c2;  // ceiling edges
    Rational height_sq;

    static Plinth make(Rational b1, Rational b2, Rational c1, Rational c2, Rational height_sq);

    Rational slant_sq() const;
};

struct PlinthDistance {
    int from = 0;
    int to = 0;
    Rational squared;
    bool integer_square = false;
};

struct PlinthReport {
    std::vector<PlinthDistance> distances;  // all 28 vertex pairs
    bool perfect = false;
    std::size_t integer_count = 0;
};

// z is a level flag (0 base, 1 ceiling); the height itself may be irrational.
std::array<std::array<Rational, 3>, 8> plinth_vertices(const Plinth& pl);
PlinthReport verify_plinth(const Plinth& pl);

// Squared sides of an isosceles trapezium: parallel sides b, c, slant a, diagonal d.
struct TrapeziumSq {
    Rational b, c, a, d;
    // d^2 - a^2 = bc, checked on squares: (d^2 - a^2)^2 = b^2 c^2 with d^2 >= a^2.
    bool identity_holds() const;
};

// Two face trapezia and the internal (diagonal-plane) trapezium.
std::array<TrapeziumSq, 3> plinth_trapezia(const Plinth& pl);

// Ceiling scaled by i^2, base by j^2, slant by ij. Throws DomainError if
// the result would need a negative height_sq.
Plinth scale_plinth(const Plinth& pl, const Integer& i, const Integer& j);

// Degenerate (height 0) perfect picture frame derived from a perfect plinth.
Plinth ppf_from_plinth(const Plinth& pl);

} // namespace bpc
