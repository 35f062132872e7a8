#include "bpc/cuboid.hpp"

#include <algorithm>
#include <bit>

#include "bpc/error.hpp"

namespace bpc {

namespace {

constexpr std::uint8_t kA = slot_bit(IvdSlot::A);
constexpr std::uint8_t kB = slot_bit(IvdSlot::B);
constexpr std::uint8_t kC = slot_bit(IvdSlot::C);
constexpr std::uint8_t kAB = slot_bit(IvdSlot::AB);
constexpr std::uint8_t kAC = slot_bit(IvdSlot::AC);
constexpr std::uint8_t kBC = slot_bit(IvdSlot::BC);
constexpr std::uint8_t kABC = slot_bit(IvdSlot::ABC);
constexpr std::uint8_t kEdges = kA | kB | kC;
constexpr std::uint8_t kFaces = kAB | kAC | kBC;

// Face diagonal slot spanned by two edges.
std::uint8_t face_of(std::uint8_t e1, std::uint8_t e2)
{
    const std::uint8_t both = e1 | e2;
    if (both == (kA | kB)) return kAB;
    if (both == (kA | kC)) return kAC;
    return kBC;
}

// Edge perpendicular to a face diagonal.
std::uint8_t edge_opposite(std::uint8_t face)
{
    if (face == kAB) return kC;
    if (face == kAC) return kB;
    return kA;
}

TwoBpcSubclass two_bpc_subclass(std::uint8_t mask)
{
    const int edges = std::popcount(static_cast<unsigned>(mask & kEdges));
    const int faces = std::popcount(static_cast<unsigned>(mask & kFaces));
    const bool main = (mask & kABC) != 0;
    if (edges == 2) return TwoBpcSubclass::EdgeEdge;
    if (edges == 1 && main) return TwoBpcSubclass::EdgeMainDiagonal;
    if (edges == 1 && faces == 1) {
        return edge_opposite(mask & kFaces) == (mask & kEdges) ? TwoBpcSubclass::EdgePerpendicularFaceDiagonal
                                                             : TwoBpcSubclass::EdgeAdjacentFaceDiagonal;
    }
    if (faces == 2) return TwoBpcSubclass::FaceDiagonalFaceDiagonal;
    return TwoBpcSubclass::FaceDiagonalMainDiagonal;
}

bool is_face_pattern(std::uint8_t mask)
{
    for (auto [e1, e2] : {std::pair{kA, kB}, std::pair{kA, kC}, std::pair{kB, kC}}) {
        if (mask == (e1 | e2 | face_of(e1, e2))) return true;
    }
    return false;
}

bool is_internal_pattern(std::uint8_t mask)
{
    for (std::uint8_t face : {kAB, kAC, kBC}) {
        if (mask == (edge_opposite(face) | face | kABC)) return true;
    }
    return false;
}

} // namespace

std::string slot_name(IvdSlot s)
{
    switch (s) {
    case IvdSlot::A: return "a";
    case IvdSlot::B: return "b";
    case IvdSlot::C: return "c";
    case IvdSlot::AB: return "ab";
    case IvdSlot::AC: return "ac";
    case IvdSlot::BC: return "bc";
    case IvdSlot::ABC: return "abc";
    }
    return "?";
}

IvdSquares IvdSquares::make(Integer sa, Integer sb, Integer sc)
{
    require(sa >= 1 && sb >= 1 && sc >= 1, "squared edges must be positive");
    return {std::move(sa), std::move(sb), std::move(sc)};
}

std::array<Integer, 7> IvdSquares::values() const { return {sa, sb, sc, sab(), sac(), sbc(), sabc()}; }

std::string class_name(BpcClass c)
{
    switch (c) {
    case BpcClass::Perfect: return "Perfect";
    case BpcClass::EulerBrick: return "EulerBrick";
    case BpcClass::FaceCuboid: return "FaceCuboid";
    case BpcClass::EdgeCuboid: return "EdgeCuboid";
    case BpcClass::TwoBpc: return "TwoBpc";
    case BpcClass::FBpc: return "FBpc";
    case BpcClass::IBpc: return "IBpc";
    case BpcClass::ThreeBpcOther: return "ThreeBpcOther";
    case BpcClass::NotBpc: return "NotBpc";
    }
    return "NotBpc";
}

std::optional<BpcClass> parse_class(const std::string& name)
{
    for (auto c : {BpcClass::Perfect, BpcClass::EulerBrick, BpcClass::FaceCuboid, BpcClass::EdgeCuboid,
                   BpcClass::TwoBpc, BpcClass::FBpc, BpcClass::IBpc, BpcClass::ThreeBpcOther, BpcClass::NotBpc}) {
        if (class_name(c) == name) return c;
    }
    return std::nullopt;
}

BpcClassification classify(const IvdSquares& ivd)
{
    require(ivd.sa >= 1 && ivd.sb >= 1 && ivd.sc >= 1, "classify: squared edges must be positive");
    auto vals = ivd.values();
    Integer g = gcd(gcd(ivd.sa, ivd.sb), ivd.sc);
    BpcClassification out;
    out.reduction_gcd = g;
    std::vector<Integer> nonsquares;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        mpz_divexact(vals[i].get_mpz_t(), vals[i].get_mpz_t(), g.get_mpz_t());
        if (!is_square(vals[i])) {
            out.nonsquare_mask |= static_cast<std::uint8_t>(1u << i);
            nonsquares.push_back(vals[i]);
        }
    }
    if (nonsquares.empty()) {
        out.cls = BpcClass::Perfect;
        out.shared_sfp = 1;
        return out;
    }
    // Cheap rejection before factoring: all products of pairs must be squares.
    for (std::size_t i = 1; i < nonsquares.size(); ++i) {
        if (!is_square(Integer(nonsquares[0] * nonsquares[i]))) return out;
    }
    // Each non-square is M s_i^2, so the gcd has square-free part M and is far smaller to factor.
    Integer g0 = nonsquares[0];
    for (const auto& v : nonsquares) g0 = gcd(g0, v);
    // The class never needs M itself, so give up on it when g0 will not factor quickly.
    auto m = try_sfp(g0, 16);
    out.shared_sfp = m ? *m : Integer(0);
    std::size_t count = nonsquares.size();
    if (count > 3) {
        // Scaling every squared IVD by M (or by g0, same square class) swaps squares and non-squares.
        out.twist = m ? *m : g0;
        out.nonsquare_mask = static_cast<std::uint8_t>(~out.nonsquare_mask & 0x7f);
        count = 7 - count;
        if (count == 0) {
            out.cls = BpcClass::Perfect;
            return out;
        }
    }
    const std::uint8_t mask = out.nonsquare_mask;

    switch (count) {
    case 1:
        if (mask & kEdges) out.cls = BpcClass::EdgeCuboid;
        else if (mask & kFaces) out.cls = BpcClass::FaceCuboid;
        else out.cls = BpcClass::EulerBrick;
        break;
    case 2:
        out.cls = BpcClass::TwoBpc;
        out.subclass = two_bpc_subclass(mask);
        break;
    default:
        if (is_face_pattern(mask)) out.cls = BpcClass::FBpc;
        else if (is_internal_pattern(mask)) out.cls = BpcClass::IBpc;
        else out.cls = BpcClass::ThreeBpcOther;
        break;
    }
    return out;
}

BpcClassification classify(const Integer& sa, const Integer& sb, const Integer& sc)
{
    return classify(IvdSquares::make(sa, sb, sc));
}

std::array<Integer, 3> shape_key(const IvdSquares& ivd)
{
    Integer g = gcd(gcd(ivd.sa, ivd.sb), ivd.sc);
    std::array<Integer, 3> k = {ivd.sa / g, ivd.sb / g, ivd.sc / g};
    std::sort(k.begin(), k.end());
    return k;
}

KlnTriple KlnTriple::make(Integer k, Integer l, Integer n)
{
    require(k >= 1 && n >= 1, "kln: k and n must be positive");
    require(l > n, "kln: need l > n");
    return {std::move(k), std::move(l), std::move(n)};
}

Integer KlnTriple::m() const
{
    Integer ln = l * n;
    require(is_square(ln), "kln: ln is not a square");
    return isqrt(ln);
}

bool operator<(const KlnTriple& x, const KlnTriple& y)
{
    if (x.k != y.k) return x.k < y.k;
    if (x.l != y.l) return x.l < y.l;
    return x.n < y.n;
}

int KlnQuantities::nonsquare_count() const
{
    return static_cast<int>(std::count(square.begin(), square.end(), false));
}

KlnQuantities kln_quantities(const KlnTriple& t)
{
    require(t.l > t.n, "kln: need l > n");
    const Integer ln = t.l * t.n;
    const Integer k2 = t.k * t.k;
    KlnQuantities q;
    q.values = {ln, k2 + t.l * t.l, k2 + ln, k2 + t.n * t.n, t.l * t.l - ln};
    for (std::size_t i = 0; i < q.values.size(); ++i) q.square[i] = is_square(q.values[i]);
    return q;
}

IvdSquares cuboid_from_kln(const KlnTriple& t)
{
    require(t.l > t.n, "kln: need l > n");
    const Integer ln = t.l * t.n;
    require(is_square(ln), "cuboid_from_kln: ln is not a square");
    const Integer k2 = t.k * t.k;
    return IvdSquares::make(ln * (k2 + ln), t.l * t.l * (ln - t.n * t.n), k2 * (t.l * t.l - ln));
}

Rational sqrt_l_over_n(const KlnTriple& t)
{
    Rational r(t.m(), t.n);
    r.canonicalize();
    return r;
}

Rational k_over_m(const KlnTriple& t)
{
    Rational r(t.k, t.m());
    r.canonicalize();
    return r;
}

namespace {

Rational frame_ratio(const KlnTriple& t)
{
    Rational r(2 * (t.k * t.k + t.l * t.n), t.k * (t.l - t.n));
    r.canonicalize();
    return r;
}

Rational spread(const KlnTriple& t)
{
    Rational s = sqrt_l_over_n(t);
    return s - 1 / s;
}

} // namespace

CousinReport check_cousin(const KlnTriple& t1, const KlnTriple& t2)
{
    require(t1.ln_square() && t2.ln_square(), "check_cousin: both triples need ln square");
    CousinReport r;
    r.ratio_first = k_over_m(t1);
    r.ratio_second = k_over_m(t2);
    r.frame_first = frame_ratio(t1);
    r.frame_second = frame_ratio(t2);
    r.spread_first = spread(t1);
    r.spread_second = spread(t2);
    r.cousins = r.ratio_first == r.ratio_second && r.frame_first == r.spread_second &&
                r.frame_second == r.spread_first;
    return r;
}

std::vector<VariantCandidate> variant_params_h(const ParamPair& pp1, const ParamPair& pp2)
{
    const Integer p1(pp1.p), q1(pp1.q), p2(pp2.p), q2(pp2.q);
    std::vector<VariantCandidate> out;
    auto push = [&](Integer a, Integer b) {
        VariantCandidate c;
        if (a < b) std::swap(a, b);
        c.first = a;
        c.second = b;
        if (b == 0) {
            c.note = "second parameter is zero";
        } else if (!a.fits_ulong_p()) {
            c.note = "parameter exceeds 64 bits";
        } else if (!ParamPair::admissible(a.get_ui(), b.get_ui())) {
            c.note = gcd(a, b) != 1 ? "not coprime" : "same parity";
        } else {
            c.admissible = true;
            c.pair = ParamPair{a.get_ui(), b.get_ui()};
        }
        out.push_back(std::move(c));
    };
    push(p1 * q2 + q1 * p2, abs(p1 * p2 - q1 * q2));
    push(p1 * p2 + q1 * q2, abs(p1 * q2 - q1 * p2));
    return out;
}

std::string variant_name(VariantKind v)
{
    switch (v) {
    case VariantKind::LM: return "LM";
    case VariantKind::MN: return "MN";
    case VariantKind::None: return "none";
    }
    return "none";
}

VariantKind classify_variant(const KlnTriple& t)
{
    require(t.l > t.n, "kln: need l > n");
    const Integer ln = t.l * t.n;
    require(!is_square(ln), "classify_variant: ln is a square; use the picture-frame classification");
    const Integer k2 = t.k * t.k;
    const bool common = is_square(Integer(k2 + t.l * t.l)) && is_square(Integer(k2 + ln)) &&
                        is_square(Integer(k2 + t.n * t.n));
    if (!common) return VariantKind::None;
    if (is_square(Integer(t.l * t.l - ln))) return VariantKind::LM;
    if (is_square(Integer(ln - t.n * t.n))) return VariantKind::MN;
    return VariantKind::None;
}

Plinth Plinth::make(Rational b1, Rational b2, Rational c1, Rational c2, Rational height_sq)
{
    require(sgn(b1) > 0 && sgn(b2) > 0 && sgn(c1) > 0 && sgn(c2) > 0, "plinth: edges must be positive");
    require(sgn(height_sq) >= 0, "plinth: height_sq must be non-negative");
    return {std::move(b1), std::move(b2), std::move(c1), std::move(c2), std::move(height_sq)};
}

Rational Plinth::slant_sq() const
{
    Rational dx = (b1 - c1) / 2, dy = (b2 - c2) / 2;
    return dx * dx + dy * dy + height_sq;
}

std::array<std::array<Rational, 3>, 8> plinth_vertices(const Plinth& pl)
{
    // 0..3 base (z = 0), 4..7 ceiling; vertex i+4 sits above vertex i.
    std::array<std::array<Rational, 3>, 8> v;
    const int sx[4] = {1, -1, -1, 1};
    const int sy[4] = {1, 1, -1, -1};
    for (int i = 0; i < 4; ++i) {
        v[i] = {Rational(pl.b1 * sx[i] / 2), Rational(pl.b2 * sy[i] / 2), Rational(0)};
        v[i + 4] = {Rational(pl.c1 * sx[i] / 2), Rational(pl.c2 * sy[i] / 2), Rational(1)};
    }
    return v;
}

PlinthReport verify_plinth(const Plinth& pl)
{
    auto v = plinth_vertices(pl);
    PlinthReport rep;
    for (int i = 0; i < 8; ++i) {
        for (int j = i + 1; j < 8; ++j) {
            Rational dx = v[i][0] - v[j][0], dy = v[i][1] - v[j][1];
            Rational d2 = dx * dx + dy * dy;
            // z marks base/ceiling membership; the vertical offset enters as height_sq.
            if (v[i][2] != v[j][2]) d2 += pl.height_sq;
            PlinthDistance d{i, j, d2, false};
            d.integer_square = d2.get_den() == 1 && is_square(Integer(d2.get_num()));
            if (d.integer_square) ++rep.integer_count;
            rep.distances.push_back(std::move(d));
        }
    }
    rep.perfect = rep.integer_count == rep.distances.size();
    return rep;
}

bool TrapeziumSq::identity_holds() const
{
    Rational diff = d - a;
    return sgn(diff) >= 0 && diff * diff == b * c;
}

std::array<TrapeziumSq, 3> plinth_trapezia(const Plinth& pl)
{
    const Rational slant = pl.slant_sq();
    auto face = [&](const Rational& base, const Rational& ceil, const Rational& other_base,
                    const Rational& other_ceil) {
        // Diagonal runs across the face: half-sum of parallel sides, offset of
        // the perpendicular half-edges, plus height.
        Rational half_sum = (base + ceil) / 2;
        Rational off = (other_base - other_ceil) / 2;
        Rational d = half_sum * half_sum + off * off + pl.height_sq;
        return TrapeziumSq{base * base, ceil * ceil, slant, d};
    };
    TrapeziumSq f1 = face(pl.b1, pl.c1, pl.b2, pl.c2);
    TrapeziumSq f2 = face(pl.b2, pl.c2, pl.b1, pl.c1);
    Rational base_diag = pl.b1 * pl.b1 + pl.b2 * pl.b2;
    Rational ceil_diag = pl.c1 * pl.c1 + pl.c2 * pl.c2;
    Rational sx = (pl.b1 + pl.c1) / 2, sy = (pl.b2 + pl.c2) / 2;
    TrapeziumSq internal{base_diag, ceil_diag, slant, sx * sx + sy * sy + pl.height_sq};
    return {f1, f2, internal};
}

Plinth scale_plinth(const Plinth& pl, const Integer& i, const Integer& j)
{
    require(i >= 1 && j >= 1, "scale_plinth: i, j must be >= 1");
    const Rational i2(i * i), j2(j * j);
    Plinth out{pl.b1 * j2, pl.b2 * j2, pl.c1 * i2, pl.c2 * i2, Rational(0)};
    Rational slant = pl.slant_sq() * i2 * j2;
    Rational dx = (out.b1 - out.c1) / 2, dy = (out.b2 - out.c2) / 2;
    out.height_sq = slant - dx * dx - dy * dy;
    require(sgn(out.height_sq) >= 0, "scale_plinth: scaled slant too short, height_sq would be negative");
    return out;
}

Plinth ppf_from_plinth(const Plinth& pl)
{
    require(verify_plinth(pl).perfect, "ppf_from_plinth: input plinth is not perfect");
    auto tr = plinth_trapezia(pl);
    const TrapeziumSq& internal = tr[2];
    auto root = [](const Rational& sq) {
        auto r = rational_sqrt(sq);
        verify(r.has_value(), "ppf_from_plinth: internal trapezium side not rational");
        return *r;
    };
    // internal trapezium: a = slant, c = ceiling diagonal, d = space diagonal
    const Rational ceiling_diag = root(internal.c);
    const Rational d = root(internal.d);
    const Rational a = root(internal.a);
    const Rational dma = d - a;
    const Rational base_scale = ceiling_diag * ceiling_diag;
    const Rational ceil_scale = dma * dma;
    Plinth out{pl.b1 * base_scale, pl.b2 * base_scale, pl.c1 * ceil_scale, pl.c2 * ceil_scale, Rational(0)};
    Rational slant = internal.a * ceiling_diag * ceiling_diag * dma * dma;
    Rational dx = (out.b1 - out.c1) / 2, dy = (out.b2 - out.c2) / 2;
    out.height_sq = slant - dx * dx - dy * dy;
    verify(sgn(out.height_sq) == 0, "ppf_from_plinth: scaled plinth is not degenerate");
    return out;
}

} // namespace bpc
