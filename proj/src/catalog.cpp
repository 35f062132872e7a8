#include "bpc/catalog.hpp"

#include <charconv>

#include "bpc/error.hpp"

namespace bpc {

namespace {

struct Legs {
    Integer a, b, d;
};

Legs legs(const ParamPair& pp) { return {pp.odd_leg(), pp.even_leg(), pp.hypotenuse()}; }

std::vector<Rational> two_torsion_x(const SplitCubic& c) { return {c.e1, c.e2, c.e3}; }

CatalogCurve with_pair(CurveId id, const ParamPair& pp, SplitCubic c)
{
    CatalogCurve out;
    out.id = id;
    out.pair = pp;
    out.curve = std::move(c);
    out.expected_torsion_x = two_torsion_x(out.curve);
    return out;
}

// x(x + u^2)(x + w^2) carries the extra torsion x = +-uw.
void add_uw_torsion(CatalogCurve& cc, const Integer& u, const Integer& w)
{
    cc.expected_torsion_x.push_back(Rational(u * w));
    cc.expected_torsion_x.push_back(Rational(-u * w));
}

Rational sq(const Integer& v) { return Rational(v * v); }

} // namespace

std::string curve_id_name(CurveId id)
{
    switch (id) {
    case CurveId::EF1: return "EF1";
    case CurveId::EF2: return "EF2";
    case CurveId::EF3: return "EF3";
    case CurveId::EF4: return "EF4";
    case CurveId::EI1: return "EI1";
    case CurveId::EI2: return "EI2";
    case CurveId::EI3: return "EI3";
    case CurveId::EI4: return "EI4";
    case CurveId::CN: return "CN";
    case CurveId::T2: return "T2";
    case CurveId::T5a: return "T5a";
    case CurveId::T5b: return "T5b";
    case CurveId::Face: return "Face";
    }
    return "?";
}

std::optional<CurveId> parse_curve_id(const std::string& name)
{
    for (auto id : {CurveId::EF1, CurveId::EF2, CurveId::EF3, CurveId::EF4, CurveId::EI1, CurveId::EI2, CurveId::EI3,
                    CurveId::EI4, CurveId::CN, CurveId::T2, CurveId::T5a, CurveId::T5b, CurveId::Face}) {
        if (curve_id_name(id) == name) return id;
    }
    return std::nullopt;
}

std::string CatalogCurve::key() const
{
    std::string k = curve_id_name(id) + ":";
    if (id == CurveId::CN) return k + to_string(n);
    if (id == CurveId::Face) return k + to_string(Integer(isqrt(Integer(-curve.e2.get_num())))) + "," +
                                    to_string(Integer(isqrt(Integer(-curve.e3.get_num()))));
    return k + std::to_string(pair->p) + "," + std::to_string(pair->q);
}

CatalogCurve ef_curve(int i, const ParamPair& pp)
{
    require(i >= 1 && i <= 4, "ef_curve: index must be 1..4");
    const auto [a, b, d] = legs(pp);
    const Integer s = a + b;  // p^2 - q^2 + 2pq, as printed
    switch (i) {
    case 1: {
        auto cc = with_pair(CurveId::EF1, pp, SplitCubic::make(0, -sq(a), -sq(b)));
        add_uw_torsion(cc, a, b);
        return cc;
    }
    case 2: {
        const Integer a2 = a * a, b2 = b * b;
        auto cc = with_pair(CurveId::EF2, pp, SplitCubic::make(0, -sq(a2), -sq(b2)));
        add_uw_torsion(cc, a2, b2);
        return cc;
    }
    case 3: {
        auto cc = with_pair(CurveId::EF3, pp, SplitCubic::make(0, -sq(a), -sq(s)));
        add_uw_torsion(cc, a, s);
        return cc;
    }
    default: {
        auto cc = with_pair(CurveId::EF4, pp, SplitCubic::make(0, -sq(b), -sq(s)));
        add_uw_torsion(cc, b, s);
        return cc;
    }
    }
}

CatalogCurve ei_curve(int i, const ParamPair& pp)
{
    require(i >= 1 && i <= 4, "ei_curve: index must be 1..4");
    const auto [a, b, d] = legs(pp);
    const Integer p2q2 = Integer(pp.p) * pp.p * pp.q * pp.q;
    const Integer p4 = pow(Integer(pp.p), 4), q4 = pow(Integer(pp.q), 4);
    switch (i) {
    case 1:
        // x(x - a^4)(x + f^4 + 2a^2 f^2) with f = 2pq equals x(x - a^4)(x + 8p^2q^2(p^4 + q^4)).
        return with_pair(CurveId::EI1, pp, SplitCubic::make(0, Rational(pow(a, 4)), Rational(-8 * p2q2 * (p4 + q4))));
    case 2: {
        const Integer b4 = pow(b, 4);
        return with_pair(CurveId::EI2, pp, SplitCubic::make(0, Rational(b4), Rational(-(pow(d, 4) - b4))));
    }
    case 3: return with_pair(CurveId::EI3, pp, SplitCubic::make(0, sq(a), sq(d)));
    default: return with_pair(CurveId::EI4, pp, SplitCubic::make(0, sq(b), sq(d)));
    }
}

CatalogCurve congruent_curve(const Integer& n)
{
    require(n >= 1, "congruent_curve: n must be >= 1");
    require(sfp(n) == n, "congruent_curve: n must be square-free");
    CatalogCurve cc;
    cc.id = CurveId::CN;
    cc.n = n;
    cc.curve = SplitCubic::make(0, Rational(n), Rational(-n));
    cc.expected_torsion_x = two_torsion_x(cc.curve);
    return cc;
}

CatalogCurve t2_curve(const ParamPair& pp)
{
    const auto [a, b, d] = legs(pp);
    auto cc = with_pair(CurveId::T2, pp, SplitCubic::make(-sq(a), -sq(b), -sq(d)));
    const Integer p(pp.p), q(pp.q);
    // (d-a)(d-b) = 2q^2(p-q)^2 is the x of this point on X(X - a^2)(X - b^2), X = x + d^2.
    const Integer X = 2 * q * q * (p - q) * (p - q);
    cc.known_generators.push_back(CurvePoint::affine(0, Rational(a * b * d)));
    cc.known_generators.push_back(CurvePoint::affine(Rational(X - d * d), Rational(X * (p * p + 2 * p * q - q * q))));
    return cc;
}

CatalogCurve t5_curve(const ParamPair& pp, bool swapped)
{
    const auto [odd, even, g] = legs(pp);
    const Integer a = swapped ? even : odd;
    const Integer e = swapped ? odd : even;
    // (x + a^2)(e^2 - x)(g^2 - x) = (x + a^2)(x - e^2)(x - g^2)
    auto cc = with_pair(swapped ? CurveId::T5b : CurveId::T5a, pp, SplitCubic::make(-sq(a), sq(e), sq(g)));
    const Integer aeg = a * e * g;
    cc.known_generators.push_back(CurvePoint::affine(0, Rational(aeg)));
    cc.known_generators.push_back(CurvePoint::affine(Rational(e * e - a * g), Rational(aeg)));
    return cc;
}

CatalogCurve face_curve(const Integer& u, const Integer& w)
{
    require(u >= 1 && w >= 1 && u != w, "face_curve: need distinct positive u, w");
    CatalogCurve cc;
    cc.id = CurveId::Face;
    cc.curve = SplitCubic::make(0, -sq(u), -sq(w));
    cc.expected_torsion_x = two_torsion_x(cc.curve);
    add_uw_torsion(cc, u, w);
    return cc;
}

namespace {

std::uint64_t parse_u64(const std::string& s)
{
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    require(ec == std::errc() && ptr == s.data() + s.size(), "bad number in curve key: " + s);
    return v;
}

} // namespace

CatalogCurve from_key(const std::string& key)
{
    const auto colon = key.find(':');
    require(colon != std::string::npos, "curve key needs ':'");
    const auto id = parse_curve_id(key.substr(0, colon));
    require(id.has_value(), "unknown curve id: " + key.substr(0, colon));
    const std::string rest = key.substr(colon + 1);
    if (*id == CurveId::CN) return congruent_curve(parse_integer(rest));
    const auto comma = rest.find(',');
    require(comma != std::string::npos, "curve key needs two parameters");
    const std::string s1 = rest.substr(0, comma), s2 = rest.substr(comma + 1);
    if (*id == CurveId::Face) return face_curve(parse_integer(s1), parse_integer(s2));
    const ParamPair pp = ParamPair::make(parse_u64(s1), parse_u64(s2));
    switch (*id) {
    case CurveId::EF1: return ef_curve(1, pp);
    case CurveId::EF2: return ef_curve(2, pp);
    case CurveId::EF3: return ef_curve(3, pp);
    case CurveId::EF4: return ef_curve(4, pp);
    case CurveId::EI1: return ei_curve(1, pp);
    case CurveId::EI2: return ei_curve(2, pp);
    case CurveId::EI3: return ei_curve(3, pp);
    case CurveId::EI4: return ei_curve(4, pp);
    case CurveId::T2: return t2_curve(pp);
    case CurveId::T5a: return t5_curve(pp, false);
    default: return t5_curve(pp, true);
    }
}

} // namespace bpc
