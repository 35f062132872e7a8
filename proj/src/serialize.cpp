#include "bpc/serialize.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>

#include "bpc/error.hpp"

namespace bpc {

Json int_json(const Integer& v) { return to_string(v); }

Json rat_json(const Rational& v)
{
    Rational c = v;
    c.canonicalize();
    return to_string(Integer(c.get_num())) + "/" + to_string(Integer(c.get_den()));
}

Integer int_from(const Json& j)
{
    if (j.is_string()) return parse_integer(j.get<std::string>());
    if (j.is_number_integer()) return parse_integer(j.dump());
    throw DomainError("expected an integer, got " + j.dump());
}

Rational rat_from(const Json& j)
{
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(int_from(j));
    throw DomainError("expected a rational, got " + j.dump());
}

namespace {

std::uint64_t u64_from(const Json& j)
{
    const Integer v = int_from(j);
    require(v >= 0 && v.fits_ulong_p(), "value out of 64-bit range: " + to_string(v));
    return v.get_ui();
}

template <class T>
Json array_of(const std::vector<T>& v)
{
    Json a = Json::array();
    for (const auto& x : v) a.push_back(to_json(x));
    return a;
}

Json opt_pair(const std::optional<ParamPair>& p) { return p ? to_json(*p) : Json(nullptr); }

} // namespace

Json to_json(const ParamPair& v) { return Json{{"p", std::to_string(v.p)}, {"q", std::to_string(v.q)}}; }

ParamPair pair_from(const Json& j) { return ParamPair::make(u64_from(j.at("p")), u64_from(j.at("q"))); }

Json to_json(const KlnTriple& v) { return Json{{"k", int_json(v.k)}, {"l", int_json(v.l)}, {"n", int_json(v.n)}}; }

KlnTriple kln_from(const Json& j) { return KlnTriple::make(int_from(j.at("k")), int_from(j.at("l")), int_from(j.at("n"))); }

Json to_json(const IvdSquares& v) { return Json{{"sa", int_json(v.sa)}, {"sb", int_json(v.sb)}, {"sc", int_json(v.sc)}}; }

IvdSquares ivd_from(const Json& j) { return IvdSquares::make(int_from(j.at("sa")), int_from(j.at("sb")), int_from(j.at("sc"))); }

Json to_json(const BpcClassification& v)
{
    Json j{{"class", class_name(v.cls)},
           {"subclass", static_cast<int>(v.subclass)},
           {"shared_sfp", v.shared_sfp == 0 ? Json(nullptr) : int_json(v.shared_sfp)},
           {"nonsquare_mask", static_cast<int>(v.nonsquare_mask)},
           {"reduction_gcd", int_json(v.reduction_gcd)},
           {"twist", int_json(v.twist)}};
    return j;
}

Json to_json(const SplitCubic& v) { return Json{{"roots", {rat_json(v.e1), rat_json(v.e2), rat_json(v.e3)}}}; }

SplitCubic curve_from(const Json& j)
{
    const auto& r = j.at("roots");
    require(r.is_array() && r.size() == 3, "curve needs three roots");
    return SplitCubic::make(rat_from(r[0]), rat_from(r[1]), rat_from(r[2]));
}

Json to_json(const CurvePoint& v)
{
    if (v.infinity) return "O";
    return Json{{"x", rat_json(v.x)}, {"y", rat_json(v.y)}};
}

CurvePoint point_from(const Json& j)
{
    if (j.is_string() && j.get<std::string>() == "O") return CurvePoint::at_infinity();
    return CurvePoint::affine(rat_from(j.at("x")), rat_from(j.at("y")));
}

Json to_json(const DescentCertificate& v)
{
    Json places = Json::array();
    for (const auto& p : v.places) {
        places.push_back(Json{{"place", std::to_string(p.place)}, {"expected", p.expected}, {"found", p.found}});
    }
    Json table = Json::array();
    for (const auto& t : v.table) {
        Json e{{"d1", int_json(t.d1)}, {"d2", int_json(t.d2)}, {"selmer", t.selmer}};
        if (!t.selmer) e["failed_place"] = std::to_string(t.failed_place);
        e["point"] = t.point ? to_json(*t.point) : Json(nullptr);
        table.push_back(std::move(e));
    }
    return Json{{"curve", to_json(v.curve)},
                {"places", std::move(places)},
                {"table", std::move(table)},
                {"selmer_size", v.selmer_size},
                {"image_size", v.image_size},
                {"upper", v.upper ? Json(*v.upper) : Json(nullptr)},
                {"lower", v.lower},
                {"note", v.note}};
}

DescentCertificate certificate_from(const Json& j)
{
    DescentCertificate c;
    c.curve = curve_from(j.at("curve"));
    for (const auto& p : j.at("places")) {
        c.places.push_back({u64_from(p.at("place")), p.at("expected").get<std::size_t>(), p.at("found").get<std::size_t>()});
    }
    for (const auto& e : j.at("table")) {
        TorsorEntry t;
        t.d1 = int_from(e.at("d1"));
        t.d2 = int_from(e.at("d2"));
        t.selmer = e.at("selmer").get<bool>();
        if (e.contains("failed_place")) t.failed_place = u64_from(e.at("failed_place"));
        if (!e.at("point").is_null()) t.point = point_from(e.at("point"));
        c.table.push_back(std::move(t));
    }
    c.selmer_size = j.at("selmer_size").get<std::size_t>();
    c.image_size = j.at("image_size").get<std::size_t>();
    if (!j.at("upper").is_null()) c.upper = j.at("upper").get<unsigned>();
    c.lower = j.at("lower").get<unsigned>();
    c.note = j.at("note").get<std::string>();
    return c;
}

Json to_json(const RankBound& v)
{
    return Json{{"status", status_name(v.status)},
                {"lower", v.lower},
                {"upper", v.upper ? Json(*v.upper) : Json(nullptr)},
                {"points", array_of(v.points)},
                {"certificate", to_json(v.certificate)}};
}

RankBound rank_bound_from(const Json& j)
{
    RankBound b;
    const std::string s = j.at("status").get<std::string>();
    bool known = false;
    for (auto st : {RankStatus::RankZeroCertified, RankStatus::PositiveRankCertified, RankStatus::Inconclusive}) {
        if (status_name(st) == s) {
            b.status = st;
            known = true;
        }
    }
    require(known, "unknown rank status " + s);
    b.lower = j.at("lower").get<unsigned>();
    if (!j.at("upper").is_null()) b.upper = j.at("upper").get<unsigned>();
    for (const auto& p : j.at("points")) b.points.push_back(point_from(p));
    b.certificate = certificate_from(j.at("certificate"));
    return b;
}

Json to_json(const BpcHit& v)
{
    Json sources = Json::array();
    for (const auto& c : v.sources) sources.push_back(Json::array({to_json(c.first), to_json(c.second)}));
    return Json{{"kind", hit_kind_name(v.kind)},
                {"cuboid", to_json(v.cuboid)},
                {"classification", to_json(v.cls)},
                {"kln", array_of(v.kln)},
                {"sources", std::move(sources)},
                {"collision_sfp", v.collision_sfp ? int_json(*v.collision_sfp) : Json(nullptr)},
                {"aspect_pair", opt_pair(v.aspect_pair)},
                {"curve", v.curve.empty() ? Json(nullptr) : Json(v.curve)},
                {"curve_x", v.curve_x ? rat_json(*v.curve_x) : Json(nullptr)}};
}

BpcHit hit_from(const Json& j)
{
    BpcHit h;
    const auto kind = parse_hit_kind(j.at("kind").get<std::string>());
    require(kind.has_value(), "unknown hit kind");
    h.kind = *kind;
    h.cuboid = ivd_from(j.at("cuboid"));
    h.cls = classify(h.cuboid);
    for (const auto& t : j.at("kln")) h.kln.push_back(kln_from(t));
    for (const auto& s : j.at("sources")) h.sources.push_back({pair_from(s.at(0)), pair_from(s.at(1))});
    if (!j.at("collision_sfp").is_null()) h.collision_sfp = int_from(j.at("collision_sfp"));
    if (!j.at("aspect_pair").is_null()) h.aspect_pair = pair_from(j.at("aspect_pair"));
    if (!j.at("curve").is_null()) h.curve = j.at("curve").get<std::string>();
    if (!j.at("curve_x").is_null()) h.curve_x = rat_from(j.at("curve_x"));
    return h;
}

Json to_json(const ExclusionVerdict& v)
{
    Json curves = Json::array();
    for (const auto& c : v.curves) curves.push_back(Json{{"curve", c.key}, {"rank", to_json(c.bound)}});
    return Json{{"pair", to_json(v.pair)},
                {"target", target_name(v.target)},
                {"verdict", verdict_name(v.verdict)},
                {"curves", std::move(curves)}};
}

Json to_json(const EdgeCuboidRecord& v)
{
    Json disc = Json::array();
    for (const auto& d : v.discrepancies) {
        disc.push_back(Json{{"formula", d.what}, {"printed", int_json(d.printed)}, {"derived", int_json(d.derived)}});
    }
    return Json{{"family", family_name(v.family)},
                {"pair", to_json(v.pair)},
                {"integer_edges", {int_json(v.integer_edges[0]), int_json(v.integer_edges[1])}},
                {"third_edge_sq", int_json(v.third_edge_sq)},
                {"face_diagonals",
                 {int_json(v.face_diagonals[0]), int_json(v.face_diagonals[1]), int_json(v.face_diagonals[2])}},
                {"main_diagonal", int_json(v.main_diagonal)},
                {"discrepancies", std::move(disc)},
                {"perfect_cuboid", v.perfect_cuboid}};
}

Json to_json(const EulerBrickRecord& v)
{
    return Json{{"family", "saunderson"},
                {"pair", to_json(v.pair)},
                {"edges", {int_json(v.edges[0]), int_json(v.edges[1]), int_json(v.edges[2])}},
                {"face_diagonals",
                 {int_json(v.face_diagonals[0]), int_json(v.face_diagonals[1]), int_json(v.face_diagonals[2])}},
                {"main_diagonal_sq", int_json(v.main_diagonal_sq)},
                {"perfect_cuboid", v.perfect_cuboid}};
}

Json to_json(const T3Check& v)
{
    return Json{{"e", int_json(v.e)}, {"identity_ok", v.identity_ok}, {"e_is_square", v.e_is_square}};
}

Json to_json(const Algo1Checkpoint& v)
{
    return Json{{"p_max", std::to_string(v.p_max)},
                {"cursor", to_json(v.cursor)},
                {"table_digest", std::to_string(v.table_digest)},
                {"hit_count", std::to_string(v.hit_count)}};
}

Algo1Checkpoint checkpoint_from(const Json& j)
{
    Algo1Checkpoint c;
    c.p_max = u64_from(j.at("p_max"));
    c.cursor = pair_from(j.at("cursor"));
    c.table_digest = u64_from(j.at("table_digest"));
    c.hit_count = u64_from(j.at("hit_count"));
    return c;
}

Json to_json(const Plinth& v)
{
    return Json{{"base", {rat_json(v.b1), rat_json(v.b2)}},
                {"ceiling", {rat_json(v.c1), rat_json(v.c2)}},
                {"height_sq", rat_json(v.height_sq)}};
}

Plinth plinth_from(const Json& j)
{
    const auto& b = j.at("base");
    const auto& c = j.at("ceiling");
    require(b.size() == 2 && c.size() == 2, "plinth needs two base and two ceiling edges");
    return Plinth::make(rat_from(b[0]), rat_from(b[1]), rat_from(c[0]), rat_from(c[1]), rat_from(j.at("height_sq")));
}

Json to_json(const PlinthReport& v)
{
    Json d = Json::array();
    for (const auto& x : v.distances) {
        d.push_back(Json{{"from", x.from}, {"to", x.to}, {"squared", rat_json(x.squared)}, {"integer", x.integer_square}});
    }
    return Json{{"perfect", v.perfect}, {"integer_count", v.integer_count}, {"distances", std::move(d)}};
}

Json to_json(const TwoBpcFinding& v)
{
    return Json{{"cuboid", to_json(v.cuboid)}, {"classification", to_json(v.cls)}};
}

Json to_json(const Algo2PairReport& v)
{
    Json curves = Json::array();
    for (const auto& c : v.curves) {
        curves.push_back(Json{{"curve", c.key},
                              {"status", status_name(c.bound.status)},
                              {"lower", c.bound.lower},
                              {"upper", c.bound.upper ? Json(*c.bound.upper) : Json(nullptr)},
                              {"points", array_of(c.bound.points)}});
    }
    return Json{{"pair", to_json(v.pair)},
                {"kind", hit_kind_name(v.kind)},
                {"curves", std::move(curves)},
                {"inconclusive", v.inconclusive},
                {"candidates", v.candidates}};
}

Json envelope(const std::string& command, const std::string& record, const std::string& timestamp, Json payload)
{
    return Json{{"schema_version", kSchemaVersion},
                {"command", command},
                {"record", record},
                {"timestamp", timestamp},
                {"payload", std::move(payload)}};
}

std::string record_timestamp(bool wall_clock)
{
    std::time_t t = 0;
    if (wall_clock) {
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    } else if (const char* s = std::getenv("SOURCE_DATE_EPOCH")) {
        t = static_cast<std::time_t>(std::strtoll(s, nullptr, 10));
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace bpc
