#include "bpc/families.hpp"

#include "bpc/error.hpp"

namespace bpc {

std::string family_name(Family f)
{
    switch (f) {
    case Family::T2: return "t2";
    case Family::T5a: return "t5a";
    case Family::T5b: return "t5b";
    case Family::Saunderson: return "saunderson";
    }
    return "?";
}

namespace {

struct Powers {
    Integer p, q, p2, q2, p3, q3, p4, q4;
    explicit Powers(const ParamPair& pp)
        : p(pp.p), q(pp.q), p2(p * p), q2(q * q), p3(p2 * p), q3(q2 * q), p4(p2 * p2), q4(q2 * q2)
    {
    }
    // Factors of the shared main diagonal.
    Integer mplus() const { return p4 + 2 * p3 * q + 2 * p2 * q2 - 2 * p * q3 + q4; }
    Integer mminus() const { return p4 - 2 * p3 * q + 2 * p2 * q2 + 2 * p * q3 + q4; }
    Integer octic() const { return p4 * p4 + 8 * p4 * p2 * q2 - 2 * p4 * q4 + 8 * p2 * q4 * q2 + q4 * q4; }
};

Integer exact_root(const Integer& sq, const std::string& what)
{
    verify(is_square(sq), what + " is not a perfect square");
    return isqrt(sq);
}

struct Printed {
    std::string what;
    Integer value;
    int slot;  // index into face_diagonals it is meant to equal
};

EdgeCuboidRecord assemble(Family fam, const ParamPair& pp, Integer e0, Integer e1, Integer third, Integer main,
                          const std::vector<Printed>& printed)
{
    EdgeCuboidRecord r;
    r.family = fam;
    r.pair = pp;
    r.integer_edges = {std::move(e0), std::move(e1)};
    r.third_edge_sq = std::move(third);
    r.main_diagonal = std::move(main);
    const auto& [a, b] = r.integer_edges;
    const std::string tag = family_name(fam) + " " + pp.str();
    r.face_diagonals = {exact_root(a * a + b * b, tag + " integer face"),
                        exact_root(a * a + r.third_edge_sq, tag + " first edge face"),
                        exact_root(b * b + r.third_edge_sq, tag + " second edge face")};
    verify(r.main_diagonal * r.main_diagonal == a * a + b * b + r.third_edge_sq, tag + " main diagonal mismatch");
    for (const auto& pr : printed) {
        if (pr.value != r.face_diagonals[pr.slot]) {
            r.discrepancies.push_back({pr.what, pr.value, r.face_diagonals[pr.slot]});
        }
    }
    r.perfect_cuboid = is_square(r.third_edge_sq);
    return r;
}

} // namespace

bool t2_admissible(const ParamPair& pp)
{
    const Powers w(pp);
    const Integer diff = w.p4 - w.q4;
    return diff > 4 * w.p3 * w.q || diff < 4 * w.p * w.q3;
}

EdgeCuboidRecord t2_family(const ParamPair& pp)
{
    const Powers w(pp);
    const Integer diff = w.p4 - w.q4;
    if (!t2_admissible(pp)) {
        throw DomainError("t2: " + pp.str() + " violates p^4-q^4 > 4p^3q or p^4-q^4 < 4pq^3 (" + to_string(diff) +
                          " lies in [" + to_string(Integer(4 * w.p * w.q3)) + ", " +
                          to_string(Integer(4 * w.p3 * w.q)) + "])");
    }
    const Integer& p = w.p;
    const Integer& q = w.q;
    Integer e0 = 8 * w.p2 * w.q2 * diff;
    Integer e1 = 4 * p * q * (w.p2 - w.q2) * diff;
    Integer third = (w.p4 - 4 * w.p3 * q - w.q4) * (w.p4 + 4 * w.p3 * q - w.q4) * (w.p4 - 4 * p * w.q3 - w.q4) *
                    (w.p4 + 4 * p * w.q3 - w.q4);
    const Integer hyp = w.p2 + w.q2, leg = w.p2 - w.q2;
    std::vector<Printed> printed = {
        {"4pq(p^2-q^2)^2(p^2+q^2)^4", 4 * p * q * leg * leg * pow(hyp, 4), 0},
        {"|(p^4-4p^2q^2-q^4)(p^4+4p^2q^2-q^4)|",
         abs(Integer((w.p4 - 4 * w.p2 * w.q2 - w.q4) * (w.p4 + 4 * w.p2 * w.q2 - w.q4))), 2},
        {"|(p^4-2p^3q-2p^2q^2-2pq^3+q^4)(p^4+2p^3q-2p^2q^2+2pq^3+q^4)|",
         abs(Integer((w.p4 - 2 * w.p3 * q - 2 * w.p2 * w.q2 - 2 * p * w.q3 + w.q4) *
                     (w.p4 + 2 * w.p3 * q - 2 * w.p2 * w.q2 + 2 * p * w.q3 + w.q4))),
         1},
    };
    return assemble(Family::T2, pp, std::move(e0), std::move(e1), std::move(third), w.mplus() * w.mminus(), printed);
}

namespace {

Integer t5a_third(const Powers& w)
{
    return -4 * w.p2 * w.q2 * (w.p4 - 4 * w.p2 * w.q2 - w.q4) * (w.p4 + 4 * w.p2 * w.q2 - w.q4) * (3 * w.p4 + w.q4) *
           (w.p4 + 3 * w.q4);
}

Integer t5b_third(const Powers& w)
{
    const Integer& p = w.p;
    const Integer& q = w.q;
    const Integer leg = w.p2 - w.q2;
    return leg * leg * (w.p4 - 2 * w.p3 * q - 2 * w.p2 * w.q2 - 2 * p * w.q3 + w.q4) *
           (w.p4 - 2 * w.p3 * q + 6 * w.p2 * w.q2 - 2 * p * w.q3 + w.q4) *
           (w.p4 + 2 * w.p3 * q - 2 * w.p2 * w.q2 + 2 * p * w.q3 + w.q4) *
           (w.p4 + 2 * w.p3 * q + 6 * w.p2 * w.q2 + 2 * p * w.q3 + w.q4);
}

} // namespace

bool t5a_admissible(const ParamPair& pp) { return sgn(t5a_third(Powers(pp))) > 0; }
bool t5b_admissible(const ParamPair& pp) { return sgn(t5b_third(Powers(pp))) > 0; }

EdgeCuboidRecord t5a_family(const ParamPair& pp)
{
    const Powers w(pp);
    Integer third = t5a_third(w);
    require(sgn(third) > 0, "t5a: " + pp.str() + " gives non-positive third edge squared " + to_string(third));
    const Integer& p = w.p;
    const Integer& q = w.q;
    const Integer m = w.mplus() * w.mminus();
    const Integer leg = w.p2 - w.q2, hyp = w.p2 + w.q2, diff = w.p4 - w.q4;
    std::vector<Printed> printed = {
        {"2pq(main factors)", 2 * p * q * m, 2},
        {"(p^2+q^2)|(p^4-2p^3q-2p^2q^2-2pq^3+q^4)(p^4+2p^3q-2p^2q^2+2pq^3+q^4)|",
         hyp * abs(Integer((w.p4 - 2 * w.p3 * q - 2 * w.p2 * w.q2 - 2 * p * w.q3 + w.q4) *
                           (w.p4 + 2 * w.p3 * q - 2 * w.p2 * w.q2 + 2 * p * w.q3 + w.q4))),
         1},
        {"(p^2-q^2)(p^8+8p^6q^2-2p^4q^4+8p^2q^6+q^8)", leg * w.octic(), 0},
    };
    return assemble(Family::T5a, pp, leg * m, 4 * p * q * diff * diff, std::move(third), hyp * m, printed);
}

EdgeCuboidRecord t5b_family(const ParamPair& pp)
{
    const Powers w(pp);
    Integer third = t5b_third(w);
    require(sgn(third) > 0, "t5b: " + pp.str() + " gives non-positive third edge squared " + to_string(third));
    const Integer& p = w.p;
    const Integer& q = w.q;
    const Integer m = w.mplus() * w.mminus();
    const Integer leg = w.p2 - w.q2, hyp = w.p2 + w.q2;
    std::vector<Printed> printed = {
        {"(p^2-q^2)(main factors)", leg * m, 2},
        {"(p^2+q^2)|(p^4-4p^2q^2-q^4)(p^4+4p^2q^2-q^4)|",
         hyp * abs(Integer((w.p4 - 4 * w.p2 * w.q2 - w.q4) * (w.p4 + 4 * w.p2 * w.q2 - w.q4))), 1},
        {"2pq(p^8+8p^6q^2-2p^4q^4+8p^2q^6+q^8)", 2 * p * q * w.octic(), 0},
    };
    return assemble(Family::T5b, pp, 2 * p * q * m, 8 * w.p2 * w.q2 * leg * hyp * hyp, std::move(third), hyp * m,
                    printed);
}

EulerBrickRecord saunderson(const ParamPair& pp)
{
    const Powers w(pp);
    const Integer& p = w.p;
    const Integer& q = w.q;
    const Integer leg = w.p2 - w.q2, hyp = w.p2 + w.q2;
    EulerBrickRecord r;
    r.pair = pp;
    r.edges = {8 * p * q * (w.p4 - w.q4), 2 * p * q * (3 * w.p2 - w.q2) * abs(Integer(w.p2 - 3 * w.q2)),
               leg * abs(Integer(w.p2 - 4 * p * q + w.q2)) * (w.p2 + 4 * p * q + w.q2)};
    for (const auto& e : r.edges) verify(sgn(e) > 0, "saunderson: degenerate zero edge at " + pp.str());
    r.face_diagonals = {2 * p * q * (5 * w.p4 - 6 * w.p2 * w.q2 + 5 * w.q4),
                        leg * (w.p4 + 18 * w.p2 * w.q2 + w.q4), hyp * hyp * hyp};
    const auto& e = r.edges;
    const auto& f = r.face_diagonals;
    verify(f[0] * f[0] == e[0] * e[0] + e[1] * e[1], "saunderson: face (0,1) fails at " + pp.str());
    verify(f[1] * f[1] == e[0] * e[0] + e[2] * e[2], "saunderson: face (0,2) fails at " + pp.str());
    verify(f[2] * f[2] == e[1] * e[1] + e[2] * e[2], "saunderson: face (1,2) fails at " + pp.str());
    r.main_diagonal_sq = e[0] * e[0] + e[1] * e[1] + e[2] * e[2];
    r.perfect_cuboid = is_square(r.main_diagonal_sq);
    return r;
}

T3Check t3_check(const ParamPair& pp)
{
    const Powers w(pp);
    const Integer hyp = w.p2 + w.q2, leg = w.p2 - w.q2;
    const Integer x = pow(hyp, 4);
    const Integer y = 4 * w.p2 * w.q2 * leg * leg;
    T3Check r;
    r.e = (w.p4 - 4 * w.p3 * w.q - w.q4) * (w.p4 + 4 * w.p3 * w.q - w.q4) * (w.p4 - 4 * w.p * w.q3 - w.q4) *
          (w.p4 + 4 * w.p * w.q3 - w.q4);
    const Integer root4xy = 4 * w.p * w.q * leg * hyp * hyp;
    r.identity_ok = (x - y) * (x - y) - 4 * x * y == r.e && 4 * x * y == root4xy * root4xy;
    r.e_is_square = is_square(Integer(abs(r.e)));
    return r;
}

} // namespace bpc
