#include "bpc/pythagoras.hpp"

#include <numeric>

#include "bpc/error.hpp"

namespace bpc {

bool ParamPair::admissible(std::uint64_t p, std::uint64_t q)
{
    return q >= 1 && p > q && std::gcd(p, q) == 1 && ((p + q) & 1) == 1;
}

ParamPair ParamPair::make(std::uint64_t p, std::uint64_t q)
{
    if (!admissible(p, q)) {
        throw DomainError("inadmissible Pythagorean parameters (" + std::to_string(p) + "," +
                          std::to_string(q) + "): need p > q >= 1, coprime, opposite parity");
    }
    return {p, q};
}

Integer ParamPair::even_leg() const { return 2 * Integer(p) * Integer(q); }

Integer ParamPair::odd_leg() const
{
    Integer pp(p), qq(q);
    return pp * pp - qq * qq;
}

Integer ParamPair::hypotenuse() const
{
    Integer pp(p), qq(q);
    return pp * pp + qq * qq;
}

std::string ParamPair::str() const { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }

PythTriple triple_from(const ParamPair& pair, const Integer& k)
{
    require(k >= 1, "triple_from: scale k must be >= 1");
    return {k * pair.even_leg(), k * pair.odd_leg(), k * pair.hypotenuse(), k};
}

Integer leg_product_sfp(const ParamPair& pair)
{
    const std::uint64_t even = (pair.p % 2 == 0) ? pair.p : pair.q;
    const std::uint64_t odd = (pair.p % 2 == 0) ? pair.q : pair.p;
    Integer r = sfp(Integer(2) * Integer(even));
    r *= sfp(Integer(odd));
    r *= sfp(Integer(pair.p - pair.q));
    r *= sfp(Integer(pair.p) + Integer(pair.q));
    return r;
}

std::optional<ParamPair> pair_from_legs(const Integer& u, const Integer& v)
{
    if (u <= 0 || v <= 0) return std::nullopt;
    Integer g = gcd(u, v);
    Integer a = u / g, b = v / g;
    Integer h2 = a * a + b * b;
    if (!is_square(h2)) return std::nullopt;
    Integer h = isqrt(h2);
    Integer odd = (a % 2 != 0) ? a : b;
    Integer p2 = (h + odd) / 2, q2 = (h - odd) / 2;
    if (!is_square(p2) || !is_square(q2)) return std::nullopt;
    Integer p = isqrt(p2), q = isqrt(q2);
    if (!p.fits_ulong_p() || !q.fits_ulong_p()) return std::nullopt;
    if (!ParamPair::admissible(p.get_ui(), q.get_ui())) return std::nullopt;
    return ParamPair{p.get_ui(), q.get_ui()};
}

PairStream::PairStream(std::uint64_t p_max) : p_max_(p_max), p_(2), q_(0) {}

PairStream::PairStream(std::uint64_t p_max, ParamPair cursor) : p_max_(p_max), p_(cursor.p), q_(cursor.q) {}

std::optional<ParamPair> PairStream::next()
{
    while (p_ <= p_max_) {
        for (q_ = q_ + 1; q_ < p_; ++q_) {
            if (ParamPair::admissible(p_, q_)) return ParamPair{p_, q_};
        }
        ++p_;
        q_ = 0;
    }
    return std::nullopt;
}

std::uint64_t count_admissible(std::uint64_t p_max)
{
    std::uint64_t n = 0;
    for (std::uint64_t p = 2; p <= p_max; ++p) {
        for (std::uint64_t q = (p % 2 == 0) ? 1 : 2; q < p; q += 2) {
            if (std::gcd(p, q) == 1) ++n;
        }
    }
    return n;
}

} // namespace bpc
