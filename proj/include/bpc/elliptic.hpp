#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bpc/arith.hpp"

namespace bpc {

// y^2 = (x - e1)(x - e2)(x - e3) with distinct rational roots.
struct SplitCubic {
    Rational e1, e2, e3;

    static SplitCubic make(Rational e1, Rational e2, Rational e3);
    // (x + r)(x + s)(x + t) = y^2
    static SplitCubic from_offsets(const Rational& r, const Rational& s, const Rational& t);

    std::array<Rational, 3> roots() const { return {e1, e2, e3}; }
    // a2, a4, a6 of x^3 + a2 x^2 + a4 x + a6
    std::array<Rational, 3> coefficients() const;
    Rational rhs(const Rational& x) const;
    bool integral() const;
    std::string str() const;

    friend bool operator==(const SplitCubic&, const SplitCubic&) = default;
};

struct CurvePoint {
    bool infinity = true;
    Rational x, y;

    static CurvePoint at_infinity() { return {}; }
    static CurvePoint affine(Rational x, Rational y) { return {false, std::move(x), std::move(y)}; }

    std::string str() const;

    friend bool operator==(const CurvePoint& a, const CurvePoint& b)
    {
        if (a.infinity || b.infinity) return a.infinity == b.infinity;
        return a.x == b.x && a.y == b.y;
    }
};

// Total order used for deterministic output: infinity first, then by x, then y.
bool point_less(const CurvePoint& a, const CurvePoint& b);

bool on_curve(const SplitCubic& c, const CurvePoint& p);
CurvePoint negate(const CurvePoint& p);
CurvePoint add(const SplitCubic& c, const CurvePoint& p, const CurvePoint& q);
CurvePoint dbl(const SplitCubic& c, const CurvePoint& p);
CurvePoint multiply(const SplitCubic& c, const CurvePoint& p, long n);

// x-coordinates of P + T for the three 2-torsion points T of (x+r)(x+s)(x+t),
// evaluated exactly as (st - r(x+s+t))/(x+r) and its two cyclic companions.
std::array<Rational, 3> tangent_triple(const Rational& r, const Rational& s, const Rational& t, const Rational& x0);

// All Q with 2Q = P.
std::vector<CurvePoint> halves(const SplitCubic& c, const CurvePoint& p);
// P lies in 2E(Q): every x - e_i is a rational square (2-torsion handled
// through the Kummer map).
bool in_two_e(const SplitCubic& c, const CurvePoint& p);

std::vector<CurvePoint> two_torsion(const SplitCubic& c);
// Full rational torsion subgroup, sorted by point_less.
std::vector<CurvePoint> torsion_points(const SplitCubic& c);
bool is_torsion(const SplitCubic& c, const CurvePoint& p);

// max(|numerator|, denominator) of x; 1 for infinity.
Integer naive_height(const CurvePoint& p);

// Affine points with x = u/v^2, gcd(u, v) = 1, |u| <= bound, 1 <= v <= bound.
// Ordered by v, then u, then y ascending.
std::vector<CurvePoint> naive_point_search(const SplitCubic& c, std::uint64_t height_bound);

enum class SquareFilter {
    SquareX,     // x is the square of a rational
    AllFactors,  // every x - e_i is a square (membership in 2E(Q))
};

// Closure of {generator} under doubling and 2-torsion translation, `depth`
// rounds deep, keeping the points that pass the filter. Sorted, deduplicated.
std::vector<CurvePoint> square_x_points(const SplitCubic& c, const CurvePoint& generator, unsigned depth,
                                        SquareFilter filter = SquareFilter::SquareX);

// Model with integral roots: e_i * u^2. Points map by (x u^2, y u^3).
struct IntegralModel {
    SplitCubic curve;
    Integer scale;  // u
};
IntegralModel integral_model(const SplitCubic& c);
CurvePoint to_model(const IntegralModel& m, const CurvePoint& p);
CurvePoint from_model(const IntegralModel& m, const CurvePoint& p);

} // namespace bpc
