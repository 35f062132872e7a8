#include "bpc/elliptic.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "bpc/error.hpp"

namespace bpc {

SplitCubic SplitCubic::make(Rational e1, Rational e2, Rational e3)
{
    require(e1 != e2 && e1 != e3 && e2 != e3, "split cubic: roots must be distinct");
    return {std::move(e1), std::move(e2), std::move(e3)};
}

SplitCubic SplitCubic::from_offsets(const Rational& r, const Rational& s, const Rational& t)
{
    return make(Rational(-r), Rational(-s), Rational(-t));
}

std::array<Rational, 3> SplitCubic::coefficients() const
{
    return {Rational(-(e1 + e2 + e3)), Rational(e1 * e2 + e1 * e3 + e2 * e3), Rational(-(e1 * e2 * e3))};
}

Rational SplitCubic::rhs(const Rational& x) const { return (x - e1) * (x - e2) * (x - e3); }

bool SplitCubic::integral() const
{
    return e1.get_den() == 1 && e2.get_den() == 1 && e3.get_den() == 1;
}

std::string SplitCubic::str() const
{
    return "[" + to_string(e1) + "," + to_string(e2) + "," + to_string(e3) + "]";
}

std::string CurvePoint::str() const
{
    if (infinity) return "O";
    return "(" + to_string(x) + "," + to_string(y) + ")";
}

bool point_less(const CurvePoint& a, const CurvePoint& b)
{
    if (a.infinity || b.infinity) return a.infinity && !b.infinity;
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
}

bool on_curve(const SplitCubic& c, const CurvePoint& p)
{
    if (p.infinity) return true;
    return p.y * p.y == c.rhs(p.x);
}

CurvePoint negate(const CurvePoint& p)
{
    if (p.infinity) return p;
    return CurvePoint::affine(p.x, -p.y);
}

CurvePoint add(const SplitCubic& c, const CurvePoint& p, const CurvePoint& q)
{
    if (p.infinity) return q;
    if (q.infinity) return p;
    const auto [a2, a4, a6] = c.coefficients();
    Rational lam;
    if (p.x == q.x) {
        if (p.y + q.y == 0) return CurvePoint::at_infinity();
        lam = (3 * p.x * p.x + 2 * a2 * p.x + a4) / (2 * p.y);
    } else {
        lam = (q.y - p.y) / (q.x - p.x);
    }
    Rational x3 = lam * lam - a2 - p.x - q.x;
    Rational y3 = -(p.y + lam * (x3 - p.x));
    return CurvePoint::affine(std::move(x3), std::move(y3));
}

CurvePoint dbl(const SplitCubic& c, const CurvePoint& p) { return add(c, p, p); }

CurvePoint multiply(const SplitCubic& c, const CurvePoint& p, long n)
{
    CurvePoint base = n < 0 ? negate(p) : p;
    unsigned long k = n < 0 ? static_cast<unsigned long>(-(n + 1)) + 1 : static_cast<unsigned long>(n);
    CurvePoint acc = CurvePoint::at_infinity();
    while (k) {
        if (k & 1) acc = add(c, acc, base);
        k >>= 1;
        if (k) base = dbl(c, base);
    }
    return acc;
}

std::array<Rational, 3> tangent_triple(const Rational& r, const Rational& s, const Rational& t, const Rational& x0)
{
    require(x0 != -r && x0 != -s && x0 != -t, "tangent_triple: x0 is a pole");
    return {Rational((s * t - r * (x0 + s + t)) / (x0 + r)), Rational((r * t - s * (x0 + r + t)) / (x0 + s)),
            Rational((r * s - t * (x0 + r + s)) / (x0 + t))};
}

std::vector<CurvePoint> two_torsion(const SplitCubic& c)
{
    return {CurvePoint::at_infinity(), CurvePoint::affine(c.e1, 0), CurvePoint::affine(c.e2, 0),
            CurvePoint::affine(c.e3, 0)};
}

std::vector<CurvePoint> halves(const SplitCubic& c, const CurvePoint& p)
{
    if (p.infinity) return two_torsion(c);
    std::array<Rational, 3> r;
    const auto roots = c.roots();
    for (int i = 0; i < 3; ++i) {
        auto s = rational_sqrt(Rational(p.x - roots[i]));
        if (!s) return {};
        r[i] = *s;
    }
    std::vector<CurvePoint> out;
    for (int signs = 0; signs < 8; ++signs) {
        Rational r1 = (signs & 1) ? Rational(-r[0]) : r[0];
        Rational r2 = (signs & 2) ? Rational(-r[1]) : r[1];
        Rational r3 = (signs & 4) ? Rational(-r[2]) : r[2];
        Rational x = p.x + r1 * r2 + r1 * r3 + r2 * r3;
        auto y = rational_sqrt(c.rhs(x));
        if (!y) continue;
        for (int sy = 0; sy < 2; ++sy) {
            CurvePoint q = CurvePoint::affine(x, sy ? Rational(-*y) : *y);
            if (dbl(c, q) == p && std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
            if (sgn(*y) == 0) break;
        }
    }
    std::sort(out.begin(), out.end(), point_less);
    return out;
}

bool in_two_e(const SplitCubic& c, const CurvePoint& p)
{
    if (p.infinity) return true;
    if (sgn(p.y) == 0) return !halves(c, p).empty();
    for (const auto& e : c.roots()) {
        if (!is_square(Rational(p.x - e))) return false;
    }
    return true;
}

IntegralModel integral_model(const SplitCubic& c)
{
    Integer u = lcm(lcm(c.e1.get_den(), c.e2.get_den()), c.e3.get_den());
    Rational u2(u * u);
    return {SplitCubic{c.e1 * u2, c.e2 * u2, c.e3 * u2}, u};
}

CurvePoint to_model(const IntegralModel& m, const CurvePoint& p)
{
    if (p.infinity) return p;
    Rational u(m.scale);
    return CurvePoint::affine(p.x * u * u, p.y * u * u * u);
}

CurvePoint from_model(const IntegralModel& m, const CurvePoint& p)
{
    if (p.infinity) return p;
    Rational u(m.scale);
    return CurvePoint::affine(p.x / (u * u), p.y / (u * u * u));
}

namespace {

// Polynomial with integer coefficients, lowest degree first.
using Poly = std::vector<Integer>;

Integer eval(const Poly& f, const Integer& x)
{
    Integer acc = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
    return acc;
}

mpf_class eval(const Poly& f, const mpf_class& x, mp_bitcnt_t prec)
{
    mpf_class acc(0, prec);
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + mpf_class(*it, prec);
    return acc;
}

Poly derivative(const Poly& f)
{
    Poly d;
    for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<unsigned long>(i));
    return d;
}

// Approximate real roots by isolating monotone intervals between the roots
// of the derivative and bisecting.
std::vector<mpf_class> real_roots(const Poly& f, mp_bitcnt_t prec, unsigned iters)
{
    std::vector<mpf_class> out;
    if (f.size() < 2) return out;
    if (f.size() == 2) {
        mpf_class r(mpf_class(-f[0], prec) / mpf_class(f[1], prec), prec);
        out.push_back(r);
        return out;
    }
    auto crit = real_roots(derivative(f), prec, iters);
    std::sort(crit.begin(), crit.end());
    Integer big = 0;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) big = std::max(big, Integer(abs(f[i])));
    mpf_class bound(mpf_class(big, prec) / mpf_class(abs(f.back()), prec) + 1, prec);
    std::vector<mpf_class> cuts;
    cuts.push_back(mpf_class(-bound, prec));
    for (auto& c : crit) {
        if (c > -bound && c < bound) cuts.push_back(c);
    }
    cuts.push_back(bound);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        mpf_class lo = cuts[i], hi = cuts[i + 1];
        mpf_class flo = eval(f, lo, prec), fhi = eval(f, hi, prec);
        if (sgn(flo) == 0) {
            out.push_back(lo);
            continue;
        }
        if (sgn(flo) == sgn(fhi)) continue;
        for (unsigned k = 0; k < iters; ++k) {
            mpf_class mid((lo + hi) / 2, prec);
            mpf_class fm = eval(f, mid, prec);
            if (sgn(fm) == 0) {
                lo = hi = mid;
                break;
            }
            if (sgn(fm) == sgn(flo)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        out.push_back(lo);
    }
    return out;
}

std::vector<Integer> integer_roots(const Poly& f)
{
    std::size_t bits = 64;
    for (const auto& c : f) bits = std::max(bits, mpz_sizeinbase(c.get_mpz_t(), 2));
    const mp_bitcnt_t prec = 4 * bits + 128;
    const unsigned iters = static_cast<unsigned>(2 * bits + 64);
    std::vector<Integer> out;
    for (const auto& r : real_roots(f, prec, iters)) {
        mpf_class fl = floor(r);
        Integer base(fl);
        for (int d = -1; d <= 2; ++d) {
            Integer cand = base + d;
            if (eval(f, cand) == 0 && std::find(out.begin(), out.end(), cand) == out.end()) out.push_back(cand);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void insert_unique(std::vector<CurvePoint>& v, const CurvePoint& p)
{
    if (std::find(v.begin(), v.end(), p) == v.end()) v.push_back(p);
}

} // namespace

std::vector<CurvePoint> torsion_points(const SplitCubic& curve)
{
    const IntegralModel m = integral_model(curve);
    const SplitCubic& c = m.curve;

    // 2-power part: repeatedly halve until closed.
    std::vector<CurvePoint> two_part = two_torsion(c);
    std::vector<CurvePoint> frontier = two_part;
    while (!frontier.empty()) {
        std::vector<CurvePoint> next;
        for (const auto& p : frontier) {
            for (const auto& h : halves(c, p)) {
                if (std::find(two_part.begin(), two_part.end(), h) == two_part.end()) {
                    two_part.push_back(h);
                    next.push_back(h);
                }
            }
        }
        frontier = std::move(next);
    }

    // 3-part from integer roots of the 3-division polynomial.
    const auto co = c.coefficients();
    const Integer a2 = co[0].get_num(), a4 = co[1].get_num(), a6 = co[2].get_num();
    Poly psi3 = {4 * a2 * a6 - a4 * a4, 12 * a6, 6 * a4, 4 * a2, 3};
    std::vector<CurvePoint> three_part = {CurvePoint::at_infinity()};
    for (const auto& x : integer_roots(psi3)) {
        Rational xr(x);
        auto y = rational_sqrt(c.rhs(xr));
        if (!y) continue;
        three_part.push_back(CurvePoint::affine(xr, *y));
        three_part.push_back(CurvePoint::affine(xr, -*y));
    }

    std::vector<CurvePoint> all;
    for (const auto& a : two_part) {
        for (const auto& b : three_part) insert_unique(all, add(c, a, b));
    }
    for (auto& p : all) {
        p = from_model(m, p);
        verify(on_curve(curve, p), "torsion point off curve");
    }
    std::sort(all.begin(), all.end(), point_less);
    return all;
}

bool is_torsion(const SplitCubic& curve, const CurvePoint& p)
{
    if (p.infinity) return true;
    const IntegralModel m = integral_model(curve);
    const CurvePoint q = to_model(m, p);
    // Torsion points of an integral model have integral coordinates.
    if (q.x.get_den() != 1 || q.y.get_den() != 1) return false;
    CurvePoint acc = q;
    for (int k = 1; k <= 12; ++k) {
        if (acc.infinity) return true;
        acc = add(m.curve, acc, q);
    }
    return false;
}

Integer naive_height(const CurvePoint& p)
{
    if (p.infinity) return 1;
    return std::max(Integer(abs(p.x.get_num())), Integer(p.x.get_den()));
}

std::vector<CurvePoint> naive_point_search(const SplitCubic& c, std::uint64_t height_bound)
{
    require(height_bound >= 1, "naive_point_search: bound must be >= 1");
    std::vector<CurvePoint> out;
    const bool integral = c.integral();
    const Integer e1 = c.e1.get_num(), e2 = c.e2.get_num(), e3 = c.e3.get_num();
    const long b = static_cast<long>(height_bound);
    Integer n, root;
    for (long v = 1; v <= b; ++v) {
        const Integer v2 = Integer(v) * v;
        for (long u = -b; u <= b; ++u) {
            if (std::gcd(u, v) != 1) continue;
            Rational x(Integer(u), v2);
            x.canonicalize();
            if (integral) {
                // y^2 v^6 = (u - e1 v^2)(u - e2 v^2)(u - e3 v^2)
                n = (u - e1 * v2) * (u - e2 * v2) * (u - e3 * v2);
                if (sgn(n) < 0 || !is_square(n)) continue;
                root = isqrt(n);
                Rational y(root, v2 * v);
                y.canonicalize();
                if (sgn(y) == 0) {
                    out.push_back(CurvePoint::affine(x, y));
                } else {
                    out.push_back(CurvePoint::affine(x, -y));
                    out.push_back(CurvePoint::affine(x, y));
                }
            } else {
                auto y = rational_sqrt(c.rhs(x));
                if (!y) continue;
                if (sgn(*y) == 0) {
                    out.push_back(CurvePoint::affine(x, *y));
                } else {
                    out.push_back(CurvePoint::affine(x, -*y));
                    out.push_back(CurvePoint::affine(x, *y));
                }
            }
        }
    }
    return out;
}

std::vector<CurvePoint> square_x_points(const SplitCubic& c, const CurvePoint& generator, unsigned depth,
                                        SquareFilter filter)
{
    require(on_curve(c, generator), "square_x_points: generator not on curve");
    const auto tors = two_torsion(c);
    std::vector<CurvePoint> all = {generator};
    std::vector<CurvePoint> level = {generator};
    for (unsigned d = 0; d < depth; ++d) {
        std::vector<CurvePoint> next;
        for (const auto& p : level) {
            const CurvePoint q = dbl(c, p);
            for (const auto& t : tors) insert_unique(next, add(c, q, t));
        }
        for (const auto& p : next) insert_unique(all, p);
        level = std::move(next);
    }
    std::vector<CurvePoint> out;
    for (const auto& p : all) {
        if (p.infinity) continue;
        const bool keep = filter == SquareFilter::SquareX ? is_square(p.x) : in_two_e(c, p);
        if (keep) out.push_back(p);
    }
    std::sort(out.begin(), out.end(), point_less);
    return out;
}

} // namespace bpc
