#include "bpc/descent.hpp"

#include <algorithm>
#include <numeric>
#include <bitset>
#include <map>
#include <random>
#include <set>
#include <tuple>

#include "bpc/error.hpp"

namespace bpc {

std::string status_name(RankStatus s)
{
    switch (s) {
    case RankStatus::RankZeroCertified: return "RankZeroCertified";
    case RankStatus::PositiveRankCertified: return "PositiveRankCertified";
    case RankStatus::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

namespace {

// Square class of a nonzero rational at one place, packed into 3 bits so the
// group law is XOR.
//   real:  sign
//   odd p: (v mod 2) << 1 | nonresidue(unit)
//   p = 2: (v mod 2) << 2 | (unit mod 8 - 1) / 2
unsigned local_class(const Rational& r, std::uint64_t p)
{
    if (p == 0) return sgn(r) < 0 ? 1u : 0u;
    Integer num = r.get_num(), den = r.get_den();
    const Integer P(static_cast<unsigned long>(p));
    mp_bitcnt_t v = mpz_remove(num.get_mpz_t(), num.get_mpz_t(), P.get_mpz_t());
    v += mpz_remove(den.get_mpz_t(), den.get_mpz_t(), P.get_mpz_t());
    const unsigned par = static_cast<unsigned>(v & 1u);
    // den is a unit, and u/den has the class of u*den.
    const Integer u = num * den;
    if (p == 2) {
        const unsigned long m8 = mpz_fdiv_ui(u.get_mpz_t(), 8);
        return (par << 2) | static_cast<unsigned>((m8 - 1) / 2);
    }
    Integer red;
    mpz_fdiv_r(red.get_mpz_t(), u.get_mpz_t(), P.get_mpz_t());
    return (par << 1) | (mpz_legendre(red.get_mpz_t(), P.get_mpz_t()) < 0 ? 1u : 0u);
}

std::size_t expected_image(std::uint64_t p) { return p == 0 ? 2 : (p == 2 ? 8 : 4); }

// Subgroup of a small elementary abelian 2-group, kept as its member set.
struct Span {
    std::bitset<64> members;
    Span() { members.set(0); }
    bool contains(unsigned g) const { return members.test(g); }
    void insert(unsigned g)
    {
        if (contains(g)) return;
        std::bitset<64> next = members;
        for (unsigned h = 0; h < 64; ++h) {
            if (members.test(h)) next.set(h ^ g);
        }
        members = next;
    }
    std::size_t size() const { return members.count(); }
};

struct Setup {
    SplitCubic c;
    Integer e1, e2, e3;
    std::vector<std::uint64_t> primes;  // bad primes, always including 2
    int max_val = 0;
};

std::pair<Rational, Rational> kummer_raw(const Setup& s, const Rational& x)
{
    const Rational& e1 = s.c.e1;
    const Rational& e2 = s.c.e2;
    const Rational& e3 = s.c.e3;
    if (x == e1) return {(e1 - e2) * (e1 - e3), e1 - e2};
    if (x == e2) return {e2 - e1, (e2 - e1) * (e2 - e3)};
    return {x - e1, x - e2};
}

// Square class mask over {-1} and the prime list: bit 0 sign, bit i+1 prime i.
std::uint64_t global_mask(const Rational& r, const std::vector<std::uint64_t>& primes)
{
    std::uint64_t mask = sgn(r) < 0 ? 1u : 0u;
    Integer num = abs(r.get_num()), den = r.get_den();
    for (std::size_t i = 0; i < primes.size(); ++i) {
        Integer P(static_cast<unsigned long>(primes[i]));
        mp_bitcnt_t v = mpz_remove(num.get_mpz_t(), num.get_mpz_t(), P.get_mpz_t());
        v += mpz_remove(den.get_mpz_t(), den.get_mpz_t(), P.get_mpz_t());
        if (v & 1) mask |= std::uint64_t{1} << (i + 1);
    }
    verify(is_square(Integer(num * den)), "kummer image has a prime outside the bad set");
    return mask;
}

Integer mask_value(std::uint64_t mask, const std::vector<std::uint64_t>& primes)
{
    Integer d = 1;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (mask >> (i + 1) & 1) d *= static_cast<unsigned long>(primes[i]);
    }
    return (mask & 1) ? Integer(-d) : d;
}

Setup make_setup(const SplitCubic& c)
{
    require(c.integral(), "two_descent: roots must be integral");
    Setup s{c, c.e1.get_num(), c.e2.get_num(), c.e3.get_num(), {2}, 0};
    const Integer diffs[3] = {abs(Integer(s.e1 - s.e2)), abs(Integer(s.e1 - s.e3)), abs(Integer(s.e2 - s.e3))};
    std::set<std::uint64_t> ps = {2};
    for (const auto& d : diffs) {
        for (const auto& f : factorize(d).factors) {
            verify(f.prime.fits_ulong_p(), "bad prime exceeds 64 bits");
            ps.insert(f.prime.get_ui());
        }
    }
    s.primes.assign(ps.begin(), ps.end());
    for (auto p : s.primes) {
        for (const auto& d : diffs) {
            Integer t = d;
            Integer P(static_cast<unsigned long>(p));
            int v = static_cast<int>(mpz_remove(t.get_mpz_t(), t.get_mpz_t(), P.get_mpz_t()));
            s.max_val = std::max(s.max_val, v);
        }
    }
    return s;
}

// Sample rational points over Q_p until the image reaches its known size.
Span local_image(const Setup& s, std::uint64_t p, std::uint64_t seed, std::size_t budget)
{
    Span img;
    const std::size_t want = expected_image(p);
    auto add_x = [&](const Rational& x) {
        const bool is_root = x == s.c.e1 || x == s.c.e2 || x == s.c.e3;
        if (!is_root) {
            Rational f = s.c.rhs(x);
            if (local_class(f, p) != 0) return;
        }
        auto [k1, k2] = kummer_raw(s, x);
        img.insert(local_class(k1, p) | (local_class(k2, p) << 3));
    };
    for (const auto& e : s.c.roots()) add_x(e);
    if (p == 0) {
        Rational top = std::max({s.c.e1, s.c.e2, s.c.e3}) + 1;
        add_x(top);
        return img;
    }
    std::mt19937_64 rng(seed ^ (p * 0x9e3779b97f4a7c15ULL));
    const int jmax = 2 * s.max_val + 6;
    std::uniform_int_distribution<int> jdist(-4, jmax);
    const std::uint64_t umax = std::max<std::uint64_t>(16, std::min<std::uint64_t>(p, 1u << 20) * 64);
    std::uniform_int_distribution<std::uint64_t> udist(1, umax);
    std::uniform_int_distribution<int> bdist(0, 3);
    const Rational bases[4] = {s.c.e1, s.c.e2, s.c.e3, Rational(0)};
    Integer P(static_cast<unsigned long>(p));
    for (std::size_t it = 0; it < budget && img.size() < want; ++it) {
        const int j = jdist(rng);
        Rational step(Integer(static_cast<unsigned long>(udist(rng))));
        Integer pj = pow(P, static_cast<unsigned long>(std::abs(j)));
        if (j >= 0) step *= Rational(pj);
        else step /= Rational(pj);
        if (rng() & 1) step = -step;
        add_x(bases[bdist(rng)] + step);
    }
    return img;
}

struct ModFilter {
    std::uint64_t m;
    std::vector<bool> qr;
};

std::vector<ModFilter> make_filters()
{
    std::vector<ModFilter> out;
    for (std::uint64_t m : {64u, 63u, 65u, 11u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        ModFilter f{m, std::vector<bool>(m, false)};
        for (std::uint64_t i = 0; i < m; ++i) f.qr[(i * i) % m] = true;
        out.push_back(std::move(f));
    }
    return out;
}

std::int64_t mod_of(const Integer& v, std::uint64_t m)
{
    Integer r = v % static_cast<unsigned long>(m);
    if (r < 0) r += static_cast<unsigned long>(m);
    return static_cast<std::int64_t>(r.get_ui());
}

// Signed square-free kernel and square root of the square part: n = b0 f^2.
std::pair<Integer, Integer> split_square(const Integer& n)
{
    Integer b0 = sgn(n) < 0 ? -1 : 1, f = 1;
    for (const auto& pp : factorize(Integer(abs(n))).factors) {
        if (pp.exponent & 1) b0 *= pp.prime;
        f *= pow(pp.prime, pp.exponent / 2);
    }
    return {b0, f};
}

// Search the torsor x - e_k = delta_k * square (k = 1..3) using roots i, j:
// with u = f U, the conic delta_i U^2 + b0 W^2 = delta_j Z^2 (e_i - e_j = b0 f^2)
// is swept by lines through a small base point,
//   U = -Q U0 + 2 L s,  W = -Q W0 + 2 L t,  Q = delta_i s^2 + b0 t^2,  L = delta_i U0 s + b0 W0 t,
// and x = e_i + delta_i f^2 U^2 / W^2 must make x - e_k a delta_k-square.
std::optional<CurvePoint> torsor_point_oriented(const Setup& s, const std::array<Integer, 3>& delta, int i, int j,
                                                const DescentOptions& opt)
{
    const std::array<Integer, 3> e = {s.e1, s.e2, s.e3};
    const int k = 3 - i - j;
    const Integer& di = delta[i];
    const Integer& dj = delta[j];
    const auto [b0, f] = split_square(Integer(e[i] - e[j]));
    const Integer C = e[i] - e[k];
    const Integer& K = delta[k];
    const Integer f2 = f * f;

    auto finish = [&](const Integer& U, const Integer& W) -> std::optional<CurvePoint> {
        if (sgn(W) == 0) return std::nullopt;
        // x - e_k = (di f^2 U^2 + C W^2) / W^2 must be dk times a square.
        Integer v = K * (di * f2 * U * U + C * W * W);
        if (!is_square(v)) return std::nullopt;
        Rational x = Rational(e[i]) + Rational(di * f2 * U * U, W * W);
        x.canonicalize();
        auto y = rational_sqrt(s.c.rhs(x));
        if (!y) return std::nullopt;
        return CurvePoint::affine(x, abs(*y));
    };

    std::optional<std::pair<Integer, Integer>> base;
    const long cb = static_cast<long>(opt.conic_bound);
    for (long w = 0; w <= cb && !base; ++w) {
        for (long u = 0; u <= cb; ++u) {
            if ((u == 0 && w == 0) || std::gcd(u, w) != 1) continue;
            Integer v = dj * (di * u * u + b0 * w * w);
            if (sgn(v) >= 0 && is_square(v)) {
                base = {Integer(u), Integer(w)};
                break;
            }
        }
    }
    if (!base) return std::nullopt;
    const Integer U0 = base->first, W0 = base->second;
    if (auto p = finish(U0, W0)) return p;

    static const std::vector<ModFilter> filters = make_filters();
    struct Res {
        std::int64_t a, b, u0, w0, k, af2, c;
    };
    std::vector<Res> res;
    for (const auto& fl : filters) {
        res.push_back({mod_of(di, fl.m), mod_of(b0, fl.m), mod_of(U0, fl.m), mod_of(W0, fl.m), mod_of(K, fl.m),
                       mod_of(Integer(di * f2), fl.m), mod_of(C, fl.m)});
    }
    const long bound = static_cast<long>(opt.torsor_bound);
    Integer S, T, Q, L, U, W, g;
    for (long t = 0; t <= bound; ++t) {
        for (long sv = -bound; sv <= bound; ++sv) {
            if (t == 0 && sv <= 0) continue;
            if (std::gcd(sv, t) != 1) continue;
            bool pass = true;
            for (std::size_t n = 0; n < filters.size() && pass; ++n) {
                const auto m = static_cast<std::int64_t>(filters[n].m);
                const Res& r = res[n];
                const std::int64_t sm = ((sv % m) + m) % m, tm = t % m;
                const std::int64_t q = (r.a * sm % m * sm + r.b * tm % m * tm) % m;
                const std::int64_t l = (r.a * r.u0 % m * sm + r.b * r.w0 % m * tm) % m;
                const std::int64_t u = ((-q * r.u0 + 2 * l * sm) % m + m) % m;
                const std::int64_t w = ((-q * r.w0 + 2 * l * tm) % m + m) % m;
                const std::int64_t v = r.k * ((r.af2 * u % m * u + r.c * w % m * w) % m) % m;
                pass = filters[n].qr[static_cast<std::size_t>(v)];
            }
            if (!pass) continue;
            S = sv;
            T = t;
            Q = di * S * S + b0 * T * T;
            L = di * U0 * S + b0 * W0 * T;
            U = -Q * U0 + 2 * L * S;
            W = -Q * W0 + 2 * L * T;
            g = gcd(U, W);
            if (sgn(g) == 0) continue;
            U /= g;
            W /= g;
            if (auto p = finish(U, W)) return p;
        }
    }
    return std::nullopt;
}

// Try every choice of base root, largest square part of e_i - e_j first.
std::optional<CurvePoint> torsor_point(const Setup& s, const Integer& d1, const Integer& d2,
                                       const DescentOptions& opt)
{
    Integer d3 = d1 * d2;
    const Integer g = gcd(d1, d2);
    d3 /= g * g;
    const std::array<Integer, 3> delta = {d1, d2, d3};
    const std::array<Integer, 3> e = {s.e1, s.e2, s.e3};
    std::vector<std::tuple<Integer, int, int>> orders;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i != j) orders.emplace_back(split_square(Integer(e[i] - e[j])).second, i, j);
        }
    }
    std::stable_sort(orders.begin(), orders.end(),
                     [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });
    for (const auto& [f, i, j] : orders) {
        if (auto p = torsor_point_oriented(s, delta, i, j, opt)) return p;
    }
    return std::nullopt;
}

} // namespace

std::pair<Integer, Integer> kummer_image(const SplitCubic& c, const CurvePoint& p)
{
    if (p.infinity) return {1, 1};
    const Setup s = make_setup(integral_model(c).curve);
    const CurvePoint q = to_model(integral_model(c), p);
    auto [k1, k2] = kummer_raw(s, q.x);
    return {mask_value(global_mask(k1, s.primes), s.primes), mask_value(global_mask(k2, s.primes), s.primes)};
}

RankBound two_descent(const SplitCubic& c, const DescentOptions& opt)
{
    const Setup s = make_setup(c);
    RankBound rb;
    DescentCertificate& cert = rb.certificate;
    cert.curve = c;

    const std::size_t np = s.primes.size();
    if (np + 1 > 30) {
        cert.note = "too many bad primes for divisor enumeration";
        return rb;
    }

    // Primes available to each coordinate of the Kummer image.
    auto divides = [](const Integer& n, std::uint64_t p) { return mpz_divisible_ui_p(n.get_mpz_t(), p) != 0; };
    const Integer r1 = (s.e1 - s.e2) * (s.e1 - s.e3);
    const Integer r2 = (s.e2 - s.e1) * (s.e2 - s.e3);
    std::vector<std::size_t> idx1, idx2;
    for (std::size_t i = 0; i < np; ++i) {
        if (divides(r1, s.primes[i])) idx1.push_back(i);
        if (divides(r2, s.primes[i])) idx2.push_back(i);
    }
    if (idx1.size() > opt.max_primes || idx2.size() > opt.max_primes) {
        cert.note = "divisor enumeration too large";
        return rb;
    }

    // Local images at the real place and every bad prime.
    std::vector<std::uint64_t> places = {0};
    places.insert(places.end(), s.primes.begin(), s.primes.end());
    std::vector<Span> images(places.size());
    cert.places.resize(places.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < places.size(); ++i) {
        images[i] = local_image(s, places[i], opt.seed, opt.sample_budget);
        cert.places[i] = {places[i], expected_image(places[i]), images[i].size()};
    }

    // Local class of each candidate generator, cached per place.
    auto expand = [&](const std::vector<std::size_t>& idx, std::vector<std::uint64_t>& masks) {
        const std::size_t n = idx.size() + 1;
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
            std::uint64_t mask = m & 1;
            for (std::size_t j = 0; j + 1 < n; ++j) {
                if (m >> (j + 1) & 1) mask |= std::uint64_t{1} << (idx[j] + 1);
            }
            masks.push_back(mask);
        }
    };
    std::vector<std::uint64_t> masks1, masks2;
    expand(idx1, masks1);
    expand(idx2, masks2);
    auto class_of = [&](std::uint64_t mask, std::size_t place) {
        return local_class(Rational(mask_value(mask, s.primes)), places[place]);
    };
    std::vector<std::vector<unsigned>> cls1(masks1.size(), std::vector<unsigned>(places.size()));
    std::vector<std::vector<unsigned>> cls2(masks2.size(), std::vector<unsigned>(places.size()));
    for (std::size_t a = 0; a < masks1.size(); ++a)
        for (std::size_t p = 0; p < places.size(); ++p) cls1[a][p] = class_of(masks1[a], p);
    for (std::size_t b = 0; b < masks2.size(); ++b)
        for (std::size_t p = 0; p < places.size(); ++p) cls2[b][p] = class_of(masks2[b], p);

    cert.table.resize(masks1.size() * masks2.size());
#pragma omp parallel for schedule(static)
    for (std::size_t a = 0; a < masks1.size(); ++a) {
        for (std::size_t b = 0; b < masks2.size(); ++b) {
            TorsorEntry& e = cert.table[a * masks2.size() + b];
            e.d1 = mask_value(masks1[a], s.primes);
            e.d2 = mask_value(masks2[b], s.primes);
            e.selmer = true;
            for (std::size_t p = 0; p < places.size(); ++p) {
                if (!images[p].contains(cls1[a][p] | (cls2[b][p] << 3))) {
                    if (images[p].size() == expected_image(places[p])) {
                        e.selmer = false;
                        e.failed_place = places[p];
                        break;
                    }
                }
            }
        }
    }
    std::set<std::pair<std::uint64_t, std::uint64_t>> selmer;
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> where;
    for (std::size_t a = 0; a < masks1.size(); ++a) {
        for (std::size_t b = 0; b < masks2.size(); ++b) {
            where[{masks1[a], masks2[b]}] = a * masks2.size() + b;
            if (cert.table[a * masks2.size() + b].selmer) selmer.insert({masks1[a], masks2[b]});
        }
    }
    cert.selmer_size = selmer.size();
    unsigned log_sel = 0;
    while ((std::size_t{1} << log_sel) < selmer.size()) ++log_sel;
    verify((std::size_t{1} << log_sel) == selmer.size() && log_sel >= 2, "Selmer set is not a group containing torsion");
    cert.upper = log_sel - 2;

    // Subgroup generated by torsion and found points.
    std::set<std::pair<std::uint64_t, std::uint64_t>> image = {{0, 0}};
    auto image_of = [&](const CurvePoint& p) {
        auto [k1, k2] = kummer_raw(s, p.x);
        return std::pair{global_mask(k1, s.primes), global_mask(k2, s.primes)};
    };
    auto enlarge = [&](std::pair<std::uint64_t, std::uint64_t> g) {
        if (image.count(g)) return false;
        auto next = image;
        for (const auto& h : image) next.insert({h.first ^ g.first, h.second ^ g.second});
        image = std::move(next);
        return true;
    };
    for (const auto& t : torsion_points(c)) {
        if (!t.infinity) enlarge(image_of(t));
    }
    auto offer = [&](const CurvePoint& p) {
        auto g = image_of(p);
        verify(selmer.count(g) == 1, "point image outside the Selmer group");
        auto it = where.find(g);
        if (it != where.end() && !cert.table[it->second].point) cert.table[it->second].point = p;
        if (enlarge(g)) {
            verify(!is_torsion(c, p), "torsion point enlarged the image");
            rb.points.push_back(p);
        }
    };
    for (const auto& p : naive_point_search(c, opt.naive_bound)) {
        if (sgn(p.y) > 0) offer(p);
        if (image.size() == selmer.size()) break;
    }
    for (const auto& g : selmer) {
        if (image.size() == selmer.size()) break;
        if (image.count(g)) continue;
        const Integer d1 = mask_value(g.first, s.primes), d2 = mask_value(g.second, s.primes);
        if (auto p = torsor_point(s, d1, d2, opt)) {
            verify(on_curve(c, *p), "torsor point off curve");
            offer(*p);
        }
    }
    cert.image_size = image.size();
    unsigned log_img = 0;
    while ((std::size_t{1} << log_img) < image.size()) ++log_img;
    cert.lower = log_img - 2;

    rb.lower = cert.lower;
    rb.upper = cert.upper;
    verify(rb.lower <= *rb.upper, "rank lower bound exceeds upper bound");
    if (*rb.upper == 0) rb.status = RankStatus::RankZeroCertified;
    else if (rb.lower >= 1) rb.status = RankStatus::PositiveRankCertified;
    else rb.status = RankStatus::Inconclusive;
    if (rb.lower < *rb.upper) cert.note = "some Selmer classes have no point found within the search bounds";
    return rb;
}

} // namespace bpc
