#include "bpc/arith.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "bpc/error.hpp"

namespace bpc {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 kTrialLimit = 10000;

constexpr std::array<u64, 12> kWitnesses64 = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
constexpr std::array<unsigned, 20> kWitnessesBig = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                                    31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 b, u64 e, u64 m)
{
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

u64 gcd64(u64 a, u64 b)
{
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

bool is_prime_u64(u64 n)
{
    if (n < 2) return false;
    for (u64 p : kWitnesses64) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : kWitnesses64) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// Brent's variant of Pollard rho; returns a nontrivial factor or 0.
u64 brent_u64(u64 n, u64 c)
{
    if (n % 2 == 0) return 2;
    u64 y = 2, x = 0, ys = 0, q = 1, g = 1;
    const u64 m = 128;
    u64 r = 1;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    do {
        x = y;
        for (u64 i = 0; i < r; ++i) y = f(y);
        u64 k = 0;
        do {
            ys = y;
            for (u64 i = 0; i < std::min(m, r - k); ++i) {
                y = f(y);
                q = mulmod(q, x > y ? x - y : y - x, n);
            }
            g = gcd64(q, n);
            k += m;
        } while (k < r && g == 1);
        r <<= 1;
        if (r > (u64{1} << 26)) return 0;
    } while (g == 1);
    if (g == n) {
        do {
            ys = f(ys);
            g = gcd64(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    return g == n ? 0 : g;
}

void split_u64(u64 n, std::map<u64, unsigned>& out)
{
    if (n == 1) return;
    if (is_prime_u64(n)) {
        ++out[n];
        return;
    }
    u64 r = isqrt(n);
    if (r * r == n) {
        split_u64(r, out);
        split_u64(r, out);
        return;
    }
    for (u64 c = 1; c < 64; ++c) {
        u64 d = brent_u64(n, c);
        if (d != 0) {
            split_u64(d, out);
            split_u64(n / d, out);
            return;
        }
    }
    throw FactorizationError("pollard rho failed on " + std::to_string(n));
}

bool is_prime_big(const Integer& n)
{
    if (n < 2) return false;
    if (n.fits_ulong_p()) return is_prime_u64(n.get_ui());
    for (unsigned p : kWitnessesBig) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
    }
    Integer d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    const Integer nm1 = n - 1;
    Integer x;
    for (unsigned a : kWitnessesBig) {
        Integer base = a;
        mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (x == 1 || x == nm1) continue;
        bool composite = true;
        for (unsigned long i = 1; i < s; ++i) {
            mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
            if (x == nm1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

Integer brent_big(const Integer& n, unsigned long c, unsigned log2_limit)
{
    Integer y = 2, x, ys, q = 1, g = 1, t;
    const unsigned long m = 128;
    unsigned long r = 1;
    auto f = [&](Integer& v) {
        v = v * v + c;
        mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    do {
        x = y;
        for (unsigned long i = 0; i < r; ++i) f(y);
        unsigned long k = 0;
        do {
            ys = y;
            for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                f(y);
                t = abs(x - y);
                q = q * t;
                mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
            g = gcd(q, n);
            k += m;
        } while (k < r && g == 1);
        r <<= 1;
        if (r > (1ul << log2_limit)) return 0;
    } while (g == 1);
    if (g == n) {
        do {
            f(ys);
            g = gcd(abs(x - ys), n);
        } while (g == 1);
    }
    return g == n ? Integer(0) : g;
}

// false when a cofactor resisted rho within 2^log2_limit steps
bool split_big(const Integer& n, std::map<Integer, unsigned>& out, unsigned log2_limit = 24, unsigned tries = 23)
{
    if (n == 1) return true;
    if (n.fits_ulong_p()) {
        std::map<u64, unsigned> small;
        split_u64(n.get_ui(), small);
        for (auto& [p, e] : small) out[Integer(p)] += e;
        return true;
    }
    if (is_prime_big(n)) {
        ++out[n];
        return true;
    }
    Integer r;
    if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), 2) != 0) {
        std::map<Integer, unsigned> half;
        if (!split_big(r, half, log2_limit, tries)) return false;
        for (auto& [p, e] : half) out[p] += 2 * e;
        return true;
    }
    for (unsigned long c = 1; c <= tries; ++c) {
        Integer d = brent_big(n, c, log2_limit);
        if (d != 0) return split_big(d, out, log2_limit, tries) && split_big(Integer(n / d), out, log2_limit, tries);
    }
    return false;
}

std::map<Integer, unsigned> trial_part(Integer& m)
{
    std::map<Integer, unsigned> acc;
    for (u64 p = 2; p < kTrialLimit; p += (p == 2 ? 1 : 2)) {
        if (!mpz_divisible_ui_p(m.get_mpz_t(), p)) continue;
        unsigned e = 0;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
            ++e;
        }
        acc[Integer(p)] += e;
        if (m == 1) break;
    }
    return acc;
}

} // namespace

Integer Factorization::product() const
{
    Integer r = 1;
    for (const auto& f : factors) {
        Integer pe;
        mpz_pow_ui(pe.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
        r *= pe;
    }
    return r;
}

Factorization factorize(const Integer& n)
{
    require(n >= 1, "factorize: n must be >= 1");
    if (n.fits_ulong_p()) return factorize(static_cast<std::uint64_t>(n.get_ui()));
    Integer m = n;
    auto acc = trial_part(m);
    if (!split_big(m, acc)) throw FactorizationError("pollard rho failed on " + m.get_str());
    Factorization f;
    for (auto& [p, e] : acc) f.factors.push_back({p, e});
    return f;
}

Factorization factorize(std::uint64_t n)
{
    require(n >= 1, "factorize: n must be >= 1");
    std::map<u64, unsigned> acc;
    for (u64 p = 2; p < kTrialLimit && p * p <= n; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) {
            n /= p;
            ++acc[p];
        }
    }
    if (n > 1) split_u64(n, acc);
    Factorization f;
    for (auto& [p, e] : acc) f.factors.push_back({Integer(p), e});
    return f;
}

bool is_prime(const Integer& n) { return is_prime_big(n); }
bool is_prime(std::uint64_t n) { return is_prime_u64(n); }

Integer sfp(const Integer& n)
{
    require(n >= 1, "sfp: n must be >= 1");
    Integer r = 1;
    for (const auto& f : factorize(n).factors) {
        if (f.exponent % 2) r *= f.prime;
    }
    return r;
}

std::optional<Factorization> try_factorize(const Integer& n, unsigned rho_log2_limit)
{
    require(n >= 1, "factorize: n must be >= 1");
    if (n.fits_ulong_p()) return factorize(static_cast<std::uint64_t>(n.get_ui()));
    Integer m = n;
    auto acc = trial_part(m);
    if (!split_big(m, acc, rho_log2_limit, 4)) return std::nullopt;
    Factorization f;
    for (auto& [p, e] : acc) f.factors.push_back({p, e});
    return f;
}

std::optional<Integer> try_sfp(const Integer& n, unsigned rho_log2_limit)
{
    auto fac = try_factorize(n, rho_log2_limit);
    if (!fac) return std::nullopt;
    Integer r = 1;
    for (const auto& f : fac->factors) {
        if (f.exponent % 2) r *= f.prime;
    }
    return r;
}

std::uint64_t sfp(std::uint64_t n)
{
    require(n >= 1, "sfp: n must be >= 1");
    std::uint64_t r = 1;
    for (const auto& f : factorize(n).factors) {
        if (f.exponent % 2) r *= f.prime.get_ui();
    }
    return r;
}

Integer signed_sfp(const Integer& n)
{
    require(n != 0, "signed_sfp: n must be nonzero");
    Integer s = sfp(Integer(abs(n)));
    return n < 0 ? Integer(-s) : s;
}

bool is_square(const Integer& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

bool is_square(std::uint64_t n)
{
    std::uint64_t r = isqrt(n);
    return r * r == n;
}

Integer isqrt(const Integer& n)
{
    require(n >= 0, "isqrt: negative argument");
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

std::uint64_t isqrt(std::uint64_t n)
{
    auto r = static_cast<std::uint64_t>(__builtin_sqrtl(static_cast<long double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_square(const Rational& r)
{
    return sgn(r) >= 0 && is_square(Integer(r.get_num())) && is_square(Integer(r.get_den()));
}

std::optional<Rational> rational_sqrt(const Rational& r)
{
    if (!is_square(r)) return std::nullopt;
    Rational out(isqrt(Integer(r.get_num())), isqrt(Integer(r.get_den())));
    out.canonicalize();
    return out;
}

Integer gcd(const Integer& a, const Integer& b)
{
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Integer lcm(const Integer& a, const Integer& b)
{
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

Integer pow(const Integer& base, unsigned long exp)
{
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

std::string to_string(const Integer& n) { return n.get_str(); }

std::string to_string(const Rational& r)
{
    return Integer(r.get_num()).get_str() + "/" + Integer(r.get_den()).get_str();
}

Integer parse_integer(std::string_view text)
{
    Integer n;
    std::string s(text);
    if (s.empty() || n.set_str(s, 10) != 0) throw DomainError("not an integer: '" + s + "'");
    return n;
}

Rational parse_rational(std::string_view text)
{
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_integer(text));
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw DomainError("zero denominator: '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

SfpSieve::SfpSieve(std::uint32_t limit)
    : limit_(limit), sfp_(static_cast<std::size_t>(limit) + 1), spf_(static_cast<std::size_t>(limit) + 1, 0)
{
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (spf_[i] != 0) continue;
        for (std::uint64_t j = i; j <= limit; j += i) {
            if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
        }
    }
    if (limit >= 1) sfp_[1] = 1;
    for (std::uint64_t n = 2; n <= limit; ++n) {
        std::uint32_t p = spf_[n];
        std::uint64_t m = n / p;
        // sfp(n) = sfp(m) toggled by p
        std::uint32_t s = sfp_[m];
        sfp_[n] = (s % p == 0) ? s / p : s * p;
    }
}

std::uint32_t SfpSieve::smallest_prime_factor(std::uint32_t n) const { return spf_[n]; }

} // namespace bpc
