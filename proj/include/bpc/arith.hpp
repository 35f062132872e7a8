#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace bpc {

using Integer = mpz_class;
using Rational = mpq_class;

struct PrimePower {
    Integer prime;
    unsigned exponent = 0;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Prime factorization with primes strictly increasing.
struct Factorization {
    std::vector<PrimePower> factors;

    Integer product() const;
    bool empty() const { return factors.empty(); }
};

// Trial division to 10^4, then Pollard rho (Brent) on the cofactor.
// Throws DomainError for n < 1 and FactorizationError when a composite
// cofactor resists splitting (inputs well beyond 128 bits).
Factorization factorize(const Integer& n);
Factorization factorize(std::uint64_t n);

// Deterministic Miller-Rabin below 2^64; fixed witness set above.
bool is_prime(const Integer& n);
bool is_prime(std::uint64_t n);

// Square-free part: n divided by its largest square divisor. n >= 1.
Integer sfp(const Integer& n);
std::uint64_t sfp(std::uint64_t n);

// Bounded effort: rho gives up after about 2^rho_log2_limit steps per attempt.
std::optional<Factorization> try_factorize(const Integer& n, unsigned rho_log2_limit);
std::optional<Integer> try_sfp(const Integer& n, unsigned rho_log2_limit);

// Signed square-free part of a nonzero integer: sign(n) * sfp(|n|).
Integer signed_sfp(const Integer& n);

bool is_square(const Integer& n);
bool is_square(std::uint64_t n);
Integer isqrt(const Integer& n);
std::uint64_t isqrt(std::uint64_t n);

bool is_square(const Rational& r);
std::optional<Rational> rational_sqrt(const Rational& r);

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);
Integer pow(const Integer& base, unsigned long exp);

// Canonical text forms used by every serialized record: integers in decimal,
// rationals always as "num/den".
std::string to_string(const Integer& n);
std::string to_string(const Rational& r);
Integer parse_integer(std::string_view text);
Rational parse_rational(std::string_view text);

// Table of square-free parts of 0..limit built from a smallest-prime-factor
// sieve. Entry 0 is 0.
class SfpSieve {
public:
    explicit SfpSieve(std::uint32_t limit);

    std::uint32_t limit() const { return limit_; }
    std::uint32_t operator[](std::uint32_t n) const { return sfp_[n]; }
    std::uint32_t smallest_prime_factor(std::uint32_t n) const;

private:
    std::uint32_t limit_;
    std::vector<std::uint32_t> sfp_;
    std::vector<std::uint32_t> spf_;
};

} // namespace bpc
