#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bpc/arith.hpp"

namespace bpc {

// Euclid parameters (p, q) of a primitive Pythagorean triple:
// p > q >= 1, gcd(p, q) = 1, p + q odd.
struct ParamPair {
    std::uint64_t p = 0;
    std::uint64_t q = 0;

    // Throws DomainError unless the pair is admissible.
    static ParamPair make(std::uint64_t p, std::uint64_t q);
    static bool admissible(std::uint64_t p, std::uint64_t q);

    Integer even_leg() const;  // 2pq
    Integer odd_leg() const;   // p^2 - q^2
    Integer hypotenuse() const;  // p^2 + q^2

    std::string str() const;

    friend bool operator==(const ParamPair&, const ParamPair&) = default;
    friend auto operator<=>(const ParamPair&, const ParamPair&) = default;
};

struct PythTriple {
    Integer leg_even;    // 2kpq
    Integer leg_odd;     // k(p^2 - q^2)
    Integer hypotenuse;  // k(p^2 + q^2)
    Integer scale;       // k

    bool primitive() const { return scale == 1; }
};

PythTriple triple_from(const ParamPair& pair, const Integer& k);

// sfp(2pq(p^2 - q^2)); the four factors 2*even, odd, p-q, p+q are pairwise
// coprime so their square-free parts multiply.
Integer leg_product_sfp(const ParamPair& pair);

// Recover the Euclid parameters of the primitive triangle with legs
// proportional to (u, v). Returns nullopt if u^2 + v^2 is not a square.
std::optional<ParamPair> pair_from_legs(const Integer& u, const Integer& v);

// Streaming lexicographic enumeration of admissible pairs with p <= p_max,
// resumable from any cursor.
class PairStream {
public:
    explicit PairStream(std::uint64_t p_max);
    // Resume strictly after `cursor`.
    PairStream(std::uint64_t p_max, ParamPair cursor);

    std::optional<ParamPair> next();
    std::uint64_t p_max() const { return p_max_; }

private:
    std::uint64_t p_max_;
    std::uint64_t p_;
    std::uint64_t q_;
};

// Number of admissible pairs with p <= p_max.
std::uint64_t count_admissible(std::uint64_t p_max);

} // namespace bpc
