#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bpc/elliptic.hpp"
#include "bpc/pythagoras.hpp"

namespace bpc {

enum class CurveId { EF1, EF2, EF3, EF4, EI1, EI2, EI3, EI4, CN, T2, T5a, T5b, Face };
std::string curve_id_name(CurveId id);
std::optional<CurveId> parse_curve_id(const std::string& name);

struct CatalogCurve {
    CurveId id = CurveId::CN;
    std::optional<ParamPair> pair;
    Integer n = 0;  // CN only
    SplitCubic curve;
    std::vector<Rational> expected_torsion_x;
    std::vector<CurvePoint> known_generators;

    // Registry key, e.g. "EF2:5,2", "CN:6", "Face:3,7".
    std::string key() const;
};

// a = p^2 - q^2, b = 2pq, d = p^2 + q^2 throughout.
CatalogCurve ef_curve(int i, const ParamPair& pair);  // i in 1..4
CatalogCurve ei_curve(int i, const ParamPair& pair);  // i in 1..4
CatalogCurve congruent_curve(const Integer& n);       // x^3 - n^2 x, n square-free
CatalogCurve t2_curve(const ParamPair& pair);
// Edge-cuboid curve (x + a^2)(e^2 - x)(g^2 - x) = y^2 with g^2 = a^2 + e^2.
// T5a: a = p^2 - q^2, e = 2pq.  T5b: a = 2pq, e = p^2 - q^2.
CatalogCurve t5_curve(const ParamPair& pair, bool swapped);
// Generic face curve x(x + u^2)(x + w^2).
CatalogCurve face_curve(const Integer& u, const Integer& w);

// Inverse of key(); throws DomainError on malformed keys or bad parameters.
CatalogCurve from_key(const std::string& key);

} // namespace bpc
