#pragma once

#include <string>

#include <json.hpp>

#include "bpc/catalog.hpp"
#include "bpc/cuboid.hpp"
#include "bpc/descent.hpp"
#include "bpc/families.hpp"
#include "bpc/search.hpp"

namespace bpc {

// Insertion-ordered so that output bytes depend only on the values.
using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Integers as decimal strings, rationals always as "num/den".
Json int_json(const Integer& v);
Json rat_json(const Rational& v);
Integer int_from(const Json& j);
Rational rat_from(const Json& j);

Json to_json(const ParamPair& v);
Json to_json(const KlnTriple& v);
Json to_json(const IvdSquares& v);
Json to_json(const BpcClassification& v);
Json to_json(const SplitCubic& v);
Json to_json(const CurvePoint& v);
Json to_json(const DescentCertificate& v);
Json to_json(const RankBound& v);
Json to_json(const BpcHit& v);
Json to_json(const ExclusionVerdict& v);
Json to_json(const EdgeCuboidRecord& v);
Json to_json(const EulerBrickRecord& v);
Json to_json(const T3Check& v);
Json to_json(const Algo1Checkpoint& v);
Json to_json(const Plinth& v);
Json to_json(const PlinthReport& v);
Json to_json(const TwoBpcFinding& v);
Json to_json(const Algo2PairReport& v);

ParamPair pair_from(const Json& j);
KlnTriple kln_from(const Json& j);
IvdSquares ivd_from(const Json& j);
SplitCubic curve_from(const Json& j);
CurvePoint point_from(const Json& j);
DescentCertificate certificate_from(const Json& j);
RankBound rank_bound_from(const Json& j);
BpcHit hit_from(const Json& j);
Algo1Checkpoint checkpoint_from(const Json& j);
// Accepts {"base":[b1,b2],"ceiling":[c1,c2],"height_sq":h}; entries may be
// strings ("n/d") or JSON integers.
Plinth plinth_from(const Json& j);

// One JSONL line: schema_version, command, record type, timestamp, payload.
Json envelope(const std::string& command, const std::string& record, const std::string& timestamp, Json payload);

// SOURCE_DATE_EPOCH if set, else the epoch; `wall_clock` stamps the current time.
std::string record_timestamp(bool wall_clock);

} // namespace bpc
