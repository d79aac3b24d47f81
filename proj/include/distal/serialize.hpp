#pragma once

#include <string>

#include "json.hpp"

#include "distal/angle.hpp"
#include "distal/cocycle.hpp"
#include "distal/disjointness.hpp"
#include "distal/ergodic.hpp"
#include "distal/flows.hpp"
#include "distal/relations.hpp"
#include "distal/torus.hpp"

namespace distal {

using Json = nlohmann::ordered_json;

Json to_json(Frac128 x);
Json to_json(const TorusPoint& x);
Json to_json(const RotationAngle& a);
Json to_json(const CocycleSpec& c);
Json to_json(const FlowSpec& f);
Json to_json(const IndependenceVerdict& v);
Json to_json(const CoverageReport& r);
Json to_json(const GapReport& r);
Json to_json(const RpProbeResult& r);

// Accepts an expression string ("golden", "sqrt(2)-1", "liouville(4)"), an
// object with "expr", or an object with "decimal" (and optionally "cf" to fix
// the number of quotients). Errors: serialize.schema plus angle errors.
RotationAngle angle_from_json(const Json& j);

// Flow objects:
//   {"kind":"rotation","alpha":A}
//   {"kind":"skew","alpha":A,"terms":3,"coeff":"unit"}            (built)
//   {"kind":"skew","cocycle":{"alpha":A,"terms":[["100",1.0],...],"tail_bound":t}}
//   {"kind":"product","factors":[...]}
//   {"kind":"time_change","base":{rotations},"dt":"1","a":"2"}
FlowSpec flow_from_json(const Json& j);
CocycleSpec cocycle_from_json(const Json& j);

// Hex strings or numbers in [0,1).
TorusPoint point_from_json(const Json& j);
// "0.25,0.5" or hex words separated by commas.
TorusPoint parse_point(const std::string& text);

std::string format_double(double v);

}  // namespace distal
