#pragma once

#include "maxavg/discrete_averaging.hpp"
#include "maxavg/norm_search.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace maxavg {

using nlohmann::json;

// Rationals are written as "p/q" strings; integers and decimal strings are accepted on input.
json to_json(const Rational& q);
Rational rational_from_json(const json& j);

// {"rows": n-1, "cols": m, "entries": [["p/q", ...], ...]}; rows/cols are optional but checked when present.
AveragingMatrix matrix_from_json(const json& j);
json to_json(const AveragingMatrix& a);
json to_json(const RationalMatrix& m);

ExponentTuple exponents_from_json(const json& j);
json to_json(const ExponentTuple& x);

json to_json(const VertexSet& v);
json to_json(const MembershipVerdict& v);

// {"start": s, "values": [...]} or text of "index value" pairs; "#" starts a comment.
Signal signal_from_json(const json& j);
Signal parse_signal_text(const std::string& text);
json to_json(const Signal& s);

json to_json(const NormReport& r);
json to_json(const TransferenceReport& r);

// 17 significant digits.
std::string format_double(double v);

}  // namespace maxavg
