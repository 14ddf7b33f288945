#pragma once

// JSON round-trips for the types that cross the CLI boundary. Probabilities
// and coefficients travel as canonical rational strings ("3/4", "0", "-2"),
// never as floats, so files re-parse to exactly the same values. Truth
// tables use the packed little-endian hex convention (bit i of the packed
// word = table entry i).

#include "nlb/box.hpp"
#include "nlb/inequality.hpp"
#include "nlb/polynomial.hpp"
#include "nlb/search.hpp"
#include "nlb/wiring.hpp"

#include "json.hpp"

#include <string>

namespace nlb {

using Json = nlohmann::json;

// Wrapper around nlohmann parsing that reports Parse through NlbError.
Json parse_json_text(const std::string& text);

Json box_to_json(const TripartiteBox& box);
TripartiteBox box_from_json(const Json& j);

Json protocol_to_json(const WiringProtocol& protocol);
WiringProtocol protocol_from_json(const Json& j);

Json inequality_to_json(const BellInequality& ineq);
BellInequality inequality_from_json(const Json& j);

Json validation_to_json(const ValidationReport& report);

Json polynomial_to_json(const Polynomial& poly);
Json region_to_json(const DistillationRegion& region);

Json report_to_json(const SearchReport& report);
Json ghz_result_to_json(const GhzSearchResult& result);

// 12-hex-digit form of a packed depth-2 candidate, e.g. "0x0c0c0c666666".
std::string encoding_to_hex(std::uint64_t encoding);
std::uint64_t encoding_from_hex(const std::string& text);

} // namespace nlb
