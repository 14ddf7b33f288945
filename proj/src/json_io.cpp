#include "nlb/json_io.hpp"

#include "nlb/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

namespace nlb {

namespace {

const Json& member(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) fail(ErrorCode::Parse, std::string("missing field '") + key + "'");
    return *it;
}

std::string string_member(const Json& j, const char* key) {
    const Json& v = member(j, key);
    if (!v.is_string()) fail(ErrorCode::Parse, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

Rational rational_member(const Json& j, const char* key) {
    return parse_rational(string_member(j, key));
}

std::uint64_t parse_hex(const std::string& text, const char* what) {
    std::string digits = text;
    if (digits.rfind("0x", 0) == 0 || digits.rfind("0X", 0) == 0) digits = digits.substr(2);
    if (digits.empty() || digits.size() > 16) fail(ErrorCode::Parse, std::string(what) + " hex");
    std::uint64_t value = 0;
    for (char ch : digits) {
        if (!std::isxdigit(static_cast<unsigned char>(ch))) {
            fail(ErrorCode::Parse, std::string(what) + " hex digit");
        }
        int d = std::isdigit(static_cast<unsigned char>(ch))
                    ? ch - '0'
                    : std::tolower(static_cast<unsigned char>(ch)) - 'a' + 10;
        value = (value << 4) | std::uint64_t(d);
    }
    return value;
}

std::string to_hex(std::uint64_t value, int digits) {
    static const char* kDigits = "0123456789abcdef";
    std::string out(std::size_t(digits), '0');
    for (int i = digits - 1; i >= 0 && value; --i) {
        out[std::size_t(i)] = kDigits[value & 0xF];
        value >>= 4;
    }
    return out;
}

} // namespace

Json parse_json_text(const std::string& text) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) fail(ErrorCode::Parse, "malformed JSON");
    return j;
}

Json box_to_json(const TripartiteBox& box) {
    Json rows = Json::array();
    for (std::uint8_t input : box.domain().rows()) {
        Json probs = Json::array();
        for (const Rational& p : box.row(input)) probs.push_back(to_string(p));
        rows.push_back(Json{{"input", bits3_to_string(input)}, {"probs", probs}});
    }
    return Json{{"domain", to_string(box.domain().kind)}, {"rows", rows}};
}

TripartiteBox box_from_json(const Json& j) {
    InputDomain domain{parse_domain_kind(string_member(j, "domain"))};
    const Json& rows = member(j, "rows");
    if (!rows.is_array() || rows.size() != domain.row_count()) {
        fail(ErrorCode::Parse, "one row per domain input expected");
    }
    std::vector<TripartiteBox::Row> table;
    table.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Json& row = rows[i];
        if (parse_bits3(string_member(row, "input")) != domain.rows()[i]) {
            fail(ErrorCode::Parse, "rows must follow the domain order");
        }
        const Json& probs = member(row, "probs");
        if (!probs.is_array() || probs.size() != 8) {
            fail(ErrorCode::Parse, "eight output probabilities per row");
        }
        TripartiteBox::Row out;
        for (std::size_t o = 0; o < 8; ++o) {
            if (!probs[o].is_string()) fail(ErrorCode::Parse, "probabilities must be strings");
            out[o] = parse_rational(probs[o].get<std::string>());
        }
        table.push_back(out);
    }
    return TripartiteBox(domain, std::move(table));
}

namespace {

Json party_to_json(const PartyWiring& w) {
    Json stages = Json::array();
    for (const StageFunction& s : w.stages) stages.push_back(int(s.table()));
    Json party{{"stages", stages}};
    if (w.final.depth() <= 5) {
        std::uint64_t packed = 0;
        for (std::size_t i = 0; i < w.final.bits().size(); ++i) {
            packed |= std::uint64_t(w.final.bits()[i]) << i;
        }
        int digits = int(w.final.bits().size()) / 4;
        party["final"] = to_hex(packed, std::max(digits, 1));
    } else {
        Json bits = Json::array();
        for (auto b : w.final.bits()) bits.push_back(int(b));
        party["final"] = bits;
    }
    return party;
}

PartyWiring party_from_json(const Json& j, int depth) {
    const Json& stages = member(j, "stages");
    if (!stages.is_array() || stages.size() != std::size_t(depth - 1)) {
        fail(ErrorCode::Parse, "depth-1 stage tables expected");
    }
    std::vector<StageFunction> stage_fns;
    for (const Json& s : stages) {
        if (!s.is_number_integer() || s.get<std::int64_t>() < 0 || s.get<std::int64_t>() > 0xF) {
            fail(ErrorCode::Parse, "stage tables are integers 0..15");
        }
        stage_fns.emplace_back(std::uint8_t(s.get<std::int64_t>()));
    }
    const Json& final_j = member(j, "final");
    if (final_j.is_string()) {
        return PartyWiring{std::move(stage_fns),
                           FinalFunction::from_packed(depth, parse_hex(final_j.get<std::string>(),
                                                                       "final table"))};
    }
    if (!final_j.is_array()) fail(ErrorCode::Parse, "final must be a hex string or a bit array");
    std::vector<std::uint8_t> bits;
    bits.reserve(final_j.size());
    for (const Json& b : final_j) {
        if (!b.is_number_integer() || b.get<std::int64_t>() < 0 || b.get<std::int64_t>() > 1) {
            fail(ErrorCode::Parse, "final bits must be 0 or 1");
        }
        bits.push_back(std::uint8_t(b.get<std::int64_t>()));
    }
    return PartyWiring{std::move(stage_fns), FinalFunction(depth, std::move(bits))};
}

} // namespace

Json protocol_to_json(const WiringProtocol& protocol) {
    return Json{{"depth", protocol.depth},
                {"a", party_to_json(protocol.a)},
                {"b", party_to_json(protocol.b)},
                {"c", party_to_json(protocol.c)}};
}

WiringProtocol protocol_from_json(const Json& j) {
    const Json& depth_j = member(j, "depth");
    if (!depth_j.is_number_integer() || depth_j.get<std::int64_t>() < 1 ||
        depth_j.get<std::int64_t>() > 20) {
        fail(ErrorCode::Parse, "depth must be an integer in 1..20");
    }
    int depth = int(depth_j.get<std::int64_t>());
    return WiringProtocol{depth, party_from_json(member(j, "a"), depth),
                          party_from_json(member(j, "b"), depth),
                          party_from_json(member(j, "c"), depth)};
}

Json inequality_to_json(const BellInequality& ineq) {
    Json terms = Json::array();
    for (const auto& [coeff, term] : ineq.terms) {
        std::string parties, settings;
        for (int p = 0; p < 3; ++p) {
            if (term.parties & (4 >> p)) {
                parties += "ABC"[p];
                settings += char('0' + ((term.settings >> (2 - p)) & 1));
            }
        }
        terms.push_back(Json{{"coeff", to_string(coeff)},
                             {"parties", parties},
                             {"settings", settings}});
    }
    Json j{{"terms", terms}};
    if (ineq.upper) j["upper"] = to_string(*ineq.upper);
    if (ineq.lower) j["lower"] = to_string(*ineq.lower);
    return j;
}

BellInequality inequality_from_json(const Json& j) {
    const Json& terms = member(j, "terms");
    if (!terms.is_array() || terms.empty()) fail(ErrorCode::Parse, "terms array expected");
    BellInequality ineq;
    std::set<std::pair<std::uint8_t, std::uint8_t>> seen;
    for (const Json& t : terms) {
        CorrelatorTerm term = make_term(string_member(t, "parties"),
                                        string_member(t, "settings"));
        if (!seen.emplace(term.parties, term.settings).second) {
            fail(ErrorCode::Parse, "duplicate term " + to_string(term));
        }
        ineq.terms.emplace_back(rational_member(t, "coeff"), term);
    }
    if (j.contains("upper")) ineq.upper = rational_member(j, "upper");
    if (j.contains("lower")) ineq.lower = rational_member(j, "lower");
    return ineq;
}

Json validation_to_json(const ValidationReport& report) {
    Json violations = Json::array();
    for (const Violation& v : report.violations) {
        const char* kind = v.kind == ViolationKind::Positivity ? "positivity"
                           : v.kind == ViolationKind::Normalization ? "normalization"
                                                                    : "no-signaling";
        violations.push_back(Json{{"kind", kind}, {"detail", v.detail}});
    }
    return Json{{"ok", report.ok()}, {"violations", violations}};
}

Json polynomial_to_json(const Polynomial& poly) {
    Json coeffs = Json::array();
    for (const Rational& c : poly.coeffs()) coeffs.push_back(to_string(c));
    return coeffs;
}

Json region_to_json(const DistillationRegion& region) {
    Json intervals = Json::array();
    for (const RegionInterval& iv : region.intervals) {
        intervals.push_back(Json{{"lo", to_string(iv.lo.value)},
                                 {"lo_open", iv.lo_open},
                                 {"lo_exact", iv.lo.exact},
                                 {"hi", to_string(iv.hi.value)},
                                 {"hi_open", iv.hi_open},
                                 {"hi_exact", iv.hi.exact}});
    }
    return Json{{"intervals", intervals},
                {"area", to_string(region.area())},
                {"display", to_string(region)}};
}

namespace {

Json space_to_json(const SearchSpaceSpec& space) {
    Json j{{"wiring", space.wiring_mode == WiringMode::NonAdaptive ? "non-adaptive" : "adaptive"},
           {"finals", space.final_mode == FinalMode::ParityOnly ? "parity" : "all"}};
    auto party = [](const PartySpace& p) -> Json {
        Json out = Json::object();
        if (p.stages) {
            Json v = Json::array();
            for (auto t : *p.stages) v.push_back(int(t));
            out["stages"] = v;
        }
        if (p.finals) {
            Json v = Json::array();
            for (auto t : *p.finals) v.push_back(int(t));
            out["finals"] = v;
        }
        return out;
    };
    Json overrides = Json::object();
    if (!party(space.a).empty()) overrides["a"] = party(space.a);
    if (!party(space.b).empty()) overrides["b"] = party(space.b);
    if (!party(space.c).empty()) overrides["c"] = party(space.c);
    if (!overrides.empty()) j["overrides"] = overrides;
    return j;
}

} // namespace

Json report_to_json(const SearchReport& report) {
    Json entries = Json::array();
    for (const SearchEntry& e : report.entries) {
        entries.push_back(Json{{"vprime", polynomial_to_json(e.vprime)},
                               {"region", region_to_json(e.region)},
                               {"max_gain", to_string(e.max_gain)},
                               {"representatives", e.representatives},
                               {"encoding", encoding_to_hex(e.encoding)}});
    }
    return Json{{"class", int(report.cls)},
                {"inequality", "class41"},
                {"space", space_to_json(report.space)},
                {"candidates", report.candidates},
                {"baseline", polynomial_to_json(report.baseline)},
                {"absolute_gain", report.absolute_gain},
                {"entries", entries}};
}

Json ghz_result_to_json(const GhzSearchResult& result) {
    Json encodings = Json::array();
    for (std::uint64_t enc : result.best_encodings) encodings.push_back(encoding_to_hex(enc));
    return Json{{"best", to_string(result.best)},
                {"best_count", result.best_count},
                {"best_encodings", encodings},
                {"evaluated", result.evaluated},
                {"skipped", result.skipped},
                {"sunk", result.sunk},
                {"policy", result.policy == DomainPolicy::Skip ? "skip" : "sink"}};
}

std::string encoding_to_hex(std::uint64_t encoding) { return "0x" + to_hex(encoding, 12); }

std::uint64_t encoding_from_hex(const std::string& text) {
    return parse_hex(text, "protocol encoding");
}

} // namespace nlb
