#include "nlb/box.hpp"

#include "nlb/error.hpp"

#include <algorithm>
#include <bit>

namespace nlb {

namespace {

const std::vector<std::uint8_t> kFullRows = {0, 1, 2, 3, 4, 5, 6, 7};
const std::vector<std::uint8_t> kEvenRows = {0b000, 0b011, 0b101, 0b110};

} // namespace

const std::vector<std::uint8_t>& InputDomain::rows() const {
    return kind == DomainKind::Full ? kFullRows : kEvenRows;
}

bool InputDomain::contains(std::uint8_t row) const {
    if (row > 7) return false;
    return kind == DomainKind::Full || row_parity(row) == 0;
}

std::size_t InputDomain::index_of(std::uint8_t row) const {
    const auto& r = rows();
    auto it = std::find(r.begin(), r.end(), row);
    if (it == r.end()) {
        fail(ErrorCode::Domain, "input row " + bits3_to_string(row) + " not in " +
                                    to_string(kind) + " domain");
    }
    return static_cast<std::size_t>(it - r.begin());
}

std::string to_string(DomainKind kind) {
    return kind == DomainKind::Full ? "full" : "even_parity";
}

DomainKind parse_domain_kind(const std::string& text) {
    if (text == "full") return DomainKind::Full;
    if (text == "even_parity" || text == "even-parity") return DomainKind::EvenParity;
    fail(ErrorCode::Parse, "unknown domain '" + text + "'");
}

std::string bits3_to_string(std::uint8_t bits) {
    std::string s(3, '0');
    if (bits & 4) s[0] = '1';
    if (bits & 2) s[1] = '1';
    if (bits & 1) s[2] = '1';
    return s;
}

std::uint8_t parse_bits3(const std::string& text) {
    if (text.size() != 3 || text.find_first_not_of("01") != std::string::npos) {
        fail(ErrorCode::Parse, "expected three bits, got '" + text + "'");
    }
    return static_cast<std::uint8_t>((text[0] - '0') * 4 + (text[1] - '0') * 2 +
                                     (text[2] - '0'));
}

TripartiteBox::TripartiteBox(InputDomain domain, std::vector<Row> rows)
    : domain_(domain), rows_(std::move(rows)) {
    if (rows_.size() != domain_.row_count()) {
        fail(ErrorCode::Domain, "expected " + std::to_string(domain_.row_count()) +
                                    " rows, got " + std::to_string(rows_.size()));
    }
}

const TripartiteBox::Row& TripartiteBox::row(std::uint8_t input_bits) const {
    return rows_[domain_.index_of(input_bits)];
}

ClassId parse_class_id(int value) {
    switch (value) {
    case 44: return ClassId::C44;
    case 45: return ClassId::C45;
    case 46: return ClassId::C46;
    default: fail(ErrorCode::Parse, "class must be 44, 45 or 46");
    }
}

Gf2Poly3 class_parity_poly(ClassId cls) {
    switch (cls) {
    case ClassId::C44: return parse_gf2_poly("xyz");
    case ClassId::C45: return parse_gf2_poly("xy+xz");
    case ClassId::C46: return parse_gf2_poly("xy+yz+xz");
    }
    fail(ErrorCode::Range, "bad class id");
}

TripartiteBox box_from_parity_poly(const Gf2Poly3& poly, InputDomain domain) {
    std::vector<TripartiteBox::Row> rows;
    rows.reserve(domain.row_count());
    const Rational quarter = make_rational(1, 4);
    for (std::uint8_t r : domain.rows()) {
        TripartiteBox::Row row;
        bool target = poly.eval_row(r);
        for (std::uint8_t out = 0; out < 8; ++out) {
            row[out] = (row_parity(out) == (target ? 1 : 0)) ? quarter : Rational(0);
        }
        rows.push_back(std::move(row));
    }
    return TripartiteBox(domain, std::move(rows));
}

TripartiteBox ghz_box(InputDomain domain) {
    // a^b^c = 1 on every row except 000, which is exactly the truth table of
    // x OR y OR z, i.e. the polynomial x+y+z+xy+xz+yz+xyz over GF(2).
    return box_from_parity_poly(parse_gf2_poly("x+y+z+xy+xz+yz+xyz"), domain);
}

TripartiteBox noisy_ghz(const NoiseParams& noise) {
    if (noise.eps < -1 || noise.eps > 1) {
        fail(ErrorCode::Range, "eps must lie in [-1, 1], got " + to_string(noise.eps));
    }
    if (noise.delta < -1 || noise.delta > 1) {
        fail(ErrorCode::Range, "delta must lie in [-1, 1], got " + to_string(noise.delta));
    }
    InputDomain domain{DomainKind::EvenParity};
    const Rational eighth = make_rational(1, 8);
    std::vector<TripartiteBox::Row> rows;
    for (std::uint8_t r : domain.rows()) {
        const Rational& bias = (r == 0) ? noise.eps : noise.delta;
        TripartiteBox::Row row;
        for (std::uint8_t out = 0; out < 8; ++out) {
            row[out] = row_parity(out) == 0 ? Rational(eighth * (1 + bias))
                                            : Rational(eighth * (1 - bias));
        }
        rows.push_back(std::move(row));
    }
    return TripartiteBox(domain, std::move(rows));
}

TripartiteBox noisy_class_box(ClassId cls, const Rational& delta) {
    if (delta < 0 || delta > 1) {
        fail(ErrorCode::Range, "delta must lie in [0, 1], got " + to_string(delta));
    }
    InputDomain full{DomainKind::Full};
    return mix({delta, Rational(1) - delta},
               {box_from_parity_poly(class_parity_poly(cls), full),
                box_from_parity_poly(Gf2Poly3::zero(), full)});
}

TripartiteBox local_vertex(const LocalVertexParams& p) {
    InputDomain domain{DomainKind::Full};
    std::vector<TripartiteBox::Row> rows;
    for (std::uint8_t r : domain.rows()) {
        bool x = r & 4, y = r & 2, z = r & 1;
        bool a = (p.i && x) != p.k;
        bool b = (p.m && y) != p.n;
        bool c = (p.s && z) != p.t;
        std::uint8_t out = static_cast<std::uint8_t>((a ? 4 : 0) | (b ? 2 : 0) | (c ? 1 : 0));
        TripartiteBox::Row row;
        row.fill(Rational(0));
        row[out] = Rational(1);
        rows.push_back(std::move(row));
    }
    return TripartiteBox(domain, std::move(rows));
}

TripartiteBox mix(const std::vector<Rational>& weights,
                  const std::vector<TripartiteBox>& components) {
    if (weights.empty() || weights.size() != components.size()) {
        fail(ErrorCode::Weights, "need one weight per component");
    }
    Rational total(0);
    for (const auto& w : weights) {
        if (w < 0) fail(ErrorCode::Weights, "negative weight " + to_string(w));
        total += w;
    }
    if (total != 1) fail(ErrorCode::Weights, "weights sum to " + to_string(total));
    const InputDomain& domain = components.front().domain();
    for (const auto& c : components) {
        if (!(c.domain() == domain)) {
            fail(ErrorCode::DomainMismatch, "mixture components on different domains");
        }
    }
    std::vector<TripartiteBox::Row> rows(domain.row_count());
    for (auto& row : rows) row.fill(Rational(0));
    for (std::size_t i = 0; i < components.size(); ++i) {
        const auto& src = components[i].rows();
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::uint8_t out = 0; out < 8; ++out) {
                rows[r][out] += weights[i] * src[r][out];
            }
        }
    }
    return TripartiteBox(domain, std::move(rows));
}

TripartiteBox restrict_domain(const TripartiteBox& box, InputDomain target) {
    if (target == box.domain()) return box;
    if (!(box.domain().kind == DomainKind::Full && target.kind == DomainKind::EvenParity)) {
        fail(ErrorCode::DomainMismatch,
             "cannot restrict " + to_string(box.domain().kind) + " to " +
                 to_string(target.kind));
    }
    std::vector<TripartiteBox::Row> rows;
    for (std::uint8_t r : target.rows()) rows.push_back(box.row(r));
    return TripartiteBox(target, std::move(rows));
}

namespace {

// Marginal over the parties selected by `mask` (bit 2 = A, bit 1 = B,
// bit 0 = C): distribution of the selected parties' outputs.
std::vector<Rational> marginal(const TripartiteBox::Row& row, std::uint8_t mask) {
    int kept = std::popcount(mask);
    std::vector<Rational> dist(std::size_t(1) << kept, Rational(0));
    for (std::uint8_t out = 0; out < 8; ++out) {
        std::size_t idx = 0;
        for (int bit = 2; bit >= 0; --bit) {
            if (mask & (1u << bit)) idx = (idx << 1) | ((out >> bit) & 1u);
        }
        dist[idx] += row[out];
    }
    return dist;
}

const char kPartyNames[3] = {'A', 'B', 'C'};

} // namespace

ValidationReport validate(const TripartiteBox& box) {
    ValidationReport report;
    const auto& domain = box.domain();
    for (std::uint8_t r : domain.rows()) {
        const auto& row = box.row(r);
        Rational sum(0);
        for (std::uint8_t out = 0; out < 8; ++out) {
            if (row[out] < 0 || row[out] > 1) {
                report.violations.push_back(
                    {ViolationKind::Positivity,
                     "P(" + bits3_to_string(out) + "|" + bits3_to_string(r) + ") = " +
                         to_string(row[out])});
            }
            sum += row[out];
        }
        if (sum != 1) {
            report.violations.push_back(
                {ViolationKind::Normalization,
                 "row " + bits3_to_string(r) + " sums to " + to_string(sum)});
        }
    }

    if (domain.kind == DomainKind::Full) {
        // For each party, flipping only that party's input must leave the
        // other two parties' joint marginal unchanged.
        for (int party = 0; party < 3; ++party) {
            std::uint8_t party_bit = static_cast<std::uint8_t>(1u << (2 - party));
            std::uint8_t others_mask = static_cast<std::uint8_t>(7u & ~party_bit);
            for (std::uint8_t r = 0; r < 8; ++r) {
                if (r & party_bit) continue;
                std::uint8_t r1 = r | party_bit;
                if (marginal(box.row(r), others_mask) != marginal(box.row(r1), others_mask)) {
                    report.violations.push_back(
                        {ViolationKind::NoSignaling,
                         std::string("party ") + kPartyNames[party] + " signals between rows " +
                             bits3_to_string(r) + " and " + bits3_to_string(r1)});
                }
            }
        }
    } else {
        // Even-parity rows differ in at least two inputs, so compare each
        // party's own marginal across the rows that fix that party's input.
        for (int party = 0; party < 3; ++party) {
            std::uint8_t party_bit = static_cast<std::uint8_t>(1u << (2 - party));
            for (int value = 0; value < 2; ++value) {
                std::vector<std::uint8_t> sharing;
                for (std::uint8_t r : domain.rows()) {
                    if (((r & party_bit) != 0) == (value == 1)) sharing.push_back(r);
                }
                for (std::size_t i = 1; i < sharing.size(); ++i) {
                    if (marginal(box.row(sharing[0]), party_bit) !=
                        marginal(box.row(sharing[i]), party_bit)) {
                        report.violations.push_back(
                            {ViolationKind::NoSignaling,
                             std::string("party ") + kPartyNames[party] +
                                 "'s marginal differs between rows " +
                                 bits3_to_string(sharing[0]) + " and " +
                                 bits3_to_string(sharing[i])});
                    }
                }
            }
        }
    }
    return report;
}

std::string to_string(const ValidationReport& report) {
    if (report.ok()) return "valid";
    std::string out;
    for (const auto& v : report.violations) {
        switch (v.kind) {
        case ViolationKind::Positivity: out += "positivity: "; break;
        case ViolationKind::Normalization: out += "normalization: "; break;
        case ViolationKind::NoSignaling: out += "no-signaling: "; break;
        }
        out += v.detail;
        out += '\n';
    }
    return out;
}

} // namespace nlb
