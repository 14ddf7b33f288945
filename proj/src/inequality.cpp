#include "nlb/inequality.hpp"

#include "nlb/error.hpp"

#include <bit>

namespace nlb {

CorrelatorTerm make_term(const std::string& parties, const std::string& settings) {
    if (parties.empty() || parties.size() != settings.size()) {
        fail(ErrorCode::Parse, "parties '" + parties + "' and settings '" + settings +
                                   "' must pair up");
    }
    CorrelatorTerm term;
    for (std::size_t i = 0; i < parties.size(); ++i) {
        std::uint8_t bit;
        switch (parties[i]) {
        case 'A': bit = 4; break;
        case 'B': bit = 2; break;
        case 'C': bit = 1; break;
        default: fail(ErrorCode::Parse, "party must be A, B or C in '" + parties + "'");
        }
        if (term.parties & bit) fail(ErrorCode::Parse, "repeated party in '" + parties + "'");
        if (settings[i] != '0' && settings[i] != '1') {
            fail(ErrorCode::Parse, "setting must be 0 or 1 in '" + settings + "'");
        }
        term.parties |= bit;
        if (settings[i] == '1') term.settings |= bit;
    }
    return term;
}

std::string to_string(const CorrelatorTerm& term) {
    std::string parties, settings;
    for (int bit = 2; bit >= 0; --bit) {
        if (term.parties & (1u << bit)) {
            parties += "ABC"[2 - bit];
            settings += (term.settings & (1u << bit)) ? '1' : '0';
        }
    }
    return "<" + parties + "|" + settings + ">";
}

namespace {

Rational correlator_at_row(const TripartiteBox& box, std::uint8_t row,
                           std::uint8_t parties) {
    Rational value(0);
    for (std::uint8_t out = 0; out < 8; ++out) {
        const Rational& p = box.prob(row, out);
        if (p == 0) continue;
        if (std::popcount(static_cast<unsigned>(out & parties)) % 2 == 0) {
            value += p;
        } else {
            value -= p;
        }
    }
    return value;
}

} // namespace

Rational correlator(const TripartiteBox& box, const CorrelatorTerm& term) {
    if (term.parties == 0) fail(ErrorCode::Parse, "correlator needs at least one party");
    std::optional<Rational> value;
    bool found = false;
    // Domain rows come in lexicographic order, so the first match is the
    // lexicographically smallest completion.
    for (std::uint8_t row : box.domain().rows()) {
        if ((row & term.parties) != term.settings) continue;
        Rational v = correlator_at_row(box, row, term.parties);
        if (!found) {
            value = v;
            found = true;
        } else if (v != *value) {
            fail(ErrorCode::Completion,
                 "correlator " + to_string(term) + " differs between completions (" +
                     to_string(*value) + " vs " + to_string(v) + ")");
        }
    }
    if (!found) {
        fail(ErrorCode::Domain, "no domain row completes " + to_string(term));
    }
    return *value;
}

Rational eval_inequality(const TripartiteBox& box, const BellInequality& ineq) {
    Rational value(0);
    for (const auto& [coeff, term] : ineq.terms) {
        value += coeff * correlator(box, term);
    }
    return value;
}

BellInequality class2_inequality() {
    BellInequality ineq;
    ineq.terms = {
        {Rational(1), make_term("ABC", "000")},
        {Rational(-1), make_term("ABC", "011")},
        {Rational(-1), make_term("ABC", "101")},
        {Rational(-1), make_term("ABC", "110")},
    };
    ineq.upper = Rational(2);
    ineq.lower = Rational(-2);
    return ineq;
}

BellInequality class41_inequality() {
    BellInequality ineq;
    ineq.terms = {
        {Rational(-1), make_term("A", "0")},
        {Rational(-1), make_term("B", "0")},
        {Rational(-1), make_term("C", "0")},
        {Rational(1), make_term("AB", "01")},
        {Rational(1), make_term("AB", "10")},
        {Rational(-1), make_term("AB", "11")},
        {Rational(1), make_term("AC", "01")},
        {Rational(1), make_term("AC", "10")},
        {Rational(-1), make_term("AC", "11")},
        {Rational(1), make_term("BC", "00")},
        {Rational(3), make_term("ABC", "000")},
        {Rational(1), make_term("ABC", "001")},
        {Rational(1), make_term("ABC", "010")},
        {Rational(2), make_term("ABC", "011")},
        {Rational(4), make_term("ABC", "100")},
        {Rational(-1), make_term("ABC", "101")},
        {Rational(-1), make_term("ABC", "110")},
        {Rational(-2), make_term("ABC", "111")},
    };
    ineq.upper = Rational(7);
    return ineq;
}

Polynomial value_poly_in_delta(const std::function<TripartiteBox(const Rational&)>& family,
                               const BellInequality& ineq, int degree_bound,
                               const std::vector<Rational>& samples) {
    if (degree_bound < 0) fail(ErrorCode::Degree, "negative degree bound");
    std::vector<Rational> xs = samples;
    if (xs.empty()) {
        if (degree_bound == 0) {
            xs.push_back(Rational(0));
        } else {
            for (int j = 0; j <= degree_bound; ++j) {
                xs.push_back(make_rational(j, degree_bound));
            }
        }
    }
    if (xs.size() != static_cast<std::size_t>(degree_bound) + 1) {
        fail(ErrorCode::Samples, "need " + std::to_string(degree_bound + 1) +
                                     " samples, got " + std::to_string(xs.size()));
    }
    std::vector<std::pair<Rational, Rational>> points;
    for (const auto& x : xs) {
        points.emplace_back(x, eval_inequality(family(x), ineq));
    }
    return lagrange_interpolate(points);
}

} // namespace nlb
