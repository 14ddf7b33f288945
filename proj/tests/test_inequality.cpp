#include "nlb/box.hpp"
#include "nlb/error.hpp"
#include "nlb/inequality.hpp"

#include "doctest.h"
#include "helpers.hpp"

#include <bit>

using namespace nlb;

namespace {

const InputDomain kFull{DomainKind::Full};

// Correlator of one completion, straight from the table: fix the absent
// parties' inputs to `completion` and sum +/-1-weighted probabilities.
Rational completion_correlator(const TripartiteBox& box, const CorrelatorTerm& term,
                               std::uint8_t completion) {
    std::uint8_t row = static_cast<std::uint8_t>(
        (term.settings & term.parties) | (completion & ~term.parties));
    Rational sum(0);
    for (std::uint8_t o = 0; o < 8; ++o) {
        int parity = std::popcount(static_cast<unsigned>(o & term.parties)) & 1;
        sum += parity ? -box.prob(row, o) : box.prob(row, o);
    }
    return sum;
}

} // namespace

TEST_SUITE_BEGIN("ineq");

TEST_CASE("term parsing and printing") {
    CorrelatorTerm t = make_term("AC", "10");
    CHECK(t.parties == 0b101);
    CHECK(t.settings == 0b100);
    CHECK(to_string(t) == "<AC|10>");
    CHECK(make_term("ABC", "011").settings == 0b011);
    CHECK_THROWS_AS(make_term("", ""), NlbError);
    CHECK_THROWS_AS(make_term("AB", "1"), NlbError);
    CHECK_THROWS_AS(make_term("AD", "00"), NlbError);
    CHECK_THROWS_AS(make_term("AA", "11"), NlbError);
    CHECK_THROWS_AS(make_term("AB", "12"), NlbError);
}

TEST_CASE("stored inequalities carry their local bounds") {
    BellInequality c2 = class2_inequality();
    CHECK(c2.terms.size() == 4);
    CHECK(c2.upper == make_rational(2));
    CHECK(c2.lower == make_rational(-2));
    BellInequality c41 = class41_inequality();
    CHECK(c41.terms.size() == 18);
    CHECK(c41.upper == make_rational(7));
    CHECK_FALSE(c41.lower.has_value());
}

TEST_CASE("facet values on the extremal boxes") {
    BellInequality c41 = class41_inequality();
    for (int cls : {44, 45, 46}) {
        TripartiteBox box =
            box_from_parity_poly(class_parity_poly(parse_class_id(cls)), kFull);
        CHECK(eval_inequality(box, c41) == 11);
    }
    TripartiteBox correlated = box_from_parity_poly(Gf2Poly3::zero(), kFull);
    CHECK(eval_inequality(correlated, c41) == 7);
}

TEST_CASE("noisy class value interpolates to 4d + 7") {
    BellInequality c41 = class41_inequality();
    for (int cls : {44, 45, 46}) {
        ClassId id = parse_class_id(cls);
        Polynomial v = value_poly_in_delta(
            [&](const Rational& d) { return noisy_class_box(id, d); }, c41, 1);
        CHECK(v == Polynomial({make_rational(7), make_rational(4)}));
        // Alternate sample points, identical polynomial.
        Polynomial again = value_poly_in_delta(
            [&](const Rational& d) { return noisy_class_box(id, d); }, c41, 1,
            {make_rational(1, 3), make_rational(1)});
        CHECK(again == v);
    }
}

TEST_CASE("ghz value is eps - 3 delta") {
    BellInequality c2 = class2_inequality();
    CHECK(eval_inequality(ghz_box(InputDomain{DomainKind::EvenParity}), c2) == 4);
    for (int e = -1; e <= 1; ++e) {
        for (int d = -1; d <= 1; ++d) {
            Rational eps = make_rational(e, 2);
            Rational delta = make_rational(d, 3);
            CHECK(eval_inequality(noisy_ghz({eps, delta}), c2) == eps - 3 * delta);
        }
    }
}

TEST_CASE("correlators agree over every completion") {
    std::mt19937 gen(7101);
    for (int trial = 0; trial < 12; ++trial) {
        TripartiteBox box = nlb::testing::random_ns_box(gen);
        for (const char* parties : {"A", "B", "C", "AB", "AC", "BC"}) {
            std::string settings(std::string(parties).size(), '0');
            CorrelatorTerm term = make_term(parties, settings);
            Rational reference = correlator(box, term);
            for (std::uint8_t completion = 0; completion < 8; ++completion) {
                CHECK(completion_correlator(box, term, completion) == reference);
            }
        }
    }
}

TEST_CASE("evaluation is linear in the box") {
    std::mt19937 gen(7102);
    BellInequality c41 = class41_inequality();
    BellInequality c2 = class2_inequality();
    for (int trial = 0; trial < 8; ++trial) {
        TripartiteBox b1 = nlb::testing::random_ns_box(gen);
        TripartiteBox b2 = nlb::testing::random_ns_box(gen);
        std::vector<Rational> w = nlb::testing::random_weights(gen, 2);
        TripartiteBox mixed = mix(w, {b1, b2});
        for (const BellInequality* ineq : {&c41, &c2}) {
            CHECK(eval_inequality(mixed, *ineq) ==
                  w[0] * eval_inequality(b1, *ineq) + w[1] * eval_inequality(b2, *ineq));
        }
    }
}

TEST_CASE("local vertices respect the local bounds") {
    BellInequality c2 = class2_inequality();
    BellInequality c41 = class41_inequality();
    for (int bits = 0; bits < 64; ++bits) {
        LocalVertexParams p;
        p.i = bits & 32;
        p.k = bits & 16;
        p.m = bits & 8;
        p.n = bits & 4;
        p.s = bits & 2;
        p.t = bits & 1;
        TripartiteBox box = local_vertex(p);
        Rational v2 = eval_inequality(box, c2);
        CHECK(v2 <= 2);
        CHECK(v2 >= -2);
        CHECK(eval_inequality(box, c41) <= 7);
    }
}

TEST_CASE("parity boxes reduce the facet to its three-party terms") {
    std::mt19937 gen(7103);
    BellInequality c41 = class41_inequality();
    for (int trial = 0; trial < 20; ++trial) {
        Gf2Poly3 poly{static_cast<std::uint8_t>(gen() & 0xFF)};
        TripartiteBox box = box_from_parity_poly(poly, kFull);
        Rational expected(0);
        for (const auto& [coeff, term] : c41.terms) {
            if (term.parties != 0b111) continue;
            expected += poly.eval_row(term.settings) ? -coeff : coeff;
        }
        CHECK(eval_inequality(box, c41) == expected);
    }
}

TEST_CASE("even-parity boxes reject terms needing absent rows") {
    // A single-party term on an even-parity box still has valid completions
    // (each party input appears in some domain row), so it evaluates.
    TripartiteBox g = ghz_box(InputDomain{DomainKind::EvenParity});
    CHECK(correlator(g, make_term("A", "0")) == 0);
    // A full-setting term whose row is outside the domain cannot.
    CHECK_THROWS_AS(correlator(g, make_term("ABC", "001")), NlbError);
}

TEST_SUITE_END();
