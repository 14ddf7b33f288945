#pragma once

#include "nlb/box.hpp"
#include "nlb/polynomial.hpp"
#include "nlb/rational.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nlb {

// One correlator <A_x B_y C_z> with any nonempty subset of parties taking
// part. `parties` uses the same bit layout as rows (bit 2 = A, bit 1 = B,
// bit 0 = C); `settings` carries the input bit of each participating party
// and is zero on the remaining bits.
struct CorrelatorTerm {
    std::uint8_t parties = 0;
    std::uint8_t settings = 0;

    bool operator==(const CorrelatorTerm&) const = default;
};

CorrelatorTerm make_term(const std::string& parties, const std::string& settings);
std::string to_string(const CorrelatorTerm& term);

struct BellInequality {
    std::vector<std::pair<Rational, CorrelatorTerm>> terms;
    std::optional<Rational> upper;
    std::optional<Rational> lower;
};

// Expectation of the product of participating parties' +/-1 outcomes. The
// non-participants' inputs are completed to the lexicographically smallest
// domain row consistent with the term's settings; every valid completion is
// evaluated and they must agree exactly (true for no-signaling boxes).
Rational correlator(const TripartiteBox& box, const CorrelatorTerm& term);

Rational eval_inequality(const TripartiteBox& box, const BellInequality& ineq);

// <A0 B0 C0> - <A0 B1 C1> - <A1 B0 C1> - <A1 B1 C0>, local bound +/-2.
// The bound is carried in the struct but evaluation never enforces it.
BellInequality class2_inequality();

// The 18-term facet with local bound 7 whose value on delta-noisy class
// boxes is 4*delta + 7.
BellInequality class41_inequality();

// Interpolates delta -> eval_inequality(family(delta), ineq) as an exact
// polynomial of degree <= degree_bound. Default samples are the evenly
// spaced rationals j/degree_bound on [0, 1] (just 0 for degree 0); any set
// of degree_bound + 1 distinct rationals gives the same polynomial when the
// family really is polynomial of that degree.
Polynomial value_poly_in_delta(const std::function<TripartiteBox(const Rational&)>& family,
                               const BellInequality& ineq, int degree_bound,
                               const std::vector<Rational>& samples = {});

} // namespace nlb
