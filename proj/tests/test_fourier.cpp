#include "nlb/box.hpp"
#include "nlb/error.hpp"
#include "nlb/fourier.hpp"
#include "nlb/inequality.hpp"
#include "nlb/wiring.hpp"

#include "doctest.h"
#include "helpers.hpp"

#include <algorithm>
#include <bit>

using namespace nlb;

namespace {

BooleanFunction random_function(std::mt19937& gen, int arity) {
    std::vector<std::uint8_t> table(1u << arity);
    for (auto& bit : table) bit = gen() & 1u;
    return BooleanFunction(arity, table);
}

// Balanced table: exactly half ones, so the empty-set coefficient is 0.
BooleanFunction random_balanced(std::mt19937& gen, int arity) {
    std::vector<std::uint8_t> table(1u << arity, 0);
    for (std::size_t i = 0; i < table.size() / 2; ++i) table[i] = 1;
    std::shuffle(table.begin(), table.end(), gen);
    return BooleanFunction(arity, table);
}

Rational wire_value(const BooleanFunction& fa, const BooleanFunction& fb,
                    const BooleanFunction& fc, const Rational& eps, const Rational& delta) {
    WiringProtocol protocol = non_adaptive_ghz_protocol(fa, fb, fc);
    std::vector<TripartiteBox> copies(static_cast<std::size_t>(protocol.depth),
                                      noisy_ghz({eps, delta}));
    return eval_inequality(wire(protocol, copies), class2_inequality());
}

} // namespace

TEST_SUITE_BEGIN("fourier");

TEST_CASE("characters are parity signs") {
    CHECK(character(0b101, 0b100) == -1);
    CHECK(character(0b101, 0b101) == 1);
    CHECK(character(0, 0b111) == 1);
    CHECK(character("101", "100") == -1);
    CHECK_THROWS_AS(character("10", "100"), NlbError);
}

TEST_CASE("boolean function construction") {
    BooleanFunction f = BooleanFunction::from_packed(2, 0x6);
    CHECK(f.arity() == 2);
    CHECK(f.bit(0) == 0);
    CHECK(f.bit(1) == 1);
    CHECK(f.bit(2) == 1);
    CHECK(f.bit(3) == 0);
    CHECK(f.sign(0) == 1);
    CHECK(f.sign(1) == -1);
    CHECK(BooleanFunction(2, {0, 1, 1, 0}) == f);
    CHECK_THROWS_AS(BooleanFunction(0, {}), NlbError);
    CHECK_THROWS_AS(BooleanFunction(2, {0, 1}), NlbError);
    CHECK_THROWS_AS(BooleanFunction(2, {0, 1, 2, 0}), NlbError);
    CHECK_THROWS_AS(BooleanFunction::from_packed(7, 0), NlbError);
}

TEST_CASE("parity functions have a single coefficient") {
    // x0 ^ x1 on two bits: the only nonzero coefficient sits at z = 11.
    FourierSpectrum spec = spectrum(BooleanFunction::from_packed(2, 0x6));
    for (std::uint32_t z = 0; z < 4; ++z) {
        CHECK(spec.coefficient(z) == (z == 3 ? 1 : 0));
    }
    // Constant true: everything in the empty-set coefficient, sign -1.
    FourierSpectrum constant = spectrum(BooleanFunction::from_packed(2, 0xF));
    CHECK(constant.coefficient(0) == -1);
    CHECK(constant.parseval_sum() == 1);
}

TEST_CASE("parseval holds exactly") {
    std::mt19937 gen(7301);
    for (int arity = 1; arity <= 4; ++arity) {
        for (int trial = 0; trial < 8; ++trial) {
            CHECK(spectrum(random_function(gen, arity)).parseval_sum() == 1);
        }
    }
}

TEST_CASE("spectrum round trip") {
    for (std::uint64_t packed = 0; packed < 16; ++packed) {
        BooleanFunction f = BooleanFunction::from_packed(2, packed);
        CHECK(inverse_spectrum(spectrum(f)) == f);
    }
    std::mt19937 gen(7302);
    for (int trial = 0; trial < 10; ++trial) {
        BooleanFunction f = random_function(gen, 4);
        CHECK(inverse_spectrum(spectrum(f)) == f);
    }
    // A non-boolean spectrum cannot be inverted.
    FourierSpectrum half(2, {make_rational(1, 2), make_rational(1, 2), make_rational(0),
                             make_rational(0)});
    CHECK_THROWS_AS(inverse_spectrum(half), NlbError);
}

TEST_CASE("closed form matches the wired value") {
    std::mt19937 gen(7303);
    int checked = 0;
    while (checked < 60) {
        int arity = 1 + int(gen() % 3);
        BooleanFunction fa = random_function(gen, arity);
        BooleanFunction fb = random_function(gen, arity);
        BooleanFunction fc = random_function(gen, arity);
        Rational eps = nlb::testing::random_rational(gen, 6);
        Rational delta = nlb::testing::random_rational(gen, 6);
        Rational closed = nonadaptive_value(fa, fb, fc, eps, delta);
        CHECK(closed == wire_value(fa, fb, fc, eps, delta));
        ++checked;
    }
}

TEST_CASE("xor finals recover the repetition value") {
    for (int n = 1; n <= 3; ++n) {
        std::uint64_t parity_packed = 0;
        for (std::uint32_t v = 0; v < (1u << n); ++v) {
            parity_packed |= static_cast<std::uint64_t>(std::popcount(v) & 1) << v;
        }
        BooleanFunction parity = BooleanFunction::from_packed(n, parity_packed);
        Rational eps = make_rational(3, 4);
        Rational delta = make_rational(1, 4);
        Rational expected = pow_rational(eps, static_cast<unsigned>(n)) -
                            3 * pow_rational(delta, static_cast<unsigned>(n));
        CHECK(nonadaptive_value(parity, parity, parity, eps, delta) == expected);
    }
}

TEST_CASE("bound caps the zero-mean subclass") {
    std::mt19937 gen(7304);
    for (int trial = 0; trial < 40; ++trial) {
        int arity = 1 + int(gen() % 3);
        BooleanFunction fa = random_balanced(gen, arity);
        BooleanFunction fb = random_balanced(gen, arity);
        BooleanFunction fc = random_balanced(gen, arity);
        Rational eps = nlb::testing::random_rational(gen, 6);
        Rational delta = nlb::testing::random_rational(gen, 6);
        Rational value = abs_rational(nonadaptive_value(fa, fb, fc, eps, delta));
        CHECK(value <= parity_bound(eps, delta, arity));
    }
}

TEST_CASE("bound is the max over powers") {
    // eps^k dominates at k = 1 here; 3 delta^k flips the winner at k = 2.
    CHECK(parity_bound(make_rational(3, 4), make_rational(1, 4), 3) == make_rational(3, 8));
    CHECK(parity_bound(make_rational(0), make_rational(1, 2), 2) == make_rational(3, 2));
    CHECK(parity_bound(make_rational(1), make_rational(0), 5) == 1);
    CHECK_THROWS_AS(parity_bound(make_rational(1, 2), make_rational(1, 2), 0), NlbError);
}

TEST_CASE("arity mismatches are rejected") {
    BooleanFunction f2 = BooleanFunction::from_packed(2, 0x6);
    BooleanFunction f1 = BooleanFunction::from_packed(1, 0x2);
    CHECK_THROWS_AS(nonadaptive_value(f2, f2, f1, make_rational(1, 2), make_rational(0)),
                    NlbError);
}

TEST_SUITE_END();
