#pragma once

// Fourier analysis of Boolean functions over {0,1}^n, specialised to the
// value of non-adaptive GHZ protocols: each party feeds its protocol input
// into n independent noisy GHZ copies and outputs a fixed function of its n
// box outputs.  Because the noisy GHZ box is uniform within each output
// parity class, only the diagonal Fourier terms survive, and the protocol
// value collapses to a weighted sum of triple products of coefficients.
//
// All coefficients are exact rationals with denominator 2^n.

#include <cstdint>
#include <string>
#include <vector>

#include "nlb/rational.hpp"
#include "nlb/wiring.hpp"

namespace nlb {

// A Boolean function of `arity` variables as a truth table of bits.  Input
// masks use bit (arity-1-k) for variable k, i.e. the table index read as a
// binary number lists the variables left to right.  The +/-1 view used by
// the transform maps bit b to 1-2b.
class BooleanFunction {
public:
    BooleanFunction(int arity, std::vector<std::uint8_t> table);

    // Truth table packed little-endian by input index (bit i = table[i]),
    // the same convention as wiring final tables.  Arity at most 6.
    static BooleanFunction from_packed(int arity, std::uint64_t packed);

    int arity() const { return arity_; }
    std::size_t size() const { return table_.size(); }
    std::uint8_t bit(std::uint32_t x) const { return table_[x]; }
    int sign(std::uint32_t x) const { return table_[x] ? -1 : 1; }
    std::uint64_t packed() const;

    bool operator==(const BooleanFunction& other) const = default;

private:
    int arity_;
    std::vector<std::uint8_t> table_;
};

// Exact Fourier coefficients of a +/-1-valued function, indexed by the
// character mask z.
class FourierSpectrum {
public:
    FourierSpectrum(int arity, std::vector<Rational> coefficients);

    int arity() const { return arity_; }
    std::size_t size() const { return coefficients_.size(); }
    const Rational& coefficient(std::uint32_t z) const { return coefficients_[z]; }
    const std::vector<Rational>& coefficients() const { return coefficients_; }

    // Sum of squared coefficients; equals 1 exactly for spectra of
    // +/-1-valued functions (Parseval).
    Rational parseval_sum() const;

private:
    int arity_;
    std::vector<Rational> coefficients_;
};

// (-1)^{z.x}, the group character indexed by mask z.
int character(std::uint32_t z, std::uint32_t x);

// Bitstring form; both strings are '0'/'1' characters of equal length,
// leftmost character = highest bit.
int character(const std::string& z, const std::string& x);

// Walsh-Hadamard transform of the +/-1 view: coefficient at z is
// (1/2^n) sum_x (-1)^{f(x)} (-1)^{z.x}.
FourierSpectrum spectrum(const BooleanFunction& f);

// Inverse transform.  The pointwise sum sum_z c_z (-1)^{z.x} must be exactly
// +/-1 for every x; anything else reports Range.
BooleanFunction inverse_spectrum(const FourierSpectrum& spec);

// Class-2 value of the depth-n non-adaptive GHZ protocol with final output
// functions fA, fB, fC on noisy_ghz(eps, delta) copies.  Computed as
// bias(eps) - 3 bias(delta) where bias(beta) = sum_z fa_z fb_z fc_z beta^|z|,
// the first term being the 000 input row and the other three rows each
// contributing bias(delta).  The z = 0 term is kept, so constant finals and
// other non-zero-mean functions are handled exactly.
Rational nonadaptive_value(const BooleanFunction& fa, const BooleanFunction& fb,
                           const BooleanFunction& fc, const Rational& eps,
                           const Rational& delta);

// max over k in [1, n] of |eps^k - 3 delta^k|.  Bounds |nonadaptive_value|
// for finals whose product of mean coefficients vanishes; the z = 0 term can
// exceed it otherwise.
Rational parity_bound(const Rational& eps, const Rational& delta, int n);

// The wiring-protocol form of the same non-adaptive protocol: identity
// stages, finals applying the given functions to the box outputs (protocol
// input ignored).  Variable k of each function is box k's output.  Used to
// cross-check nonadaptive_value against the generic wire path.
WiringProtocol non_adaptive_ghz_protocol(const BooleanFunction& fa,
                                         const BooleanFunction& fb,
                                         const BooleanFunction& fc);

} // namespace nlb
