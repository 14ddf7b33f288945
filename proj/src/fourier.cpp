#include "nlb/fourier.hpp"

#include "nlb/error.hpp"

#include <bit>

namespace nlb {

BooleanFunction::BooleanFunction(int arity, std::vector<std::uint8_t> table)
    : arity_(arity), table_(std::move(table)) {
    if (arity_ < 1 || arity_ > 20) fail(ErrorCode::Arity, "function arity");
    if (table_.size() != (std::size_t(1) << arity_)) {
        fail(ErrorCode::Length, "truth table size");
    }
    for (auto b : table_) {
        if (b > 1) fail(ErrorCode::Parse, "truth table entries must be bits");
    }
}

BooleanFunction BooleanFunction::from_packed(int arity, std::uint64_t packed) {
    if (arity < 1 || arity > 6) fail(ErrorCode::Arity, "packed function arity");
    std::vector<std::uint8_t> table(std::size_t(1) << arity);
    for (std::size_t i = 0; i < table.size(); ++i) {
        table[i] = (packed >> i) & 1u;
    }
    return BooleanFunction(arity, std::move(table));
}

std::uint64_t BooleanFunction::packed() const {
    if (arity_ > 6) fail(ErrorCode::Arity, "table too large to pack");
    std::uint64_t packed = 0;
    for (std::size_t i = 0; i < table_.size(); ++i) {
        packed |= std::uint64_t(table_[i]) << i;
    }
    return packed;
}

FourierSpectrum::FourierSpectrum(int arity, std::vector<Rational> coefficients)
    : arity_(arity), coefficients_(std::move(coefficients)) {
    if (arity_ < 1 || arity_ > 20) fail(ErrorCode::Arity, "spectrum arity");
    if (coefficients_.size() != (std::size_t(1) << arity_)) {
        fail(ErrorCode::Length, "spectrum size");
    }
}

Rational FourierSpectrum::parseval_sum() const {
    Rational sum = 0;
    for (const auto& c : coefficients_) sum += c * c;
    return sum;
}

int character(std::uint32_t z, std::uint32_t x) {
    return (std::popcount(z & x) & 1) ? -1 : 1;
}

int character(const std::string& z, const std::string& x) {
    if (z.size() != x.size()) fail(ErrorCode::Length, "bitstring lengths differ");
    int parity = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if ((z[i] != '0' && z[i] != '1') || (x[i] != '0' && x[i] != '1')) {
            fail(ErrorCode::Parse, "bitstrings must be over 0/1");
        }
        parity ^= (z[i] == '1' && x[i] == '1') ? 1 : 0;
    }
    return parity ? -1 : 1;
}

namespace {

// In-place butterfly; self-inverse up to the 2^n normalisation.
template <typename T>
void hadamard(std::vector<T>& buf) {
    for (std::size_t len = 1; len < buf.size(); len <<= 1) {
        for (std::size_t i = 0; i < buf.size(); i += len << 1) {
            for (std::size_t j = i; j < i + len; ++j) {
                T u = buf[j];
                T v = buf[j + len];
                buf[j] = T(u + v);
                buf[j + len] = T(u - v);
            }
        }
    }
}

} // namespace

FourierSpectrum spectrum(const BooleanFunction& f) {
    std::vector<long> buf(f.size());
    for (std::uint32_t x = 0; x < f.size(); ++x) buf[x] = f.sign(x);
    hadamard(buf);
    long denom = long(1) << f.arity();
    std::vector<Rational> coeffs(f.size());
    for (std::size_t z = 0; z < buf.size(); ++z) {
        coeffs[z] = make_rational(buf[z], denom);
    }
    return FourierSpectrum(f.arity(), std::move(coeffs));
}

BooleanFunction inverse_spectrum(const FourierSpectrum& spec) {
    std::vector<Rational> buf = spec.coefficients();
    hadamard(buf);
    std::vector<std::uint8_t> table(buf.size());
    for (std::size_t x = 0; x < buf.size(); ++x) {
        if (buf[x] == 1) {
            table[x] = 0;
        } else if (buf[x] == -1) {
            table[x] = 1;
        } else {
            fail(ErrorCode::Range, "spectrum does not invert to a +/-1 function");
        }
    }
    return BooleanFunction(spec.arity(), std::move(table));
}

namespace {

// sum_z fa_z fb_z fc_z beta^|z|, the correlator of one input row whose
// per-copy output-parity bias is beta.
Rational row_bias(const FourierSpectrum& fa, const FourierSpectrum& fb,
                  const FourierSpectrum& fc, const Rational& beta) {
    std::vector<Rational> powers(static_cast<std::size_t>(fa.arity()) + 1);
    powers[0] = 1;
    for (std::size_t k = 1; k < powers.size(); ++k) powers[k] = Rational(powers[k - 1] * beta);
    Rational sum = 0;
    for (std::uint32_t z = 0; z < fa.size(); ++z) {
        const Rational& a = fa.coefficient(z);
        if (a == 0) continue;
        sum += a * fb.coefficient(z) * fc.coefficient(z) *
               powers[static_cast<std::size_t>(std::popcount(z))];
    }
    return sum;
}

} // namespace

Rational nonadaptive_value(const BooleanFunction& fa, const BooleanFunction& fb,
                           const BooleanFunction& fc, const Rational& eps,
                           const Rational& delta) {
    if (fa.arity() != fb.arity() || fa.arity() != fc.arity()) {
        fail(ErrorCode::Arity, "final functions must share an arity");
    }
    FourierSpectrum sa = spectrum(fa);
    FourierSpectrum sb = spectrum(fb);
    FourierSpectrum sc = spectrum(fc);
    // The 000 row enters the inequality with +1 and per-copy bias eps; the
    // rows 011, 101, 110 each enter with -1 and bias delta.
    return row_bias(sa, sb, sc, eps) - 3 * row_bias(sa, sb, sc, delta);
}

Rational parity_bound(const Rational& eps, const Rational& delta, int n) {
    if (n < 1) fail(ErrorCode::Range, "depth must be positive");
    Rational best = 0;
    Rational pe = 1;
    Rational pd = 1;
    for (int k = 1; k <= n; ++k) {
        pe = Rational(pe * eps);
        pd = Rational(pd * delta);
        Rational term = abs_rational(Rational(pe - 3 * pd));
        if (term > best) best = term;
    }
    return best;
}

WiringProtocol non_adaptive_ghz_protocol(const BooleanFunction& fa,
                                         const BooleanFunction& fb,
                                         const BooleanFunction& fc) {
    if (fa.arity() != fb.arity() || fa.arity() != fc.arity()) {
        fail(ErrorCode::Arity, "final functions must share an arity");
    }
    int n = fa.arity();
    auto party = [n](const BooleanFunction& f) {
        // Variable k of f is box k's output, i.e. history bit n-1-k; the
        // history word therefore indexes f's table directly.
        std::vector<std::uint8_t> bits(std::size_t(2) << n);
        for (std::size_t input = 0; input < 2; ++input) {
            for (std::uint32_t h = 0; h < (std::uint32_t(1) << n); ++h) {
                bits[(input << n) | h] = f.bit(h);
            }
        }
        PartyWiring w{std::vector<StageFunction>(static_cast<std::size_t>(n - 1),
                                                 StageFunction::identity()),
                      FinalFunction(n, std::move(bits))};
        return w;
    };
    return WiringProtocol{n, party(fa), party(fb), party(fc)};
}

} // namespace nlb
