#include "nlb/search.hpp"

#include "nlb/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdlib>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nlb {

namespace {

std::vector<std::uint8_t> resolve_set(const std::optional<std::vector<std::uint8_t>>& override_set,
                                      std::vector<std::uint8_t> fallback, unsigned max_value,
                                      const char* what) {
    std::vector<std::uint8_t> set = override_set ? *override_set : std::move(fallback);
    if (set.empty()) fail(ErrorCode::Range, std::string(what) + " set is empty");
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (set.back() > max_value) fail(ErrorCode::Range, std::string(what) + " table out of range");
    return set;
}

const PartySpace& party_space(const SearchSpaceSpec& space, int party) {
    switch (party) {
        case 0: return space.a;
        case 1: return space.b;
        default: return space.c;
    }
}

std::vector<std::uint8_t> all_tables(unsigned count) {
    std::vector<std::uint8_t> tables(count);
    for (unsigned i = 0; i < count; ++i) tables[i] = static_cast<std::uint8_t>(i);
    return tables;
}

struct ResolvedSpace {
    std::array<std::vector<std::uint8_t>, 3> stages;
    std::array<std::vector<std::uint8_t>, 3> finals;

    std::uint64_t stage_combos() const {
        return std::uint64_t(stages[0].size()) * stages[1].size() * stages[2].size();
    }
    std::uint64_t final_combos() const {
        return std::uint64_t(finals[0].size()) * finals[1].size() * finals[2].size();
    }
    std::uint64_t size() const { return stage_combos() * final_combos(); }
};

ResolvedSpace resolve(const SearchSpaceSpec& space) {
    ResolvedSpace rs;
    for (int p = 0; p < 3; ++p) {
        rs.stages[p] = space.stage_set(p);
        rs.finals[p] = space.final_set(p);
    }
    return rs;
}

std::uint64_t pack_encoding(std::uint8_t sa, std::uint8_t sb, std::uint8_t sc, std::uint8_t fa,
                            std::uint8_t fb, std::uint8_t fc) {
    return (std::uint64_t(sa) << 40) | (std::uint64_t(sb) << 32) | (std::uint64_t(sc) << 24) |
           (std::uint64_t(fa) << 16) | (std::uint64_t(fb) << 8) | std::uint64_t(fc);
}

} // namespace

std::vector<std::uint8_t> parity_final_tables() {
    std::vector<std::uint8_t> tables;
    tables.reserve(16);
    for (int c0 = 0; c0 < 2; ++c0) {
        for (int cx = 0; cx < 2; ++cx) {
            for (int c1 = 0; c1 < 2; ++c1) {
                for (int c2 = 0; c2 < 2; ++c2) {
                    std::uint8_t tt = 0;
                    for (int idx = 0; idx < 8; ++idx) {
                        int x = (idx >> 2) & 1;
                        int a1 = (idx >> 1) & 1;
                        int a2 = idx & 1;
                        int v = c0 ^ (cx & x) ^ (c1 & a1) ^ (c2 & a2);
                        tt |= std::uint8_t(v) << idx;
                    }
                    tables.push_back(tt);
                }
            }
        }
    }
    std::sort(tables.begin(), tables.end());
    return tables;
}

std::vector<std::uint8_t> SearchSpaceSpec::stage_set(int party) const {
    std::vector<std::uint8_t> fallback;
    if (wiring_mode == WiringMode::NonAdaptive) {
        fallback = {0x0, 0x3, 0xC, 0xF}; // 0, NOT x, x, 1
    } else {
        fallback = all_tables(16);
    }
    return resolve_set(party_space(*this, party).stages, std::move(fallback), 0xF, "stage");
}

std::vector<std::uint8_t> SearchSpaceSpec::final_set(int party) const {
    std::vector<std::uint8_t> fallback =
        final_mode == FinalMode::ParityOnly ? parity_final_tables() : all_tables(256);
    return resolve_set(party_space(*this, party).finals, std::move(fallback), 0xFF, "final");
}

std::uint64_t SearchSpaceSpec::size() const { return resolve(*this).size(); }

std::uint64_t encoding_at(const SearchSpaceSpec& space, std::uint64_t index) {
    ResolvedSpace rs = resolve(space);
    if (index >= rs.size()) fail(ErrorCode::Range, "candidate index out of range");
    std::array<std::size_t, 6> radix = {rs.stages[0].size(), rs.stages[1].size(),
                                        rs.stages[2].size(), rs.finals[0].size(),
                                        rs.finals[1].size(), rs.finals[2].size()};
    std::array<std::size_t, 6> digit{};
    for (int pos = 5; pos >= 0; --pos) {
        digit[pos] = index % radix[pos];
        index /= radix[pos];
    }
    return pack_encoding(rs.stages[0][digit[0]], rs.stages[1][digit[1]], rs.stages[2][digit[2]],
                         rs.finals[0][digit[3]], rs.finals[1][digit[4]], rs.finals[2][digit[5]]);
}

WiringProtocol protocol_at(const SearchSpaceSpec& space, std::uint64_t index) {
    return protocol_from_encoding(encoding_at(space, index));
}

WiringProtocol protocol_from_encoding(std::uint64_t encoding) {
    if (encoding >> 48) fail(ErrorCode::Range, "stray bits in protocol encoding");
    auto byte = [encoding](int shift) { return std::uint8_t((encoding >> shift) & 0xFF); };
    std::array<std::uint8_t, 3> stage_tts = {byte(40), byte(32), byte(24)};
    std::array<std::uint8_t, 3> final_tts = {byte(16), byte(8), byte(0)};
    for (auto tt : stage_tts) {
        if (tt > 0xF) fail(ErrorCode::Range, "stage table out of range");
    }
    auto party = [](std::uint8_t stage, std::uint8_t final_tt) {
        return PartyWiring{{StageFunction(stage)}, FinalFunction::from_packed(2, final_tt)};
    };
    return WiringProtocol{2, party(stage_tts[0], final_tts[0]), party(stage_tts[1], final_tts[1]),
                          party(stage_tts[2], final_tts[2])};
}

std::uint64_t encoding_of(const WiringProtocol& protocol) {
    if (protocol.depth != 2) fail(ErrorCode::DepthMismatch, "encoding is defined for depth 2");
    auto pack_final = [](const FinalFunction& f) {
        if (f.depth() != 2) fail(ErrorCode::DepthMismatch, "final depth mismatch");
        std::uint8_t tt = 0;
        for (int i = 0; i < 8; ++i) tt |= std::uint8_t(f.bits()[std::size_t(i)]) << i;
        return tt;
    };
    auto stage_of = [](const PartyWiring& w) {
        if (w.stages.size() != 1) fail(ErrorCode::DepthMismatch, "one stage per party expected");
        return w.stages[0].table();
    };
    return pack_encoding(stage_of(protocol.a), stage_of(protocol.b), stage_of(protocol.c),
                         pack_final(protocol.a.final), pack_final(protocol.b.final),
                         pack_final(protocol.c.final));
}

bool space_contains(const SearchSpaceSpec& space, const WiringProtocol& protocol) {
    if (protocol.depth != 2) return false;
    for (const PartyWiring* w : {&protocol.a, &protocol.b, &protocol.c}) {
        if (w->stages.size() != 1 || w->final.depth() != 2) return false;
    }
    std::uint64_t enc = encoding_of(protocol);
    ResolvedSpace rs = resolve(space);
    auto has = [](const std::vector<std::uint8_t>& set, std::uint8_t v) {
        return std::binary_search(set.begin(), set.end(), v);
    };
    return has(rs.stages[0], std::uint8_t(enc >> 40)) && has(rs.stages[1], std::uint8_t(enc >> 32)) &&
           has(rs.stages[2], std::uint8_t(enc >> 24)) && has(rs.finals[0], std::uint8_t(enc >> 16)) &&
           has(rs.finals[1], std::uint8_t(enc >> 8)) && has(rs.finals[2], std::uint8_t(enc));
}

Polynomial protocol_value_poly(const WiringProtocol& protocol, ClassId cls,
                               const BellInequality& ineq, const std::vector<Rational>& samples) {
    if (protocol.depth != 2) fail(ErrorCode::DepthMismatch, "value polynomial needs depth 2");
    auto family = [&protocol, cls](const Rational& delta) {
        TripartiteBox box = noisy_class_box(cls, delta);
        return wire(protocol, {box, box});
    };
    return value_poly_in_delta(family, ineq, 2, samples);
}

int worker_count(int requested) {
    int limit = std::numeric_limits<int>::max();
    if (const char* env = std::getenv("NLB_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) limit = int(std::min<long>(v, 1024));
    }
    int base = 1;
#ifdef _OPENMP
    base = omp_get_max_threads();
#endif
    if (requested > 0) base = requested;
    return std::max(1, std::min(base, limit));
}

// ---------------------------------------------------------------------------
// Shared kernel machinery.
//
// With affine finals F_p = c0 ^ cx*x_p ^ c1*o1_p ^ c2*o2_p, a correlator term
// over party set S factors as
//   (-1)^base * sum_{o1} P1(o1|r) chi_{m1}(o1) * sum_{o2} P2(o2|r2) chi_{m2}(o2)
// with m1/m2 collecting the c1/c2 bits of the parties in S and base the
// constant-plus-input part. The inner sum depends only on the second box row
// (tensor C2), the outer one only on the stage combo (tensor D1), so a
// candidate's value is a short integer dot product against D1.
// ---------------------------------------------------------------------------

namespace {

constexpr std::int64_t kGhzDenomCap = 1 << 20;

int stage_apply_tt(std::uint8_t tt, int input, int output) {
    return (tt >> (input * 2 + output)) & 1;
}

struct SignTable {
    std::array<std::array<std::int64_t, 8>, 8> s{};
    SignTable() {
        for (unsigned m = 0; m < 8; ++m) {
            for (unsigned o = 0; o < 8; ++o) {
                s[m][o] = (std::popcount(m & o) & 1u) ? -1 : 1;
            }
        }
    }
};
const SignTable kSigns;

struct AffineFinal {
    std::uint8_t c0, cx, c1, c2;
};

std::optional<AffineFinal> affine_final(std::uint8_t tt) {
    AffineFinal ab{};
    ab.c0 = tt & 1;
    ab.c2 = ((tt >> 1) & 1) ^ ab.c0;
    ab.c1 = ((tt >> 2) & 1) ^ ab.c0;
    ab.cx = ((tt >> 4) & 1) ^ ab.c0;
    for (int idx = 0; idx < 8; ++idx) {
        int x = (idx >> 2) & 1;
        int a1 = (idx >> 1) & 1;
        int a2 = idx & 1;
        int v = ab.c0 ^ (ab.cx & x) ^ (ab.c1 & a1) ^ (ab.c2 & a2);
        if (v != ((tt >> idx) & 1)) return std::nullopt;
    }
    return ab;
}

struct KernelTerm {
    std::int64_t coeff;
    std::uint8_t parties;
    std::uint8_t row;
};

// Integer-coefficient view of the inequality with absent parties' inputs
// completed to zero; nullopt when the kernel cannot represent it.
std::optional<std::vector<KernelTerm>> kernel_terms(const BellInequality& ineq,
                                                    const InputDomain& domain) {
    std::vector<KernelTerm> terms;
    for (const auto& [coeff, term] : ineq.terms) {
        if (coeff.get_den() != 1 || !coeff.get_num().fits_slong_p()) return std::nullopt;
        if (!domain.contains(term.settings)) return std::nullopt;
        terms.push_back({coeff.get_num().get_si(), term.parties, term.settings});
    }
    return terms;
}

std::int64_t abs_coeff_sum(const std::vector<KernelTerm>& terms) {
    std::int64_t sum = 0;
    for (const auto& t : terms) sum += std::abs(t.coeff);
    return sum;
}

// One exactly-representable evaluation point: scaled box entries plus the
// domain's validity mask.
struct SampleTable {
    std::array<std::array<std::int64_t, 8>, 8> t{};
    std::array<bool, 8> valid{};
};

std::array<SampleTable, 3> class_sample_tables(ClassId cls) {
    Gf2Poly3 poly = class_parity_poly(cls);
    std::array<SampleTable, 3> tables{};
    for (int s = 0; s <= 2; ++s) {
        SampleTable& st = tables[std::size_t(s)];
        st.valid.fill(true);
        for (int r = 0; r < 8; ++r) {
            int f = poly.eval_row(std::uint8_t(r));
            for (int o = 0; o < 8; ++o) {
                int par = row_parity(std::uint8_t(o));
                // 8 * P(o|r) at delta = s/2: the noisy part hits the class
                // parity, the correlated part parity zero.
                st.t[r][o] = (par == f ? s : 0) + (par == 0 ? 2 - s : 0);
            }
        }
    }
    return tables;
}

// 8d * P(o|r) for noisy_ghz at eps = be/d, delta = bd/d; nullopt when the
// common denominator is too large for the integer kernel.
std::optional<SampleTable> ghz_sample_table(const NoiseParams& noise, std::int64_t& denom) {
    Integer den;
    mpz_lcm(den.get_mpz_t(), noise.eps.get_den().get_mpz_t(), noise.delta.get_den().get_mpz_t());
    if (den > kGhzDenomCap) return std::nullopt;
    std::int64_t d = den.get_si();
    std::int64_t be = Integer(noise.eps.get_num() * (den / noise.eps.get_den())).get_si();
    std::int64_t bd = Integer(noise.delta.get_num() * (den / noise.delta.get_den())).get_si();
    SampleTable st{};
    for (std::uint8_t r : InputDomain{DomainKind::EvenParity}.rows()) {
        st.valid[r] = true;
        std::int64_t b = (r == 0) ? be : bd;
        for (int o = 0; o < 8; ++o) {
            st.t[r][o] = d + (row_parity(std::uint8_t(o)) ? -b : b);
        }
    }
    denom = d;
    return st;
}

using C2Table = std::array<std::array<std::int64_t, 8>, 8>;

// C2[r'][m] = sum_o T[r'][o] chi_m(o); rows outside the domain are zero,
// which is exactly the parked-branch contribution under the Sink policy.
C2Table build_c2(const SampleTable& st) {
    C2Table c2{};
    for (int r = 0; r < 8; ++r) {
        if (!st.valid[std::size_t(r)]) continue;
        for (int m = 0; m < 8; ++m) {
            std::int64_t sum = 0;
            for (int o = 0; o < 8; ++o) sum += st.t[r][o] * kSigns.s[m][o];
            c2[r][m] = sum;
        }
    }
    return c2;
}

struct StageData {
    std::array<std::array<std::uint8_t, 8>, 8> r2map{}; // [row][first outputs]
    bool reaches_invalid = false;
};

StageData build_stage_data(std::uint8_t sa, std::uint8_t sb, std::uint8_t sc,
                           const std::array<bool, 8>& valid) {
    StageData sd;
    for (int r = 0; r < 8; ++r) {
        if (!valid[std::size_t(r)]) continue;
        int x = (r >> 2) & 1, y = (r >> 1) & 1, z = r & 1;
        for (int o1 = 0; o1 < 8; ++o1) {
            int a = (o1 >> 2) & 1, b = (o1 >> 1) & 1, c = o1 & 1;
            int r2 = (stage_apply_tt(sa, x, a) << 2) | (stage_apply_tt(sb, y, b) << 1) |
                     stage_apply_tt(sc, z, c);
            sd.r2map[r][o1] = std::uint8_t(r2);
            if (!valid[std::size_t(r2)]) sd.reaches_invalid = true;
        }
    }
    return sd;
}

// D1[r*64 + m1*8 + m2] = sum_{o1} T1[r][o1] chi_{m1}(o1) C2[r2map[r][o1]][m2].
void build_d1(const SampleTable& st, const C2Table& c2, const StageData& sd, std::int64_t* d1) {
    std::fill(d1, d1 + 512, std::int64_t(0));
    for (int r = 0; r < 8; ++r) {
        if (!st.valid[std::size_t(r)]) continue;
        for (int o1 = 0; o1 < 8; ++o1) {
            std::int64_t w = st.t[r][o1];
            if (w == 0) continue;
            const auto& c2row = c2[sd.r2map[r][o1]];
            for (int m1 = 0; m1 < 8; ++m1) {
                std::int64_t w1 = w * kSigns.s[m1][o1];
                std::int64_t* dst = d1 + r * 64 + m1 * 8;
                for (int m2 = 0; m2 < 8; ++m2) dst[m2] += w1 * c2row[m2];
            }
        }
    }
}

struct TermDesc {
    std::int32_t sc;   // coefficient times the affine part's sign
    std::uint16_t idx; // row*64 + m1*8 + m2
};

// Descriptors for every final combo (row-major over the per-party final
// sets), terms.size() entries each. Empty when some final is not affine.
std::vector<TermDesc> final_descriptors(const ResolvedSpace& rs,
                                        const std::vector<KernelTerm>& terms) {
    std::array<std::vector<AffineFinal>, 3> bits;
    for (int p = 0; p < 3; ++p) {
        bits[p].reserve(rs.finals[p].size());
        for (auto tt : rs.finals[std::size_t(p)]) {
            auto ab = affine_final(tt);
            if (!ab) return {};
            bits[std::size_t(p)].push_back(*ab);
        }
    }
    std::size_t nt = terms.size();
    std::vector<TermDesc> descs(rs.final_combos() * nt);
    std::size_t pos = 0;
    for (const AffineFinal& fa : bits[0]) {
        for (const AffineFinal& fb : bits[1]) {
            for (const AffineFinal& fc : bits[2]) {
                for (const KernelTerm& kt : terms) {
                    bool in_a = kt.parties & 4, in_b = kt.parties & 2, in_c = kt.parties & 1;
                    int xa = (kt.row >> 2) & 1, xb = (kt.row >> 1) & 1, xc = kt.row & 1;
                    int m1 = ((in_a ? fa.c1 : 0) << 2) | ((in_b ? fb.c1 : 0) << 1) |
                             (in_c ? fc.c1 : 0);
                    int m2 = ((in_a ? fa.c2 : 0) << 2) | ((in_b ? fb.c2 : 0) << 1) |
                             (in_c ? fc.c2 : 0);
                    int base = 0;
                    if (in_a) base ^= fa.c0 ^ (fa.cx & xa);
                    if (in_b) base ^= fb.c0 ^ (fb.cx & xb);
                    if (in_c) base ^= fc.c0 ^ (fc.cx & xc);
                    descs[pos++] = {std::int32_t((base ? -1 : 1) * kt.coeff),
                                    std::uint16_t(kt.row * 64 + m1 * 8 + m2)};
                }
            }
        }
    }
    return descs;
}

// Final parts of the packed encoding, aligned with the descriptor order.
std::vector<std::uint64_t> final_encoding_parts(const ResolvedSpace& rs) {
    std::vector<std::uint64_t> parts;
    parts.reserve(rs.final_combos());
    for (auto fa : rs.finals[0]) {
        for (auto fb : rs.finals[1]) {
            for (auto fc : rs.finals[2]) {
                parts.push_back((std::uint64_t(fa) << 16) | (std::uint64_t(fb) << 8) | fc);
            }
        }
    }
    return parts;
}

struct PolyAcc {
    std::uint64_t count = 0;
    std::uint64_t min_encoding = ~std::uint64_t(0);
};

void merge_acc(PolyAcc& into, const PolyAcc& from) {
    into.count += from.count;
    into.min_encoding = std::min(into.min_encoding, from.min_encoding);
}

// The three scaled coefficients fit 21 bits each by the caller's precheck.
constexpr std::int64_t kKeyOffset = 1 << 20;

std::uint64_t pack_poly_key(std::int64_t c0, std::int64_t c1, std::int64_t c2) {
    auto field = [](std::int64_t c) { return std::uint64_t(c + kKeyOffset) & 0x1FFFFF; };
    return field(c0) | (field(c1) << 21) | (field(c2) << 42);
}

std::array<std::int64_t, 3> unpack_poly_key(std::uint64_t key) {
    auto field = [](std::uint64_t bits) { return std::int64_t(bits & 0x1FFFFF) - kKeyOffset; };
    return {field(key), field(key >> 21), field(key >> 42)};
}

Polynomial poly_from_scaled(const std::array<std::int64_t, 3>& scaled) {
    return Polynomial({make_rational(scaled[0], 64), make_rational(scaled[1], 64),
                       make_rational(scaled[2], 64)});
}

struct RankedEntryInput {
    Polynomial vprime;
    std::uint64_t count;
    std::uint64_t encoding;
};

Polynomial negate(const Polynomial& p) {
    std::vector<Rational> coeffs;
    coeffs.reserve(p.coeffs().size());
    for (const auto& c : p.coeffs()) coeffs.push_back(Rational(-c));
    return Polynomial(std::move(coeffs));
}

// Sorted-interval union of two regions with disjoint supports.
DistillationRegion disjoint_union(DistillationRegion lhs, const DistillationRegion& rhs) {
    for (const auto& iv : rhs.intervals) lhs.intervals.push_back(iv);
    std::sort(lhs.intervals.begin(), lhs.intervals.end(),
              [](const RegionInterval& p, const RegionInterval& q) {
                  return p.lo.value < q.lo.value;
              });
    return lhs;
}

std::vector<SearchEntry> rank_entries(std::vector<RankedEntryInput> inputs,
                                      const Polynomial& baseline, bool absolute_gain) {
    if (absolute_gain) {
        // |V'| > |V| reduces to V' > V or -V' > V because the baseline is
        // strictly positive on (0, 1]; verify that before relying on it.
        Polynomial zero;
        if (!(max_difference_on_unit(negate(baseline), zero) < 0)) {
            fail(ErrorCode::Range, "absolute ranking needs a positive baseline");
        }
    }
    std::vector<SearchEntry> entries;
    entries.reserve(inputs.size());
    for (auto& in : inputs) {
        SearchEntry e;
        e.region = distillation_region(in.vprime, baseline);
        e.max_gain = max_difference_on_unit(in.vprime, baseline);
        if (absolute_gain) {
            Polynomial neg = negate(in.vprime);
            e.region = disjoint_union(std::move(e.region), distillation_region(neg, baseline));
            Rational neg_gain = max_difference_on_unit(neg, baseline);
            if (neg_gain > e.max_gain) e.max_gain = neg_gain;
        }
        e.vprime = std::move(in.vprime);
        e.representatives = in.count;
        e.encoding = in.encoding;
        entries.push_back(std::move(e));
    }
    std::sort(entries.begin(), entries.end(), [](const SearchEntry& p, const SearchEntry& q) {
        Rational pa = p.region.area();
        Rational qa = q.region.area();
        if (pa != qa) return pa > qa;
        if (p.max_gain != q.max_gain) return p.max_gain > q.max_gain;
        return p.encoding < q.encoding;
    });
    return entries;
}

std::string poly_string_key(const Polynomial& p) {
    std::string key;
    for (const auto& c : p.coeffs()) {
        key += to_string(c);
        key += '|';
    }
    return key;
}

} // namespace

// ---------------------------------------------------------------------------
// Class-box search.
// ---------------------------------------------------------------------------

namespace {

std::vector<RankedEntryInput> class_sweep_kernel(ClassId cls, const ResolvedSpace& rs,
                                                 const std::vector<KernelTerm>& terms,
                                                 const std::vector<TermDesc>& descs,
                                                 int threads) {
    std::array<SampleTable, 3> samples = class_sample_tables(cls);
    std::array<C2Table, 3> c2{};
    for (int s = 0; s < 3; ++s) c2[std::size_t(s)] = build_c2(samples[std::size_t(s)]);

    std::size_t nt = terms.size();
    std::vector<std::uint64_t> fparts = final_encoding_parts(rs);
    std::int64_t stage_combos = std::int64_t(rs.stage_combos());
    std::size_t nsb = rs.stages[1].size();
    std::size_t nsc = rs.stages[2].size();

    int workers = worker_count(threads);
    std::vector<std::unordered_map<std::uint64_t, PolyAcc>> maps(static_cast<std::size_t>(workers));
    for (auto& m : maps) m.reserve(1024);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
    for (std::int64_t si = 0; si < stage_combos; ++si) {
        int tid = 0;
#ifdef _OPENMP
        tid = omp_get_thread_num();
#endif
        auto& acc = maps[std::size_t(tid)];
        std::size_t ia = std::size_t(si) / (nsb * nsc);
        std::size_t ib = (std::size_t(si) / nsc) % nsb;
        std::size_t ic = std::size_t(si) % nsc;
        std::uint8_t sa = rs.stages[0][ia];
        std::uint8_t sb = rs.stages[1][ib];
        std::uint8_t sc = rs.stages[2][ic];
        // Class boxes live on the full domain, so every row is valid and no
        // candidate is ever skipped or sunk.
        StageData sd = build_stage_data(sa, sb, sc, samples[0].valid);
        std::array<std::array<std::int64_t, 512>, 3> d1;
        for (int s = 0; s < 3; ++s) {
            build_d1(samples[std::size_t(s)], c2[std::size_t(s)], sd, d1[std::size_t(s)].data());
        }
        std::uint64_t enc_base = (std::uint64_t(sa) << 40) | (std::uint64_t(sb) << 32) |
                                 (std::uint64_t(sc) << 24);
        const TermDesc* desc = descs.data();
        for (std::size_t j = 0; j < fparts.size(); ++j, desc += nt) {
            std::int64_t v0 = 0, vh = 0, v1 = 0;
            for (std::size_t t = 0; t < nt; ++t) {
                std::int64_t scoeff = desc[t].sc;
                std::uint16_t idx = desc[t].idx;
                v0 += scoeff * d1[0][idx];
                vh += scoeff * d1[1][idx];
                v1 += scoeff * d1[2][idx];
            }
            std::uint64_t key =
                pack_poly_key(v0, -3 * v0 + 4 * vh - v1, 2 * v0 - 4 * vh + 2 * v1);
            PolyAcc& slot = acc[key];
            slot.count += 1;
            slot.min_encoding = std::min(slot.min_encoding, enc_base | fparts[j]);
        }
    }

    std::map<std::uint64_t, PolyAcc> merged;
    for (const auto& m : maps) {
        for (const auto& [key, acc] : m) merge_acc(merged[key], acc);
    }
    std::vector<RankedEntryInput> inputs;
    inputs.reserve(merged.size());
    for (const auto& [key, acc] : merged) {
        inputs.push_back({poly_from_scaled(unpack_poly_key(key)), acc.count, acc.min_encoding});
    }
    return inputs;
}

std::vector<RankedEntryInput> class_sweep_reference(ClassId cls, const SearchSpaceSpec& space,
                                                    const BellInequality& ineq) {
    std::map<std::string, std::pair<Polynomial, PolyAcc>> merged;
    std::uint64_t n = space.size();
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint64_t enc = encoding_at(space, i);
        Polynomial p = protocol_value_poly(protocol_from_encoding(enc), cls, ineq);
        auto& slot = merged[poly_string_key(p)];
        if (slot.second.count == 0) slot.first = p;
        slot.second.count += 1;
        slot.second.min_encoding = std::min(slot.second.min_encoding, enc);
    }
    std::vector<RankedEntryInput> inputs;
    inputs.reserve(merged.size());
    for (auto& [key, slot] : merged) {
        inputs.push_back({std::move(slot.first), slot.second.count, slot.second.min_encoding});
    }
    return inputs;
}

} // namespace

SearchReport search_report(ClassId cls, const SearchSpaceSpec& space, const SearchOptions& opts) {
    BellInequality ineq = class41_inequality();
    ResolvedSpace rs = resolve(space);

    SearchReport report;
    report.cls = cls;
    report.space = space;
    report.candidates = rs.size();
    report.absolute_gain = opts.absolute_gain;
    auto family = [cls](const Rational& delta) { return noisy_class_box(cls, delta); };
    report.baseline = value_poly_in_delta(family, ineq, 2);

    bool kernel_ok = false;
    std::vector<KernelTerm> terms;
    std::vector<TermDesc> descs;
    if (opts.engine != SearchEngine::Reference) {
        auto kt = kernel_terms(ineq, InputDomain{DomainKind::Full});
        if (kt) {
            // Scaled values stay within the packed key's 21-bit fields.
            std::int64_t bound = 10 * 64 * abs_coeff_sum(*kt);
            if (bound < kKeyOffset) {
                descs = final_descriptors(rs, *kt);
                if (!descs.empty()) {
                    terms = std::move(*kt);
                    kernel_ok = true;
                }
            }
        }
        if (!kernel_ok && opts.engine == SearchEngine::Kernel) {
            fail(ErrorCode::Range, "kernel engine needs affine finals and integer coefficients");
        }
    }

    std::vector<RankedEntryInput> inputs =
        kernel_ok ? class_sweep_kernel(cls, rs, terms, descs, opts.threads)
                  : class_sweep_reference(cls, space, ineq);
    report.entries = rank_entries(std::move(inputs), report.baseline, opts.absolute_gain);
    if (opts.top && report.entries.size() > *opts.top) report.entries.resize(*opts.top);
    return report;
}

// ---------------------------------------------------------------------------
// GHZ search.
// ---------------------------------------------------------------------------

SearchSpaceSpec ghz_parity_space(WiringMode mode) {
    SearchSpaceSpec space;
    space.wiring_mode = mode;
    space.final_mode = FinalMode::ParityOnly;
    // a1 ^ a2 and its negation.
    std::vector<std::uint8_t> finals = {0x66, 0x99};
    space.a.finals = finals;
    space.b.finals = finals;
    space.c.finals = finals;
    return space;
}

namespace {

struct GhzPartial {
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    std::uint64_t best_count = 0;
    std::vector<std::uint64_t> encodings; // ascending, capped
    std::uint64_t evaluated = 0;
    std::uint64_t skipped = 0;
    std::uint64_t sunk = 0;

    void offer(std::int64_t value, std::uint64_t encoding, std::size_t cap) {
        if (value > best) {
            best = value;
            best_count = 0;
            encodings.clear();
        }
        if (value == best) {
            best_count += 1;
            if (encodings.size() < cap) encodings.push_back(encoding);
        }
    }
};

void merge_ghz(GhzPartial& into, const GhzPartial& from, std::size_t cap) {
    into.evaluated += from.evaluated;
    into.skipped += from.skipped;
    into.sunk += from.sunk;
    if (from.best_count == 0) return;
    if (from.best > into.best) {
        into.best = from.best;
        into.best_count = from.best_count;
        into.encodings = from.encodings;
    } else if (from.best == into.best) {
        into.best_count += from.best_count;
        into.encodings.insert(into.encodings.end(), from.encodings.begin(), from.encodings.end());
        std::sort(into.encodings.begin(), into.encodings.end());
        if (into.encodings.size() > cap) into.encodings.resize(cap);
    }
}

GhzPartial ghz_sweep_kernel(const SampleTable& sample, const ResolvedSpace& rs,
                            const std::vector<KernelTerm>& terms,
                            const std::vector<TermDesc>& descs, DomainPolicy policy,
                            std::size_t cap, int threads) {
    C2Table c2 = build_c2(sample);
    std::size_t nt = terms.size();
    std::vector<std::uint64_t> fparts = final_encoding_parts(rs);
    std::int64_t stage_combos = std::int64_t(rs.stage_combos());
    std::size_t nsb = rs.stages[1].size();
    std::size_t nsc = rs.stages[2].size();

    int workers = worker_count(threads);
    std::vector<GhzPartial> partials(static_cast<std::size_t>(workers));

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
    for (std::int64_t si = 0; si < stage_combos; ++si) {
        int tid = 0;
#ifdef _OPENMP
        tid = omp_get_thread_num();
#endif
        GhzPartial& part = partials[std::size_t(tid)];
        std::size_t ia = std::size_t(si) / (nsb * nsc);
        std::size_t ib = (std::size_t(si) / nsc) % nsb;
        std::size_t ic = std::size_t(si) % nsc;
        std::uint8_t sa = rs.stages[0][ia];
        std::uint8_t sb = rs.stages[1][ib];
        std::uint8_t sc = rs.stages[2][ic];
        StageData sd = build_stage_data(sa, sb, sc, sample.valid);
        if (sd.reaches_invalid && policy == DomainPolicy::Skip) {
            part.skipped += fparts.size();
            continue;
        }
        std::array<std::int64_t, 512> d1;
        build_d1(sample, c2, sd, d1.data());
        std::uint64_t enc_base = (std::uint64_t(sa) << 40) | (std::uint64_t(sb) << 32) |
                                 (std::uint64_t(sc) << 24);
        if (sd.reaches_invalid) part.sunk += fparts.size();
        part.evaluated += fparts.size();
        const TermDesc* desc = descs.data();
        for (std::size_t j = 0; j < fparts.size(); ++j, desc += nt) {
            std::int64_t v = 0;
            for (std::size_t t = 0; t < nt; ++t) v += desc[t].sc * d1[desc[t].idx];
            part.offer(v, enc_base | fparts[j], cap);
        }
    }

    GhzPartial total;
    for (const auto& part : partials) merge_ghz(total, part, cap);
    return total;
}

Rational permissive_value(const SubnormalizedBox& box, const BellInequality& ineq) {
    Rational value = 0;
    for (const auto& [coeff, term] : ineq.terms) {
        value += coeff * permissive_correlator(box, term.parties, term.settings);
    }
    return value;
}

} // namespace

GhzSearchResult ghz_search_depth2(const NoiseParams& noise, const SearchSpaceSpec& space,
                                  const GhzSearchOptions& opts) {
    TripartiteBox box = noisy_ghz(noise); // validates the noise range
    BellInequality ineq = class2_inequality();
    ResolvedSpace rs = resolve(space);

    GhzSearchResult result;
    result.policy = opts.policy;

    bool kernel_ok = false;
    std::int64_t denom = 1;
    std::optional<SampleTable> sample;
    std::vector<KernelTerm> terms;
    std::vector<TermDesc> descs;
    if (opts.engine != SearchEngine::Reference) {
        auto kt = kernel_terms(ineq, box.domain());
        sample = ghz_sample_table(noise, denom);
        if (kt && sample) {
            descs = final_descriptors(rs, *kt);
            if (!descs.empty()) {
                terms = std::move(*kt);
                kernel_ok = true;
            }
        }
        if (!kernel_ok && opts.engine == SearchEngine::Kernel) {
            fail(ErrorCode::Range, "kernel engine needs affine finals and a small denominator");
        }
    }

    if (kernel_ok) {
        GhzPartial total = ghz_sweep_kernel(*sample, rs, terms, descs, opts.policy,
                                            opts.max_witnesses, opts.threads);
        result.evaluated = total.evaluated;
        result.skipped = total.skipped;
        result.sunk = total.sunk;
        result.best_count = total.best_count;
        result.best_encodings = std::move(total.encodings);
        if (total.best_count > 0) {
            result.best = make_rational(total.best, 64 * denom * denom);
        }
        return result;
    }

    // Reference sweep: wire each candidate with the generic machinery.
    GhzPartial total; // reuse only the counters; values tracked as rationals
    Rational best = 0;
    bool have_best = false;
    std::uint64_t n = rs.size();
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint64_t enc = encoding_at(space, i);
        WiringProtocol protocol = protocol_from_encoding(enc);
        DomainCheck check = check_domain_preservation(protocol, box.domain());
        Rational value;
        if (check.ok) {
            value = eval_inequality(wire(protocol, {box, box}), ineq);
        } else if (opts.policy == DomainPolicy::Skip) {
            result.skipped += 1;
            continue;
        } else {
            value = permissive_value(wire_permissive(protocol, {box, box}), ineq);
            result.sunk += 1;
        }
        result.evaluated += 1;
        if (!have_best || value > best) {
            best = value;
            have_best = true;
            result.best_count = 0;
            result.best_encodings.clear();
        }
        if (value == best) {
            result.best_count += 1;
            if (result.best_encodings.size() < opts.max_witnesses) {
                result.best_encodings.push_back(enc);
            }
        }
    }
    if (have_best) result.best = best;
    return result;
}

} // namespace nlb
