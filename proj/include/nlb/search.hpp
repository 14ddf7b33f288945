#pragma once

// Exhaustive depth-2 protocol search. A depth-2 candidate is one stage
// function per party (how box 2's input is derived from box 1's input and
// output) plus one final function per party over (protocol input, two box
// outputs). Spaces are small enough to enumerate completely: the interesting
// ones are 4^3 * 16^3 = 262144 and 16^3 * 16^3 = 16777216 candidates.
//
// Two evaluation engines produce identical reports. The reference engine
// wires each candidate with the generic machinery and evaluates the
// inequality on exact rationals; it is the ground truth and is kept for
// testing and benchmarking. The kernel engine exploits the structure shared
// by all candidates with affine finals: every correlator term factors
// through two small integer tensors, so each candidate costs a few dozen
// integer operations. Candidate evaluation is independent, and the merge is
// associative and order-normalized, so reports do not depend on the worker
// count (OpenMP when available, serial otherwise; NLB_THREADS caps workers).

#include "nlb/box.hpp"
#include "nlb/inequality.hpp"
#include "nlb/polynomial.hpp"
#include "nlb/wiring.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace nlb {

enum class WiringMode { NonAdaptive, Adaptive };
enum class FinalMode { ParityOnly, All };

// What to do with a candidate whose box-2 input can leave the box domain
// (only possible on the even-parity domain): drop it from the search, or
// evaluate it permissively with the offending branches' weight parked.
enum class DomainPolicy { Skip, Sink };

enum class SearchEngine { Auto, Kernel, Reference };

// Optional per-party overrides. When set they replace the mode-derived
// sets; entries are sorted and deduplicated on resolution.
struct PartySpace {
    std::optional<std::vector<std::uint8_t>> stages; // 4-bit stage tables
    std::optional<std::vector<std::uint8_t>> finals; // 8-bit depth-2 final tables

    bool operator==(const PartySpace&) const = default;
};

struct SearchSpaceSpec {
    WiringMode wiring_mode = WiringMode::NonAdaptive;
    FinalMode final_mode = FinalMode::ParityOnly;
    PartySpace a, b, c;

    // Resolved per-party sets, ascending. NonAdaptive stages are the four
    // output-blind tables {0, NOT x, x, 1}; ParityOnly finals are the
    // sixteen degree-<=1 GF(2) polynomials in (x, a1, a2).
    std::vector<std::uint8_t> stage_set(int party) const;
    std::vector<std::uint8_t> final_set(int party) const;

    std::uint64_t size() const;

    bool operator==(const SearchSpaceSpec&) const = default;
};

// The sixteen affine truth tables over (x, a1, a2), ascending.
std::vector<std::uint8_t> parity_final_tables();

// Packed identity of a depth-2 candidate: six truth tables in one word,
// sA<<40 | sB<<32 | sC<<24 | fA<<16 | fB<<8 | fC. Enumeration by index is
// ascending in this encoding, which is the canonical (lexicographic) order.
std::uint64_t encoding_at(const SearchSpaceSpec& space, std::uint64_t index);
WiringProtocol protocol_at(const SearchSpaceSpec& space, std::uint64_t index);
WiringProtocol protocol_from_encoding(std::uint64_t encoding);

// Encoding of an existing depth-2 protocol (DepthMismatch otherwise).
std::uint64_t encoding_of(const WiringProtocol& protocol);

bool space_contains(const SearchSpaceSpec& space, const WiringProtocol& protocol);

// Exact value polynomial in delta of the inequality on the wired pair of
// noisy class boxes, interpolated at `samples` (default {0, 1/2, 1}; any
// three distinct points give the same polynomial).
Polynomial protocol_value_poly(const WiringProtocol& protocol, ClassId cls,
                               const BellInequality& ineq,
                               const std::vector<Rational>& samples = {});

struct SearchOptions {
    SearchEngine engine = SearchEngine::Auto;
    // Rank by |V'| - |V| instead of V' - V. Off by default: distillation
    // means the raw value grows.
    bool absolute_gain = false;
    std::optional<std::size_t> top; // keep only the best entries after ranking
    int threads = 0;                // 0 = all available (NLB_THREADS caps)
};

struct SearchEntry {
    Polynomial vprime;
    DistillationRegion region;      // where the gain is positive on (0, 1]
    Rational max_gain;              // sup of the gain over (0, 1]
    std::uint64_t representatives;  // candidates sharing this polynomial
    std::uint64_t encoding;         // smallest such candidate
};

struct SearchReport {
    ClassId cls;
    SearchSpaceSpec space;
    Polynomial baseline;            // single-box value polynomial
    std::uint64_t candidates = 0;
    bool absolute_gain = false;
    // Ranked: region area desc, then max_gain desc, then encoding asc.
    std::vector<SearchEntry> entries;
};

// Sweep the space on two copies of the delta-noisy class box against the
// 18-term class-41 facet, deduplicate by value polynomial, rank.
SearchReport search_report(ClassId cls, const SearchSpaceSpec& space,
                           const SearchOptions& opts = {});

struct GhzSearchOptions {
    DomainPolicy policy = DomainPolicy::Skip;
    SearchEngine engine = SearchEngine::Auto;
    std::size_t max_witnesses = 64;
    int threads = 0;
};

struct GhzSearchResult {
    Rational best;                        // 0 when nothing was evaluated
    std::uint64_t best_count = 0;         // candidates attaining best
    std::vector<std::uint64_t> best_encodings; // first max_witnesses, ascending
    std::uint64_t evaluated = 0;
    std::uint64_t skipped = 0;  // dropped for leaving the domain (Skip)
    std::uint64_t sunk = 0;     // evaluated with parked branches (Sink)
    DomainPolicy policy = DomainPolicy::Skip;
};

// The search space matching the closed-form candidates for two noisy GHZ
// copies: stages of the requested mode, finals restricted to the output
// parity a1^a2 and its negation. The wider ParityOnly final set contains
// degenerate winners (constant finals reach the local bound 2, and
// input-toggled finals reach eps^2 + delta^2), so it is not the default.
SearchSpaceSpec ghz_parity_space(WiringMode mode);

// Maximal class-2 value over the space on two noisy_ghz(eps, delta) copies.
GhzSearchResult ghz_search_depth2(const NoiseParams& noise, const SearchSpaceSpec& space,
                                  const GhzSearchOptions& opts = {});

// Worker count the search engines would use: requested if positive, else
// the OpenMP maximum (1 without OpenMP), capped by the NLB_THREADS variable.
int worker_count(int requested);

} // namespace nlb
