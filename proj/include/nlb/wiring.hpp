#pragma once

#include "nlb/box.hpp"
#include "nlb/rational.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace nlb {

// Local wiring of a chain of boxes. Box 0 receives the protocol input; box
// k+1 receives what stage k computes from box k's input and output; each
// party's final output is a function of its protocol input bit and its full
// output history. All of this is per party: stages and finals never see the
// other parties' bits.

class StageFunction {
  public:
    // Truth table over (previous input, previous output): bit index
    // prev_input*2 + prev_output.
    explicit StageFunction(std::uint8_t table) : table_(table & 0xF) {}

    static StageFunction identity() { return StageFunction(0xC); }
    static StageFunction negation() { return StageFunction(0x3); }
    static StageFunction constant(bool v) { return StageFunction(v ? 0xF : 0x0); }

    bool apply(bool input, bool output) const {
        return (table_ >> ((input ? 2 : 0) | (output ? 1 : 0))) & 1u;
    }
    bool ignores_output() const {
        return apply(false, false) == apply(false, true) &&
               apply(true, false) == apply(true, true);
    }
    std::uint8_t table() const { return table_; }

    bool operator==(const StageFunction&) const = default;

  private:
    std::uint8_t table_;
};

class FinalFunction {
  public:
    // Truth table over (protocol input, output history): bit index
    // input * 2^depth + history, where box 0's output is the history's most
    // significant bit.
    FinalFunction(int depth, std::vector<std::uint8_t> bits);

    static FinalFunction from_packed(int depth, std::uint64_t packed_bits);
    // c0 + c_input*x + sum c_outputs[k]*a_k over GF(2).
    static FinalFunction affine(int depth, bool c0, bool c_input,
                                const std::vector<bool>& c_outputs);
    static FinalFunction xor_of_outputs(int depth);

    bool apply(bool input, unsigned history) const;
    int depth() const { return depth_; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }
    bool ignores_input() const;

    bool operator==(const FinalFunction&) const = default;

  private:
    int depth_;
    std::vector<std::uint8_t> bits_;
};

struct PartyWiring {
    std::vector<StageFunction> stages; // depth - 1 of them
    FinalFunction final;

    bool operator==(const PartyWiring&) const = default;
};

struct WiringProtocol {
    int depth = 1;
    PartyWiring a, b, c;

    bool is_non_adaptive() const;

    bool operator==(const WiringProtocol&) const = default;
};

struct DomainWitness {
    std::uint8_t protocol_input; // row that starts the offending history
    std::vector<std::uint8_t> outputs; // output triple per completed box
    std::size_t box_index;             // box whose input left the domain
    std::uint8_t offending_input;
};

struct DomainCheck {
    bool ok = true;
    std::optional<DomainWitness> witness;
};

// Deterministic forward simulation of every protocol input in the domain
// against every output history; no probabilities involved.
DomainCheck check_domain_preservation(const WiringProtocol& protocol, InputDomain domain);

// Distribution the wiring induces on the final outputs. The resulting box
// has box 0's domain. Every reachable intermediate input must stay inside
// the owning box's domain or the call fails with REJECTED_INPUT.
TripartiteBox wire(const WiringProtocol& protocol, const std::vector<TripartiteBox>& boxes);

// Permissive variant for studying protocols that leave the domain: the
// offending history's weight is parked per-row instead of being assigned to
// any output, so rows may sum to less than one.
struct SubnormalizedBox {
    InputDomain domain;
    std::vector<TripartiteBox::Row> rows;
    std::vector<Rational> sink; // unassigned weight per row
};

SubnormalizedBox wire_permissive(const WiringProtocol& protocol,
                                 const std::vector<TripartiteBox>& boxes);

// Correlator sums over the surviving weight only (sunk weight contributes
// zero); completions use the lexicographically smallest matching row.
Rational permissive_correlator(const SubnormalizedBox& box, std::uint8_t parties,
                               std::uint8_t settings);

// n-fold parity repetition: every box sees the protocol input and each
// party announces the XOR of its outputs.
WiringProtocol protocol_ndp(int depth);

// Two-box parity protocol with per-party negations and the symmetric
// input toggle t (t adds x^y^z to the total output parity, which vanishes
// on even-parity inputs, so values never depend on it). With all flags
// clear, Alice's final carries the one fixed negation.
struct ParityProtocolParams {
    bool s_a = false, s_b = false, s_c = false;
    bool t = false;
};

WiringProtocol protocol_parity_general(const ParityProtocolParams& params);

// The five two-copy protocols studied on noisy class boxes. Finals are the
// plain XOR of the two outputs; stages differ:
//   1: second box replays the protocol input
//   2: Bob adaptively sends y*b to his second box
//   3: Bob negates his second input
//   4: Bob pins his second input to 0
//   5: Alice negates, Bob pins to 0
WiringProtocol protocol_1();
WiringProtocol protocol_2();
WiringProtocol protocol_3();
WiringProtocol protocol_4();
WiringProtocol protocol_5();

WiringProtocol builtin_protocol(const std::string& name);

} // namespace nlb
