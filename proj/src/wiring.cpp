#include "nlb/wiring.hpp"

#include "nlb/error.hpp"

#include <bit>

namespace nlb {

FinalFunction::FinalFunction(int depth, std::vector<std::uint8_t> bits)
    : depth_(depth), bits_(std::move(bits)) {
    if (depth_ < 1 || depth_ > 20) fail(ErrorCode::Range, "final function depth");
    if (bits_.size() != (std::size_t(1) << (depth_ + 1))) {
        fail(ErrorCode::Length, "final function table size");
    }
    for (auto b : bits_) {
        if (b > 1) fail(ErrorCode::Parse, "final function entries must be bits");
    }
}

FinalFunction FinalFunction::from_packed(int depth, std::uint64_t packed_bits) {
    if (depth < 1 || depth > 5) fail(ErrorCode::Range, "packed final depth");
    std::vector<std::uint8_t> bits(std::size_t(1) << (depth + 1));
    for (std::size_t i = 0; i < bits.size(); ++i) {
        bits[i] = (packed_bits >> i) & 1u;
    }
    return FinalFunction(depth, std::move(bits));
}

FinalFunction FinalFunction::affine(int depth, bool c0, bool c_input,
                                    const std::vector<bool>& c_outputs) {
    if (static_cast<int>(c_outputs.size()) != depth) {
        fail(ErrorCode::Length, "one output coefficient per box");
    }
    std::vector<std::uint8_t> bits(std::size_t(1) << (depth + 1));
    for (std::size_t idx = 0; idx < bits.size(); ++idx) {
        bool input = (idx >> depth) & 1u;
        bool v = c0;
        if (c_input && input) v = !v;
        for (int k = 0; k < depth; ++k) {
            // Box k's output is history bit depth-1-k (box 0 most significant).
            bool out = (idx >> (depth - 1 - k)) & 1u;
            if (c_outputs[static_cast<std::size_t>(k)] && out) v = !v;
        }
        bits[idx] = v;
    }
    return FinalFunction(depth, std::move(bits));
}

FinalFunction FinalFunction::xor_of_outputs(int depth) {
    return affine(depth, false, false, std::vector<bool>(static_cast<std::size_t>(depth), true));
}

bool FinalFunction::apply(bool input, unsigned history) const {
    std::size_t idx = (static_cast<std::size_t>(input) << depth_) | history;
    return bits_[idx];
}

bool FinalFunction::ignores_input() const {
    std::size_t half = bits_.size() / 2;
    for (std::size_t i = 0; i < half; ++i) {
        if (bits_[i] != bits_[i + half]) return false;
    }
    return true;
}

bool WiringProtocol::is_non_adaptive() const {
    for (const PartyWiring* p : {&a, &b, &c}) {
        for (const auto& stage : p->stages) {
            if (!stage.ignores_output()) return false;
        }
    }
    return true;
}

namespace {

void require_shape(const WiringProtocol& protocol) {
    for (const PartyWiring* p : {&protocol.a, &protocol.b, &protocol.c}) {
        if (static_cast<int>(p->stages.size()) != protocol.depth - 1) {
            fail(ErrorCode::DepthMismatch, "expected " + std::to_string(protocol.depth - 1) +
                                               " stages per party");
        }
        if (p->final.depth() != protocol.depth) {
            fail(ErrorCode::DepthMismatch, "final function depth mismatch");
        }
    }
}

std::uint8_t next_input_row(const WiringProtocol& protocol, std::size_t stage,
                            std::uint8_t row, std::uint8_t out) {
    bool x2 = protocol.a.stages[stage].apply(row & 4, out & 4);
    bool y2 = protocol.b.stages[stage].apply(row & 2, out & 2);
    bool z2 = protocol.c.stages[stage].apply(row & 1, out & 1);
    return static_cast<std::uint8_t>((x2 ? 4 : 0) | (y2 ? 2 : 0) | (z2 ? 1 : 0));
}

std::uint8_t final_outputs(const WiringProtocol& protocol, std::uint8_t protocol_row,
                           unsigned hist_a, unsigned hist_b, unsigned hist_c) {
    bool a = protocol.a.final.apply(protocol_row & 4, hist_a);
    bool b = protocol.b.final.apply(protocol_row & 2, hist_b);
    bool c = protocol.c.final.apply(protocol_row & 1, hist_c);
    return static_cast<std::uint8_t>((a ? 4 : 0) | (b ? 2 : 0) | (c ? 1 : 0));
}

} // namespace

namespace {

// Walks every output history; inputs evolve deterministically from outputs,
// so probabilities play no role here.
bool domain_dfs(const WiringProtocol& protocol, InputDomain domain, std::uint8_t start,
                std::size_t k, std::uint8_t row, std::vector<std::uint8_t>& outs,
                DomainCheck& check) {
    if (!domain.contains(row)) {
        check.ok = false;
        check.witness = DomainWitness{start, outs, k, row};
        return false;
    }
    if (k + 1 == static_cast<std::size_t>(protocol.depth)) return true;
    for (std::uint8_t out = 0; out < 8; ++out) {
        outs.push_back(out);
        std::uint8_t next = next_input_row(protocol, k, row, out);
        bool ok = domain_dfs(protocol, domain, start, k + 1, next, outs, check);
        outs.pop_back();
        if (!ok) return false;
    }
    return true;
}

} // namespace

DomainCheck check_domain_preservation(const WiringProtocol& protocol, InputDomain domain) {
    require_shape(protocol);
    DomainCheck check;
    std::vector<std::uint8_t> outs;
    for (std::uint8_t start : domain.rows()) {
        if (!domain_dfs(protocol, domain, start, 0, start, outs, check)) break;
    }
    return check;
}

namespace {

struct WireAccumulator {
    std::vector<TripartiteBox::Row> rows;
    std::vector<Rational> sink;
};

// Shared enumeration over weighted histories. `permissive` parks weight of
// out-of-domain branches in the sink; otherwise the caller has already
// verified the domain and zero-weight branches are simply skipped.
void accumulate(const WiringProtocol& protocol, const std::vector<TripartiteBox>& boxes,
                bool permissive, std::size_t row_index, std::uint8_t protocol_row,
                std::size_t k, std::uint8_t row, const Rational& weight, unsigned hist_a,
                unsigned hist_b, unsigned hist_c, WireAccumulator& acc) {
    if (k == boxes.size()) {
        std::uint8_t out = final_outputs(protocol, protocol_row, hist_a, hist_b, hist_c);
        acc.rows[row_index][out] += weight;
        return;
    }
    const TripartiteBox& box = boxes[k];
    if (!box.domain().contains(row)) {
        if (permissive) {
            acc.sink[row_index] += weight;
            return;
        }
        fail(ErrorCode::RejectedInput,
             "box " + std::to_string(k) + " rejects input " + bits3_to_string(row));
    }
    for (std::uint8_t out = 0; out < 8; ++out) {
        const Rational& p = box.prob(row, out);
        if (p == 0) continue;
        Rational w = weight * p;
        unsigned ha = (hist_a << 1) | ((out >> 2) & 1u);
        unsigned hb = (hist_b << 1) | ((out >> 1) & 1u);
        unsigned hc = (hist_c << 1) | (out & 1u);
        std::uint8_t next = k + 1 < boxes.size() ? next_input_row(protocol, k, row, out) : 0;
        accumulate(protocol, boxes, permissive, row_index, protocol_row, k + 1, next, w,
                   ha, hb, hc, acc);
    }
}

WireAccumulator run_wiring(const WiringProtocol& protocol,
                           const std::vector<TripartiteBox>& boxes, bool permissive) {
    require_shape(protocol);
    if (boxes.size() != static_cast<std::size_t>(protocol.depth)) {
        fail(ErrorCode::DepthMismatch, "protocol depth " + std::to_string(protocol.depth) +
                                           " with " + std::to_string(boxes.size()) + " boxes");
    }
    const InputDomain& domain = boxes.front().domain();
    WireAccumulator acc;
    acc.rows.assign(domain.row_count(), {});
    for (auto& row : acc.rows) row.fill(Rational(0));
    acc.sink.assign(domain.row_count(), Rational(0));
    const auto& rows = domain.rows();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        accumulate(protocol, boxes, permissive, i, rows[i], 0, rows[i], Rational(1), 0, 0,
                   0, acc);
    }
    return acc;
}

} // namespace

TripartiteBox wire(const WiringProtocol& protocol, const std::vector<TripartiteBox>& boxes) {
    require_shape(protocol);
    if (boxes.size() != static_cast<std::size_t>(protocol.depth)) {
        fail(ErrorCode::DepthMismatch, "protocol depth " + std::to_string(protocol.depth) +
                                           " with " + std::to_string(boxes.size()) + " boxes");
    }
    // The reachability check walks every history, including zero-probability
    // ones, so rejection does not depend on the boxes' numeric entries.
    for (std::size_t k = 0; k < boxes.size(); ++k) {
        if (!(boxes[k].domain() == boxes.front().domain())) {
            // Mixed domains are legal as long as every reachable input lands
            // inside the owning box; the conservative check below covers the
            // common same-domain case, mixed cases are caught while wiring.
            break;
        }
    }
    auto check = check_domain_preservation(protocol, boxes.front().domain());
    if (!check.ok) {
        const auto& w = *check.witness;
        fail(ErrorCode::RejectedInput,
             "input " + bits3_to_string(w.protocol_input) + " with outputs history" +
                 [&] {
                     std::string s;
                     for (auto o : w.outputs) s += " " + bits3_to_string(o);
                     return s;
                 }() +
                 " drives box " + std::to_string(w.box_index) + " to " +
                 bits3_to_string(w.offending_input));
    }
    auto acc = run_wiring(protocol, boxes, false);
    return TripartiteBox(boxes.front().domain(), std::move(acc.rows));
}

SubnormalizedBox wire_permissive(const WiringProtocol& protocol,
                                 const std::vector<TripartiteBox>& boxes) {
    auto acc = run_wiring(protocol, boxes, true);
    return SubnormalizedBox{boxes.front().domain(), std::move(acc.rows), std::move(acc.sink)};
}

Rational permissive_correlator(const SubnormalizedBox& box, std::uint8_t parties,
                               std::uint8_t settings) {
    for (std::uint8_t row : box.domain.rows()) {
        if ((row & parties) != settings) continue;
        std::size_t idx = box.domain.index_of(row);
        Rational value(0);
        for (std::uint8_t out = 0; out < 8; ++out) {
            const Rational& p = box.rows[idx][out];
            if (p == 0) continue;
            bool minus = std::popcount(static_cast<unsigned>(out & parties)) % 2 == 1;
            if (minus) {
                value -= p;
            } else {
                value += p;
            }
        }
        return value;
    }
    fail(ErrorCode::Domain, "no domain row matches the requested settings");
}

WiringProtocol protocol_ndp(int depth) {
    if (depth < 1) fail(ErrorCode::Range, "depth must be positive");
    PartyWiring party{std::vector<StageFunction>(static_cast<std::size_t>(depth - 1),
                                                 StageFunction::identity()),
                      FinalFunction::xor_of_outputs(depth)};
    return WiringProtocol{depth, party, party, party};
}

WiringProtocol protocol_parity_general(const ParityProtocolParams& p) {
    std::vector<bool> both{true, true};
    PartyWiring a{{StageFunction::identity()},
                  FinalFunction::affine(2, !p.s_a, p.t, both)};
    PartyWiring b{{StageFunction::identity()}, FinalFunction::affine(2, p.s_b, p.t, both)};
    PartyWiring c{{StageFunction::identity()}, FinalFunction::affine(2, p.s_c, p.t, both)};
    return WiringProtocol{2, a, b, c};
}

namespace {

WiringProtocol two_copy_protocol(StageFunction a_stage, StageFunction b_stage,
                                 StageFunction c_stage) {
    FinalFunction xor2 = FinalFunction::xor_of_outputs(2);
    return WiringProtocol{2,
                          PartyWiring{{a_stage}, xor2},
                          PartyWiring{{b_stage}, xor2},
                          PartyWiring{{c_stage}, xor2}};
}

} // namespace

WiringProtocol protocol_1() {
    return two_copy_protocol(StageFunction::identity(), StageFunction::identity(),
                             StageFunction::identity());
}

WiringProtocol protocol_2() {
    // y2 = y1 * b1: table bit set only at (input, output) = (1, 1).
    return two_copy_protocol(StageFunction::identity(), StageFunction(0x8),
                             StageFunction::identity());
}

WiringProtocol protocol_3() {
    return two_copy_protocol(StageFunction::identity(), StageFunction::negation(),
                             StageFunction::identity());
}

WiringProtocol protocol_4() {
    return two_copy_protocol(StageFunction::identity(), StageFunction::constant(false),
                             StageFunction::identity());
}

WiringProtocol protocol_5() {
    return two_copy_protocol(StageFunction::negation(), StageFunction::constant(false),
                             StageFunction::identity());
}

WiringProtocol builtin_protocol(const std::string& name) {
    if (name == "protocol-1") return protocol_1();
    if (name == "protocol-2") return protocol_2();
    if (name == "protocol-3") return protocol_3();
    if (name == "protocol-4") return protocol_4();
    if (name == "protocol-5") return protocol_5();
    if (name.rfind("ndp", 0) == 0 && name.size() > 3) {
        int depth = 0;
        for (std::size_t i = 3; i < name.size(); ++i) {
            if (name[i] < '0' || name[i] > '9') fail(ErrorCode::Parse, "bad protocol name");
            depth = depth * 10 + (name[i] - '0');
        }
        return protocol_ndp(depth);
    }
    if (name.rfind("parity-", 0) == 0 && name.size() == 11) {
        ParityProtocolParams p;
        auto bit = [&](std::size_t i) {
            if (name[i] != '0' && name[i] != '1') fail(ErrorCode::Parse, "bad parity flags");
            return name[i] == '1';
        };
        p.s_a = bit(7);
        p.s_b = bit(8);
        p.s_c = bit(9);
        p.t = bit(10);
        return protocol_parity_general(p);
    }
    fail(ErrorCode::Parse,
         "unknown protocol '" + name +
             "' (try protocol-1..protocol-5, ndpN, parity-SaSbScT)");
}

} // namespace nlb
