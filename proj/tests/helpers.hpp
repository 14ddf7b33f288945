// Shared generators for the randomized suites. Everything is seeded
// explicitly so failures reproduce.
#pragma once

#include "nlb/box.hpp"
#include "nlb/wiring.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace nlb::testing {

inline Rational random_rational(std::mt19937& gen, int max_den = 12) {
    std::uniform_int_distribution<int> den_dist(1, max_den);
    int den = den_dist(gen);
    std::uniform_int_distribution<int> num_dist(-den, den);
    return make_rational(num_dist(gen), den);
}

// Nonnegative rationals summing to one.
inline std::vector<Rational> random_weights(std::mt19937& gen, std::size_t count) {
    std::uniform_int_distribution<int> dist(0, 8);
    std::vector<long> raw(count);
    long total = 0;
    for (auto& v : raw) {
        v = dist(gen);
        total += v;
    }
    if (total == 0) {
        raw[0] = 1;
        total = 1;
    }
    std::vector<Rational> weights;
    weights.reserve(count);
    for (long v : raw) weights.push_back(make_rational(v, total));
    return weights;
}

inline LocalVertexParams random_vertex_params(std::mt19937& gen) {
    std::uniform_int_distribution<int> bit(0, 1);
    LocalVertexParams p;
    p.i = bit(gen);
    p.k = bit(gen);
    p.m = bit(gen);
    p.n = bit(gen);
    p.s = bit(gen);
    p.t = bit(gen);
    return p;
}

// Full-domain no-signaling box: a random convex mixture of local vertices
// and one extremal class box, so nonlocal components appear regularly.
inline TripartiteBox random_ns_box(std::mt19937& gen) {
    std::vector<TripartiteBox> parts;
    for (int i = 0; i < 4; ++i) parts.push_back(local_vertex(random_vertex_params(gen)));
    std::uniform_int_distribution<int> cls(44, 46);
    parts.push_back(box_from_parity_poly(class_parity_poly(parse_class_id(cls(gen))),
                                         InputDomain{DomainKind::Full}));
    return mix(random_weights(gen, parts.size()), parts);
}

inline WiringProtocol random_protocol(std::mt19937& gen, int depth, bool adaptive) {
    std::uniform_int_distribution<int> stage_dist(0, 15);
    std::uniform_int_distribution<std::uint64_t> final_dist(0, (1ull << (2u << depth)) - 1);
    const std::uint8_t non_adaptive[4] = {0x0, 0x3, 0xC, 0xF};
    std::uniform_int_distribution<int> na_dist(0, 3);
    auto make_party = [&] {
        std::vector<StageFunction> stages;
        for (int k = 0; k + 1 < depth; ++k) {
            std::uint8_t table = adaptive ? std::uint8_t(stage_dist(gen))
                                          : non_adaptive[na_dist(gen)];
            stages.push_back(StageFunction(table));
        }
        return PartyWiring{std::move(stages), FinalFunction::from_packed(depth, final_dist(gen))};
    };
    PartyWiring a = make_party();
    PartyWiring b = make_party();
    PartyWiring c = make_party();
    return WiringProtocol{depth, std::move(a), std::move(b), std::move(c)};
}

} // namespace nlb::testing
