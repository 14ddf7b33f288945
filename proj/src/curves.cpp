#include "nlb/curves.hpp"

#include "nlb/error.hpp"
#include "nlb/inequality.hpp"
#include "nlb/search.hpp"
#include "nlb/wiring.hpp"

#include <array>
#include <vector>

namespace nlb {

namespace {

std::vector<Rational> grid(const RationalInterval& range, int resolution) {
    std::vector<Rational> points;
    points.reserve(std::size_t(resolution));
    Rational span = range.hi - range.lo;
    for (int i = 0; i < resolution; ++i) {
        points.push_back(Rational(range.lo + span * make_rational(i, resolution - 1)));
    }
    return points;
}

void check_interval(const RationalInterval& range, const Rational& lo, const Rational& hi,
                    const char* what) {
    if (range.lo >= range.hi || range.lo < lo || range.hi > hi) {
        fail(ErrorCode::Range, std::string(what) + " range");
    }
}

std::string render(const Rational& value, bool float_output) {
    return float_output ? to_float_string(value) : to_string(value);
}

std::string ghz_csv(const CurveSpec& spec) {
    check_interval(spec.eps_range, Rational(-1), Rational(1), "eps");
    check_interval(spec.ghz_delta_range, Rational(-1), Rational(1), "delta");
    std::string out = "eps,delta,v,vprime,distills\n";
    for (const Rational& eps : grid(spec.eps_range, spec.resolution)) {
        for (const Rational& delta : grid(spec.ghz_delta_range, spec.resolution)) {
            Rational v = eps - 3 * delta;
            Rational vprime = eps * eps - 3 * delta * delta;
            bool distills = spec.absolute ? abs_rational(vprime) > abs_rational(v) : vprime > v;
            out += render(eps, spec.float_output);
            out += ',';
            out += render(delta, spec.float_output);
            out += ',';
            out += render(v, spec.float_output);
            out += ',';
            out += render(vprime, spec.float_output);
            out += ',';
            out += distills ? "true" : "false";
            out += '\n';
        }
    }
    return out;
}

std::string class_csv(const CurveSpec& spec) {
    check_interval(spec.delta_range, Rational(0), Rational(1), "delta");
    struct Pair {
        const char* column;
        const char* protocol;
        ClassId cls;
    };
    // Protocol 1 evaluates identically on all three classes; protocol 2
    // differs per class; protocols 3-5 target one class each.
    const std::array<Pair, 7> pairs = {{{"p1", "protocol-1", ClassId::C44},
                                        {"p2_c44", "protocol-2", ClassId::C44},
                                        {"p2_c45", "protocol-2", ClassId::C45},
                                        {"p2_c46", "protocol-2", ClassId::C46},
                                        {"p3_c44", "protocol-3", ClassId::C44},
                                        {"p4_c45", "protocol-4", ClassId::C45},
                                        {"p5_c46", "protocol-5", ClassId::C46}}};
    BellInequality ineq = class41_inequality();
    auto family = [](const Rational& delta) { return noisy_class_box(ClassId::C44, delta); };
    Polynomial baseline = value_poly_in_delta(family, ineq, 2);
    std::array<Polynomial, 7> curves;
    std::string header = "delta,baseline";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        curves[i] = protocol_value_poly(builtin_protocol(pairs[i].protocol), pairs[i].cls, ineq);
        header += ',';
        header += pairs[i].column;
    }
    std::string out = header + "\n";
    for (const Rational& delta : grid(spec.delta_range, spec.resolution)) {
        out += render(delta, spec.float_output);
        out += ',';
        out += render(baseline.eval(delta), spec.float_output);
        for (const Polynomial& curve : curves) {
            out += ',';
            out += render(curve.eval(delta), spec.float_output);
        }
        out += '\n';
    }
    return out;
}

} // namespace

std::string curve_emit(const CurveSpec& spec) {
    if (spec.resolution < 2) fail(ErrorCode::Range, "resolution must be at least 2");
    return spec.target == CurveTarget::GhzDepth2Region ? ghz_csv(spec) : class_csv(spec);
}

} // namespace nlb
