#pragma once

// Data emission for the two plots the closed forms describe: the (eps,
// delta) region where one round of depth-2 parity distillation helps two
// noisy GHZ copies (V = eps - 3*delta against V' = eps^2 - 3*delta^2), and
// the value curves of the five class-box protocols against the single-box
// baseline. Output is CSV with LF line endings and deterministic formatting,
// rational strings by default.

#include "nlb/rational.hpp"

#include <string>

namespace nlb {

enum class CurveTarget { GhzDepth2Region, ClassProtocolCurves };

struct RationalInterval {
    Rational lo;
    Rational hi;
};

struct CurveSpec {
    CurveTarget target = CurveTarget::ClassProtocolCurves;
    // Grid points per axis, endpoints included.
    int resolution = 33;
    // GhzDepth2Region axes; both must sit inside [-1, 1].
    RationalInterval eps_range{Rational(-1), Rational(1)};
    RationalInterval ghz_delta_range{Rational(-1), Rational(1)};
    // ClassProtocolCurves axis; must sit inside [0, 1].
    RationalInterval delta_range{Rational(0), Rational(1)};
    // Compare |V'| > |V| instead of V' > V in the distills column.
    bool absolute = false;
    // Render floats (12 significant digits) instead of rational strings.
    bool float_output = false;
};

// The CSV document for the requested target; Range on malformed parameters.
// The class-protocol values come from wiring the built-in protocols, not
// from transcribed formulas.
std::string curve_emit(const CurveSpec& spec);

} // namespace nlb
