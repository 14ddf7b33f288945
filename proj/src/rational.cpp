#include "nlb/rational.hpp"

#include "nlb/error.hpp"

#include <cctype>
#include <cstdio>

namespace nlb {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::Range: return "RANGE";
    case ErrorCode::Weights: return "WEIGHTS";
    case ErrorCode::DomainMismatch: return "DOMAIN_MISMATCH";
    case ErrorCode::Domain: return "DOMAIN";
    case ErrorCode::DepthMismatch: return "DEPTH_MISMATCH";
    case ErrorCode::RejectedInput: return "REJECTED_INPUT";
    case ErrorCode::Arity: return "ARITY";
    case ErrorCode::Length: return "LENGTH";
    case ErrorCode::Samples: return "SAMPLES";
    case ErrorCode::Degree: return "DEGREE";
    case ErrorCode::Parse: return "PARSE";
    case ErrorCode::Completion: return "COMPLETION";
    }
    return "UNKNOWN";
}

Rational make_rational(long num, long den) {
    if (den == 0) fail(ErrorCode::Range, "zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

} // namespace

Rational parse_rational(const std::string& text) {
    std::string s = text;
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        negative = s[0] == '-';
        s = s.substr(1);
    }
    if (s.empty()) fail(ErrorCode::Parse, "empty number in '" + text + "'");

    std::string num;
    std::string den;
    auto slash = s.find('/');
    auto dot = s.find('.');
    if (slash != std::string::npos && dot != std::string::npos) {
        fail(ErrorCode::Parse, "mixed '/' and '.' in '" + text + "'");
    }
    if (slash != std::string::npos) {
        num = s.substr(0, slash);
        den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) {
            fail(ErrorCode::Parse, "bad rational '" + text + "'");
        }
    } else if (dot != std::string::npos) {
        std::string whole = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        if (whole.empty()) whole = "0";
        if (frac.empty()) frac = "0";
        if (!all_digits(whole) || !all_digits(frac)) {
            fail(ErrorCode::Parse, "bad decimal '" + text + "'");
        }
        num = whole + frac;
        den = "1" + std::string(frac.size(), '0');
    } else {
        if (!all_digits(s)) fail(ErrorCode::Parse, "bad integer '" + text + "'");
        num = s;
        den = "1";
    }

    Integer n(num, 10);
    Integer d(den, 10);
    if (d == 0) fail(ErrorCode::Parse, "zero denominator in '" + text + "'");
    if (negative) n = -n;
    Rational r(n, d);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& value) {
    return value.get_str();
}

std::string to_float_string(const Rational& value, int significant_digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, value.get_d());
    return buf;
}

Rational pow_rational(const Rational& base, unsigned exponent) {
    Rational acc(1);
    Rational b = base;
    unsigned e = exponent;
    while (e > 0) {
        if (e & 1u) acc *= b;
        b *= b;
        e >>= 1u;
    }
    return acc;
}

Rational abs_rational(const Rational& value) {
    return value < 0 ? Rational(-value) : value;
}

} // namespace nlb
