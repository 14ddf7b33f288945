#include "nlb/gf2poly.hpp"

#include "nlb/error.hpp"

#include <bit>

namespace nlb {

Gf2Poly3 Gf2Poly3::from_truth_table(std::uint8_t table) {
    // Moebius transform over the subset lattice of {x, y, z}: coefficient of
    // monomial m is the XOR of the table over all rows r with r subset of m.
    std::uint8_t coeffs = 0;
    for (std::uint8_t m = 0; m < 8; ++m) {
        bool c = false;
        for (std::uint8_t r = 0; r < 8; ++r) {
            if ((r & ~m) == 0) c ^= (table >> r) & 1u;
        }
        if (c) coeffs |= std::uint8_t(1u << m);
    }
    return Gf2Poly3(coeffs);
}

bool Gf2Poly3::eval_row(std::uint8_t row) const {
    // Monomial m evaluates to 1 exactly when every variable it mentions is
    // set in the row, i.e. m is a subset of the row bits.
    bool v = false;
    for (std::uint8_t m = 0; m < 8; ++m) {
        if (coefficient(m) && (m & ~row) == 0) v = !v;
    }
    return v;
}

bool Gf2Poly3::eval(bool x, bool y, bool z) const {
    return eval_row(static_cast<std::uint8_t>((x ? 4 : 0) | (y ? 2 : 0) | (z ? 1 : 0)));
}

std::uint8_t Gf2Poly3::truth_table() const {
    std::uint8_t table = 0;
    for (std::uint8_t r = 0; r < 8; ++r) {
        if (eval_row(r)) table |= std::uint8_t(1u << r);
    }
    return table;
}

int Gf2Poly3::degree() const {
    int deg = -1;
    for (std::uint8_t m = 0; m < 8; ++m) {
        if (coefficient(m)) deg = std::max(deg, std::popcount(m));
    }
    return deg;
}

Gf2Poly3 parse_gf2_poly(const std::string& text) {
    if (text.empty()) fail(ErrorCode::Parse, "empty polynomial");
    std::uint8_t coeffs = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto next = text.find('+', pos);
        std::string term = text.substr(pos, next == std::string::npos ? std::string::npos
                                                                      : next - pos);
        if (term.empty()) fail(ErrorCode::Parse, "empty term in '" + text + "'");
        std::uint8_t mask = 0;
        if (term == "0") {
            // contributes nothing
        } else if (term == "1") {
            coeffs ^= 1u;
        } else {
            for (char c : term) {
                std::uint8_t bit;
                switch (c) {
                case 'x': bit = 4; break;
                case 'y': bit = 2; break;
                case 'z': bit = 1; break;
                default:
                    fail(ErrorCode::Parse,
                         std::string("unexpected character '") + c + "' in '" + text + "'");
                }
                if (mask & bit) fail(ErrorCode::Parse, "repeated variable in '" + term + "'");
                mask |= bit;
            }
            coeffs ^= std::uint8_t(1u << mask);
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return Gf2Poly3(coeffs);
}

std::string to_string(const Gf2Poly3& poly) {
    if (poly.coefficient_mask() == 0) return "0";
    static const char* names[8] = {"1", "z", "y", "yz", "x", "xz", "xy", "xyz"};
    // List by ascending degree, then by variable order x < y < z.
    static const std::uint8_t order[8] = {0, 4, 2, 1, 6, 5, 3, 7};
    std::string out;
    for (std::uint8_t m : order) {
        if (!poly.coefficient(m)) continue;
        if (!out.empty()) out += '+';
        out += names[m];
    }
    return out;
}

} // namespace nlb
