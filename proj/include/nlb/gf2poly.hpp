#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace nlb {

// Polynomial over GF(2) in the three input bits (x, y, z). Coefficients are
// indexed by monomial mask m: bit 2 of m selects x, bit 1 selects y, bit 0
// selects z, so m = 0 is the constant term and m = 7 is xyz. That matches
// the input-row index used throughout (row = x*4 + y*2 + z).
class Gf2Poly3 {
  public:
    Gf2Poly3() = default;
    explicit Gf2Poly3(std::uint8_t coefficient_mask) : coeffs_(coefficient_mask) {}

    static Gf2Poly3 zero() { return Gf2Poly3(0); }
    static Gf2Poly3 one() { return Gf2Poly3(1); }

    // Moebius transform of a truth table: bit r of `table` is the value at
    // input row r. Inverse of truth_table().
    static Gf2Poly3 from_truth_table(std::uint8_t table);

    bool coefficient(std::uint8_t monomial_mask) const {
        return (coeffs_ >> monomial_mask) & 1u;
    }
    std::uint8_t coefficient_mask() const { return coeffs_; }

    bool eval(bool x, bool y, bool z) const;
    bool eval_row(std::uint8_t row) const;
    std::uint8_t truth_table() const;

    int degree() const; // -1 for the zero polynomial

    Gf2Poly3 operator+(const Gf2Poly3& other) const {
        return Gf2Poly3(coeffs_ ^ other.coeffs_);
    }
    bool operator==(const Gf2Poly3& other) const = default;

  private:
    std::uint8_t coeffs_ = 0;
};

// Text form: monomials joined by '+', e.g. "xy+yz+xz", "x+y+z+xy+xz+yz+xyz",
// "1+xyz", "0". Variables within a monomial may appear in any order.
Gf2Poly3 parse_gf2_poly(const std::string& text);
std::string to_string(const Gf2Poly3& poly);

} // namespace nlb
