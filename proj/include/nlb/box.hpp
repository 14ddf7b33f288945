#pragma once

#include "nlb/gf2poly.hpp"
#include "nlb/rational.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace nlb {

// Input rows and output columns are both encoded as 3-bit values with the
// party order (A, B, C): row = x*4 + y*2 + z, column = a*4 + b*2 + c.
// The even-parity domain keeps the fixed row order 000, 011, 101, 110.
enum class DomainKind : std::uint8_t { Full, EvenParity };

struct InputDomain {
    DomainKind kind = DomainKind::Full;

    const std::vector<std::uint8_t>& rows() const;
    std::size_t row_count() const { return rows().size(); }
    bool contains(std::uint8_t row) const;
    // Position of a row inside rows(); the row must be in the domain.
    std::size_t index_of(std::uint8_t row) const;

    bool operator==(const InputDomain&) const = default;
};

std::string to_string(DomainKind kind);
DomainKind parse_domain_kind(const std::string& text);

inline std::uint8_t row_parity(std::uint8_t bits) {
    return static_cast<std::uint8_t>(((bits >> 2) ^ (bits >> 1) ^ bits) & 1u);
}

std::string bits3_to_string(std::uint8_t bits);
std::uint8_t parse_bits3(const std::string& text);

// Conditional distribution table P(abc|xyz) over the domain's rows. The
// constructor stores whatever table it is given; validate() is the gate
// that decides whether it is an actual no-signaling box.
class TripartiteBox {
  public:
    using Row = std::array<Rational, 8>;

    TripartiteBox(InputDomain domain, std::vector<Row> rows);

    const InputDomain& domain() const { return domain_; }
    const Row& row(std::uint8_t input_bits) const;
    const Rational& prob(std::uint8_t input_bits, std::uint8_t output_bits) const {
        return row(input_bits)[output_bits];
    }
    const std::vector<Row>& rows() const { return rows_; }

    bool operator==(const TripartiteBox& other) const {
        return domain_ == other.domain_ && rows_ == other.rows_;
    }

  private:
    InputDomain domain_;
    std::vector<Row> rows_; // aligned with domain_.rows()
};

struct NoiseParams {
    Rational eps;   // correlation bias on input row 000
    Rational delta; // correlation bias on the other rows
};

// Deterministic box a = ix+k, b = my+n, c = sz+t over GF(2).
struct LocalVertexParams {
    bool i = false, k = false;
    bool m = false, n = false;
    bool s = false, t = false;
};

enum class ClassId : int { C44 = 44, C45 = 45, C46 = 46 };

ClassId parse_class_id(int value);
Gf2Poly3 class_parity_poly(ClassId cls);

// The box enforcing a^b^c = f(x,y,z): probability 1/4 on the four output
// columns of the target parity, 0 elsewhere.
TripartiteBox box_from_parity_poly(const Gf2Poly3& poly, InputDomain domain);

// GHZ correlations: outputs satisfy a^b^c = 0 on input 000 and a^b^c = 1 on
// every other row of the domain.
TripartiteBox ghz_box(InputDomain domain);

// Even-parity box with rows (1 +/- eps)/8 on input 000 and (1 +/- delta)/8
// elsewhere, the + sign on even-parity output columns. Requires
// eps, delta in [-1, 1]; ghz_box(EvenParity) is the (1, -1) corner.
TripartiteBox noisy_ghz(const NoiseParams& noise);

// delta * P^cls + (1 - delta) * P^c on the full domain, delta in [0, 1].
TripartiteBox noisy_class_box(ClassId cls, const Rational& delta);

TripartiteBox local_vertex(const LocalVertexParams& params);

// Convex combination; all components must share a domain and the weights
// must be nonnegative and sum to one (a single weight-1 component is fine).
TripartiteBox mix(const std::vector<Rational>& weights,
                  const std::vector<TripartiteBox>& components);

// Keep only the target domain's rows; the target must be a subset of the
// box's current domain.
TripartiteBox restrict_domain(const TripartiteBox& box, InputDomain target);

enum class ViolationKind { Positivity, Normalization, NoSignaling };

struct Violation {
    ViolationKind kind;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Exact checks: entries in [0, 1], each row sums to 1, and marginals do not
// depend on the other parties' inputs. On the full domain that is the usual
// two-party-marginal comparison across single-input flips; on the
// even-parity domain single-input flips leave the domain, so the check is
// that each party's one-party marginal is constant across the domain rows
// that share that party's input.
ValidationReport validate(const TripartiteBox& box);

std::string to_string(const ValidationReport& report);

} // namespace nlb
