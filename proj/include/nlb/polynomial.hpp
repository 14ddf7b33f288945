#pragma once

#include "nlb/rational.hpp"

#include <string>
#include <vector>

namespace nlb {

// Dense univariate polynomial with exact rational coefficients, ascending
// powers, trailing zeros trimmed. The variable is the noise parameter delta
// in most uses, hence the display name.
class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> coeffs);

    static Polynomial constant(const Rational& value);

    const std::vector<Rational>& coeffs() const { return coeffs_; }
    // Degree of the zero polynomial is -1.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    Rational coeff(std::size_t power) const;

    Rational eval(const Rational& x) const;
    Polynomial derivative() const;

    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator-(const Polynomial& other) const;
    Polynomial operator*(const Polynomial& other) const;
    bool operator==(const Polynomial& other) const = default;

  private:
    void trim();
    std::vector<Rational> coeffs_;
};

std::string to_string(const Polynomial& poly, const std::string& var = "d");

// Unique interpolating polynomial of degree < points.size(); the sample
// abscissae must be pairwise distinct.
Polynomial lagrange_interpolate(const std::vector<std::pair<Rational, Rational>>& points);

// An interval endpoint. Rational endpoints are exact; an irrational root is
// carried as a tight rational enclosure (width below 2^-80) around it, with
// `exact` cleared.
struct RegionEndpoint {
    Rational value;
    bool exact = true;
};

struct RegionInterval {
    RegionEndpoint lo;
    RegionEndpoint hi;
    bool lo_open = true;
    bool hi_open = true;
};

// Subset of (0, 1] where one value polynomial strictly exceeds another,
// as maximal disjoint intervals in ascending order.
struct DistillationRegion {
    std::vector<RegionInterval> intervals;

    bool empty() const { return intervals.empty(); }
    // Total length; uses the enclosure midpoints for inexact endpoints.
    Rational area() const;
    bool fully_exact() const;
};

std::string to_string(const DistillationRegion& region);

// Solves vprime(d) > v(d) on (0, 1]. The difference may have degree at most
// 3; quadratics are solved in closed form (rational roots exactly, others as
// enclosures) and cubics additionally try rational-root deflation first.
DistillationRegion distillation_region(const Polynomial& vprime, const Polynomial& v);

// Supremum of vprime - v over (0, 1], exact for differences of degree <= 2.
// Intended for ranking search results, not as a certified bound.
Rational max_difference_on_unit(const Polynomial& vprime, const Polynomial& v);

} // namespace nlb
