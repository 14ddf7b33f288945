#include "nlb/polynomial.hpp"

#include "nlb/error.hpp"

#include <algorithm>

namespace nlb {

Polynomial::Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
    trim();
}

Polynomial Polynomial::constant(const Rational& value) {
    return Polynomial({value});
}

void Polynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational Polynomial::coeff(std::size_t power) const {
    return power < coeffs_.size() ? coeffs_[power] : Rational(0);
}

Rational Polynomial::eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

Polynomial Polynomial::derivative() const {
    std::vector<Rational> out;
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
        out.push_back(coeffs_[i] * Rational(static_cast<long>(i)));
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    std::vector<Rational> out(std::max(coeffs_.size(), other.coeffs_.size()), Rational(0));
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = coeff(i) + other.coeff(i);
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
    std::vector<Rational> out(std::max(coeffs_.size(), other.coeffs_.size()), Rational(0));
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = coeff(i) - other.coeff(i);
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    if (coeffs_.empty() || other.coeffs_.empty()) return Polynomial();
    std::vector<Rational> out(coeffs_.size() + other.coeffs_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < other.coeffs_.size(); ++j) {
            out[i + j] += coeffs_[i] * other.coeffs_[j];
        }
    }
    return Polynomial(std::move(out));
}

std::string to_string(const Polynomial& poly, const std::string& var) {
    if (poly.degree() < 0) return "0";
    std::string out;
    for (int p = poly.degree(); p >= 0; --p) {
        Rational c = poly.coeff(static_cast<std::size_t>(p));
        if (c == 0) continue;
        if (!out.empty()) {
            out += c > 0 ? " + " : " - ";
            c = abs_rational(c);
        } else if (c < 0) {
            out += "-";
            c = -c;
        }
        bool unit = c == 1 && p > 0;
        if (!unit) out += to_string(c);
        if (p > 0) {
            if (!unit) out += "*";
            out += var;
            if (p > 1) out += "^" + std::to_string(p);
        }
    }
    return out;
}

Polynomial lagrange_interpolate(const std::vector<std::pair<Rational, Rational>>& points) {
    if (points.empty()) fail(ErrorCode::Samples, "no interpolation points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (points[i].first == points[j].first) {
                fail(ErrorCode::Samples,
                     "repeated sample point " + to_string(points[i].first));
            }
        }
    }
    Polynomial result;
    for (std::size_t i = 0; i < points.size(); ++i) {
        Polynomial basis = Polynomial::constant(Rational(1));
        Rational denom(1);
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (j == i) continue;
            basis = basis * Polynomial({-points[j].first, Rational(1)});
            denom *= points[i].first - points[j].first;
        }
        result = result + basis * Polynomial::constant(points[i].second / denom);
    }
    return result;
}

Rational DistillationRegion::area() const {
    Rational total(0);
    for (const auto& iv : intervals) total += iv.hi.value - iv.lo.value;
    return total;
}

bool DistillationRegion::fully_exact() const {
    for (const auto& iv : intervals) {
        if (!iv.lo.exact || !iv.hi.exact) return false;
    }
    return true;
}

std::string to_string(const DistillationRegion& region) {
    if (region.empty()) return "empty";
    std::string out;
    for (const auto& iv : region.intervals) {
        if (!out.empty()) out += " u ";
        out += iv.lo_open ? "(" : "[";
        out += to_string(iv.lo.value);
        if (!iv.lo.exact) out += "~";
        out += ", ";
        out += to_string(iv.hi.value);
        if (!iv.hi.exact) out += "~";
        out += iv.hi_open ? ")" : "]";
    }
    return out;
}

namespace {

// Scale to integer coefficients (content not removed; sign preserved).
std::vector<Integer> integer_coeffs(const Polynomial& p) {
    Integer lcm(1);
    for (const auto& c : p.coeffs()) {
        Integer den = c.get_den();
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
    }
    std::vector<Integer> out;
    for (const auto& c : p.coeffs()) {
        out.push_back(Integer(c.get_num() * (lcm / c.get_den())));
    }
    return out;
}

int sign_of(const Rational& v) {
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

// Divisors of |n|, or empty when n is too large for trial division to be
// sensible; callers then fall back to enclosure roots.
std::vector<Integer> small_divisors(const Integer& n) {
    Integer a = abs(n);
    if (a == 0 || a > Integer(1000000000000L)) return {};
    std::vector<Integer> divs;
    for (Integer d(1); d * d <= a; ++d) {
        if (a % d == 0) {
            divs.push_back(d);
            divs.push_back(a / d);
        }
    }
    return divs;
}

// Synthetic division by (x - root); the division must be exact.
Polynomial deflate(const Polynomial& p, const Rational& root) {
    std::vector<Rational> out(static_cast<std::size_t>(p.degree()), Rational(0));
    Rational carry(0);
    for (int i = p.degree(); i >= 1; --i) {
        carry = p.coeff(static_cast<std::size_t>(i)) + carry * root;
        out[static_cast<std::size_t>(i - 1)] = carry;
    }
    return Polynomial(std::move(out));
}

// Number of sign variations of the Sturm chain at x.
int sturm_variations(const std::vector<Polynomial>& chain, const Rational& x) {
    int vars = 0;
    int prev = 0;
    for (const auto& p : chain) {
        int s = sign_of(p.eval(x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++vars;
        prev = s;
    }
    return vars;
}

std::vector<Polynomial> sturm_chain(const Polynomial& p) {
    std::vector<Polynomial> chain = {p, p.derivative()};
    while (chain.back().degree() > 0) {
        // Negated polynomial remainder of the last two entries.
        const Polynomial& a = chain[chain.size() - 2];
        const Polynomial& b = chain.back();
        Polynomial rem = a;
        while (rem.degree() >= b.degree() && rem.degree() >= 0 && b.degree() >= 0) {
            Rational factor =
                rem.coeff(static_cast<std::size_t>(rem.degree())) /
                b.coeff(static_cast<std::size_t>(b.degree()));
            std::vector<Rational> shift(
                static_cast<std::size_t>(rem.degree() - b.degree()) + 1, Rational(0));
            shift.back() = factor;
            rem = rem - b * Polynomial(std::move(shift));
        }
        if (rem.degree() < 0) break;
        std::vector<Rational> neg;
        for (const auto& c : rem.coeffs()) neg.push_back(-c);
        chain.push_back(Polynomial(std::move(neg)));
    }
    return chain;
}

// Shrink a bracket known to contain exactly one root until it is tighter
// than 2^-80. Signs at the bracket ends never agree.
RegionEndpoint bisect_root(const Polynomial& p, Rational lo, Rational hi) {
    const Rational width_target = pow_rational(make_rational(1, 2), 80);
    int sign_lo = sign_of(p.eval(lo));
    for (int iter = 0; iter < 300 && hi - lo > width_target; ++iter) {
        Rational mid = (lo + hi) / 2;
        int sm = sign_of(p.eval(mid));
        if (sm == 0) return {mid, true};
        if (sm == sign_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {(lo + hi) / 2, false};
}

// All real roots of p inside [lo, hi], ascending. Exact where the root is
// rational and discoverable (always for degree <= 2); enclosures otherwise.
std::vector<RegionEndpoint> roots_in_interval(const Polynomial& p, const Rational& lo,
                                              const Rational& hi);

std::vector<RegionEndpoint> quadratic_roots(const Polynomial& p, const Rational& lo,
                                            const Rational& hi) {
    std::vector<Integer> c = integer_coeffs(p); // c0 + c1 x + c2 x^2
    Integer disc = c[1] * c[1] - 4 * c[2] * c[0];
    std::vector<RegionEndpoint> roots;
    if (disc < 0) return roots;
    if (mpz_perfect_square_p(disc.get_mpz_t())) {
        Integer s;
        mpz_sqrt(s.get_mpz_t(), disc.get_mpz_t());
        Rational r1((-c[1] - s), 2 * c[2]);
        Rational r2((-c[1] + s), 2 * c[2]);
        r1.canonicalize();
        r2.canonicalize();
        if (r2 < r1) std::swap(r1, r2);
        if (r1 >= lo && r1 <= hi) roots.push_back({r1, true});
        if (r2 != r1 && r2 >= lo && r2 <= hi) roots.push_back({r2, true});
        return roots;
    }
    // Irrational pair: the vertex splits them into monotone halves.
    Rational vertex(-c[1], 2 * c[2]);
    vertex.canonicalize();
    auto scan = [&](Rational a, Rational b) {
        if (a >= b) return;
        int sa = sign_of(p.eval(a));
        int sb = sign_of(p.eval(b));
        if (sa == 0 || sb == 0) return; // endpoints are rational non-roots here
        if (sa != sb) roots.push_back(bisect_root(p, a, b));
    };
    if (vertex > lo && vertex < hi) {
        scan(lo, vertex);
        scan(vertex, hi);
    } else {
        scan(lo, hi);
    }
    return roots;
}

std::vector<RegionEndpoint> cubic_roots(const Polynomial& p, const Rational& lo,
                                        const Rational& hi) {
    std::vector<Integer> c = integer_coeffs(p);
    // Rational root p/q needs p | c0 and q | c3; a zero constant term means
    // x = 0 divides out directly.
    if (c[0] == 0) {
        std::vector<RegionEndpoint> roots;
        if (lo <= 0 && 0 <= hi) roots.push_back({Rational(0), true});
        Polynomial rest = deflate(p, Rational(0));
        for (auto& r : roots_in_interval(rest, lo, hi)) {
            if (!(r.exact && r.value == 0)) roots.push_back(r);
        }
        std::sort(roots.begin(), roots.end(),
                  [](const RegionEndpoint& a, const RegionEndpoint& b) {
                      return a.value < b.value;
                  });
        return roots;
    }
    auto nums = small_divisors(c[0]);
    auto dens = small_divisors(c[3]);
    for (const auto& n : nums) {
        for (const auto& d : dens) {
            for (int sign = -1; sign <= 1; sign += 2) {
                Rational candidate(sign * n, d);
                candidate.canonicalize();
                if (p.eval(candidate) != 0) continue;
                Polynomial rest = deflate(p, candidate);
                std::vector<RegionEndpoint> roots;
                if (candidate >= lo && candidate <= hi) {
                    roots.push_back({candidate, true});
                }
                for (auto& r : roots_in_interval(rest, lo, hi)) {
                    if (!(r.exact && r.value == candidate)) roots.push_back(r);
                }
                std::sort(roots.begin(), roots.end(),
                          [](const RegionEndpoint& a, const RegionEndpoint& b) {
                              return a.value < b.value;
                          });
                return roots;
            }
        }
    }
    // No rational root: isolate with a Sturm chain, then bisect.
    std::vector<RegionEndpoint> roots;
    auto chain = sturm_chain(p);
    struct Span {
        Rational a, b;
        int count;
    };
    std::vector<Span> work;
    int total = sturm_variations(chain, lo) - sturm_variations(chain, hi);
    if (total > 0) work.push_back({lo, hi, total});
    while (!work.empty()) {
        Span span = work.back();
        work.pop_back();
        if (span.count == 1) {
            roots.push_back(bisect_root(p, span.a, span.b));
            continue;
        }
        Rational mid = (span.a + span.b) / 2;
        while (p.eval(mid) == 0) {
            // A rational midpoint hit would have been found above; nudge
            // defensively anyway.
            mid = (span.a + mid) / 2;
        }
        int left = sturm_variations(chain, span.a) - sturm_variations(chain, mid);
        if (left > 0) work.push_back({span.a, mid, left});
        if (span.count - left > 0) work.push_back({mid, span.b, span.count - left});
    }
    std::sort(roots.begin(), roots.end(),
              [](const RegionEndpoint& a, const RegionEndpoint& b) {
                  return a.value < b.value;
              });
    return roots;
}

std::vector<RegionEndpoint> roots_in_interval(const Polynomial& p, const Rational& lo,
                                              const Rational& hi) {
    switch (p.degree()) {
    case -1:
    case 0: return {};
    case 1: {
        Rational r = -p.coeff(0) / p.coeff(1);
        if (r >= lo && r <= hi) return {{r, true}};
        return {};
    }
    case 2: return quadratic_roots(p, lo, hi);
    case 3: return cubic_roots(p, lo, hi);
    default:
        fail(ErrorCode::Degree,
             "degree " + std::to_string(p.degree()) + " difference not supported");
    }
}

} // namespace

DistillationRegion distillation_region(const Polynomial& vprime, const Polynomial& v) {
    Polynomial d = vprime - v;
    DistillationRegion region;
    if (d.degree() < 0) return region; // identical polynomials never distill
    if (d.degree() == 0) {
        if (d.coeff(0) > 0) {
            region.intervals.push_back(
                {{Rational(0), true}, {Rational(1), true}, true, false});
        }
        return region;
    }

    auto roots = roots_in_interval(d, Rational(0), Rational(1));
    std::vector<RegionEndpoint> bounds;
    bounds.push_back({Rational(0), true});
    for (auto& r : roots) {
        if (r.value > 0 && r.value < 1) bounds.push_back(r);
    }
    bounds.push_back({Rational(1), true});

    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        Rational sample = (bounds[i].value + bounds[i + 1].value) / 2;
        if (sign_of(d.eval(sample)) <= 0) continue;
        RegionInterval iv;
        iv.lo = bounds[i];
        iv.hi = bounds[i + 1];
        iv.lo_open = true;
        // The right end of (0, 1] is included exactly when no root sits
        // there; interior interval ends are roots and stay open.
        iv.hi_open = !(i + 2 == bounds.size() && sign_of(d.eval(Rational(1))) > 0);
        region.intervals.push_back(std::move(iv));
    }
    return region;
}

Rational max_difference_on_unit(const Polynomial& vprime, const Polynomial& v) {
    Polynomial d = vprime - v;
    if (d.degree() < 0) return Rational(0);
    Rational best = d.eval(Rational(0));
    Rational at_one = d.eval(Rational(1));
    if (at_one > best) best = at_one;
    Polynomial deriv = d.derivative();
    if (deriv.degree() >= 1) {
        for (const auto& cp : roots_in_interval(deriv, Rational(0), Rational(1))) {
            Rational value = d.eval(cp.value);
            if (value > best) best = value;
        }
    }
    return best;
}

} // namespace nlb
