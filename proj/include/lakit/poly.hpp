#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "lakit/rational.hpp"

namespace lakit {

// Exponent vector of a monomial; one entry per base coordinate.
using Exponents = std::vector<unsigned>;

// Sparse multivariate polynomial over the rationals in coordinates
// x1,...,xp.  Zero terms are never stored, so structural equality of the
// term maps is equality in the ring.  All polynomials appearing in one
// computation must share the same number of variables; mixing is an error.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::size_t nvars) : nvars_(nvars) {}

    static Poly constant(std::size_t nvars, const Rational& c);
    static Poly variable(std::size_t nvars, std::size_t i); // x_{i+1}
    static Poly monomial(std::size_t nvars, Exponents exps, const Rational& c);

    std::size_t nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Constant term (also the value for the zero polynomial).
    Rational constant_value() const;

    const std::map<Exponents, Rational>& terms() const { return terms_; }
    unsigned total_degree() const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly operator-() const;
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(const Rational& c, Poly p);

    bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly derivative(std::size_t var) const;
    Rational eval(const std::vector<Rational>& point) const;
    // Substitute point[i] for x_{i+1}; images live in a ring with
    // `images[i].nvars()` variables (all images must agree).
    Poly compose(const std::vector<Poly>& images) const;

    // Human-readable form, e.g. "3/2*x1^2*x3 - x2".
    std::string str() const;

private:
    std::size_t nvars_ = 0;
    std::map<Exponents, Rational> terms_;

    void add_term(const Exponents& e, const Rational& c);
    void check_compatible(const Poly& o) const;
};

} // namespace lakit
