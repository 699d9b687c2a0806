#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lakit/poly.hpp"
#include "lakit/section.hpp"
#include "lakit/witness.hpp"

using namespace lakit;

namespace {
Poly x(std::size_t nv, std::size_t i) { return Poly::variable(nv, i); }
Poly c(std::size_t nv, long num, long den = 1) {
    return Poly::constant(nv, Rational(num, den));
}
} // namespace

TEST_CASE("ring operations are exact and structural") {
    // (x1 + 1/3)^2 expanded by hand
    Poly p = x(2, 0) + c(2, 1, 3);
    Poly sq = p * p;
    Poly expected = x(2, 0) * x(2, 0) + c(2, 2, 3) * x(2, 0) + c(2, 1, 9);
    CHECK(sq == expected);
    CHECK((sq - expected).is_zero());

    // no zero terms survive
    Poly zero = p - p;
    CHECK(zero.is_zero());
    CHECK(zero.terms().empty());

    // 1/3 stays 1/3, never a float artifact
    CHECK(sq.eval({Rational(0), Rational(7)}) == Rational(1, 9));
}

TEST_CASE("zero-variable base ring behaves as the rationals") {
    Poly a = c(0, 2, 5), b = c(0, 3);
    CHECK((a * b) == c(0, 6, 5));
    CHECK(a.eval({}) == Rational(2, 5));
    CHECK(differential(a).empty());
}

TEST_CASE("derivative and Leibniz") {
    Poly f = x(3, 0) * x(3, 1) + c(3, 2) * x(3, 2);
    CHECK(f.derivative(0) == x(3, 1));
    CHECK(f.derivative(2) == c(3, 2));

    Poly g = x(3, 1) * x(3, 1);
    Section X = {x(3, 1), c(3, 1), Poly(3)}; // x2 d1 + d2
    CHECK(apply_derivation(X, f * g) == apply_derivation(X, f) * g + f * apply_derivation(X, g));
}

TEST_CASE("vector field bracket against hand-computed commutator") {
    // X = x1 d2, Y = d1  =>  [X,Y] = -d2
    Section X = {Poly(2), x(2, 0)};
    Section Y = {c(2, 1), Poly(2)};
    Section expected = {Poly(2), -c(2, 1)};
    CHECK(section_eq(vf_bracket(X, Y), expected));
    // antisymmetry and Jacobi on a second pair
    Section Z = {x(2, 1), x(2, 0) * x(2, 0)};
    Section jac = vf_bracket(X, vf_bracket(Y, Z)) + vf_bracket(Y, vf_bracket(Z, X)) +
                  vf_bracket(Z, vf_bracket(X, Y));
    CHECK(is_zero(jac));
}

TEST_CASE("differential pairs with vector fields as directional derivative") {
    Poly f = x(2, 0) * x(2, 0) * x(2, 1);
    Section X = {x(2, 1), c(2, 3)};
    CHECK(pair(differential(f), X) == apply_derivation(X, f));
}

TEST_CASE("witness point search hits a nonvanishing point") {
    Poly p = x(2, 0) * x(2, 0) - x(2, 1); // vanishes at origin
    auto pt = find_nonzero_point(p);
    CHECK(p.eval(pt) != 0);

    Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        Poly r = random_poly(3, rng);
        CHECK_FALSE(r.is_zero());
        CHECK(r.eval(find_nonzero_point(r)) != 0);
    }
}

TEST_CASE("mixing variable counts is rejected") {
    CHECK_THROWS(Poly(2) + Poly(3));
    CHECK_THROWS(apply_derivation(Section{c(2, 1)}, x(2, 0)));
}
