#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lakit/calculus.hpp"

using namespace lakit;

namespace {

Poly x(std::size_t nv, std::size_t i) { return Poly::variable(nv, i); }
Poly c(std::size_t nv, long num, long den = 1) { return Poly::constant(nv, Rational(num, den)); }

// Tangent bundle of the affine base with identity anchor and vanishing
// coordinate-frame brackets: the extension rules reproduce the full Lie
// bracket of vector fields.
DullBracket tangent_lie(std::size_t p) {
    FreeModule tm{"TM", p, p};
    std::vector<Section> anchor;
    for (std::size_t i = 0; i < p; ++i) anchor.push_back(frame_section(p, p, i));
    std::vector<std::vector<Section>> coeffs(p, std::vector<Section>(p, zero_section(p, p)));
    return DullBracket(AnchoredBundle(tm, anchor), coeffs);
}

Section random_section(std::size_t rank, std::size_t nv, Rng& rng) {
    Section s = zero_section(rank, nv);
    for (auto& entry : s) entry = random_poly(nv, rng);
    return s;
}

// Random anchor-compatible dull bracket on TM + trivial rank-k piece: all
// frame bracket coefficients land in the anchor-kernel slots, so anchor
// compatibility holds for any choice of the polynomial coefficients.
DullBracket random_dull(std::size_t p, std::size_t k, Rng& rng) {
    const std::size_t r = p + k;
    FreeModule q{"Q", r, p};
    std::vector<Section> anchor(r, zero_section(p, p));
    for (std::size_t i = 0; i < p; ++i) anchor[i] = frame_section(p, p, i);
    std::vector<std::vector<Section>> coeffs(r, std::vector<Section>(r, zero_section(r, p)));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j)
            for (std::size_t v = p; v < r; ++v) {
                coeffs[i][j][v] = random_poly(p, rng);
                coeffs[j][i][v] = -coeffs[i][j][v];
            }
    return DullBracket(AnchoredBundle(q, anchor), coeffs);
}

} // namespace

TEST_CASE("tangent dull bracket reproduces the vector field commutator") {
    Rng rng(11);
    DullBracket d = tangent_lie(2);
    for (int t = 0; t < 5; ++t) {
        Section X = random_section(2, 2, rng), Y = random_section(2, 2, rng);
        CHECK(section_eq(d.bracket(X, Y), vf_bracket(X, Y)));
        CHECK(is_zero(d.jacobiator(X, Y, random_section(2, 2, rng))));
    }
    CHECK(check_dull_axioms(d, rng).verdict());
}

TEST_CASE("Dorfman connection on the tangent bundle is the Lie derivative") {
    Rng rng(13);
    DullBracket d = tangent_lie(2);
    Section X = random_section(2, 2, rng), theta = random_section(2, 2, rng);
    // (L_X theta)_j = X(theta_j) + theta_i d_j(X_i), computed independently
    Section lie = zero_section(2, 2);
    for (std::size_t j = 0; j < 2; ++j) {
        lie[j] = apply_derivation(X, theta[j]);
        for (std::size_t i = 0; i < 2; ++i) lie[j] += theta[i] * X[i].derivative(j);
    }
    CHECK(section_eq(d.dorfman(X, theta), lie));
}

TEST_CASE("dualization identity defines the Dorfman connection") {
    Rng rng(17);
    for (int t = 0; t < 3; ++t) {
        DullBracket d = random_dull(2, 2, rng);
        Section q = random_section(4, 2, rng), qp = random_section(4, 2, rng);
        Section tau = random_section(4, 2, rng);
        Poly lhs = d.base().rho(q, pair(qp, tau));
        Poly rhs = pair(d.bracket(q, qp), tau) + pair(qp, d.dorfman(q, tau));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("anchor compatibility dualizes to exactness preservation") {
    Rng rng(19);
    DullBracket d = random_dull(2, 1, rng);
    REQUIRE(check_dull_axioms(d, rng).verdict());
    Poly f = random_poly(2, rng);
    Section q = random_section(3, 2, rng);
    Section lhs = d.dorfman(q, d.base().rho_star(differential(f)));
    Section rhs = d.base().rho_star(differential(d.base().rho(q, f)));
    CHECK(section_eq(lhs, rhs));
}

TEST_CASE("Jacobiator equals the dual of the Dorfman curvature") {
    Rng rng(23);
    for (int t = 0; t < 4; ++t) {
        DullBracket d = random_dull(2, 2, rng);
        Section q1 = random_section(4, 2, rng), q2 = random_section(4, 2, rng);
        Section q3 = random_section(4, 2, rng), tau = random_section(4, 2, rng);
        // <Jac(q1,q2,q3), tau> = <q3, R(q1,q2) tau>
        CHECK(pair(d.jacobiator(q1, q2, q3), tau) == pair(q3, d.dorfman_curvature(q1, q2, tau)));
    }
}

TEST_CASE("violated skew-symmetry is rejected at construction") {
    FreeModule q{"Q", 2, 1};
    std::vector<Section> anchor(2, zero_section(1, 1));
    std::vector<std::vector<Section>> coeffs(2, std::vector<Section>(2, zero_section(2, 1)));
    coeffs[0][1][0] = c(1, 1); // missing the opposite entry
    CHECK_THROWS(DullBracket(AnchoredBundle(q, anchor), coeffs));
}

TEST_CASE("anchor incompatibility is detected, not assumed away") {
    // bracket table sends [e1,e2] to e1 while both anchors are d/dx: the
    // anchor of the bracket is d/dx but [rho e1, rho e2] = 0.
    FreeModule q{"Q", 2, 1};
    std::vector<Section> anchor(2, frame_section(1, 1, 0));
    std::vector<std::vector<Section>> coeffs(2, std::vector<Section>(2, zero_section(2, 1)));
    coeffs[0][1][0] = c(1, 1);
    coeffs[1][0][0] = c(1, -1);
    DullBracket d(AnchoredBundle(q, anchor), coeffs);
    Rng rng(3);
    CheckReport rep = check_dull_axioms(d, rng);
    CHECK_FALSE(rep.verdict());
    const CheckEntry* e = rep.find("anchor_compatibility");
    REQUIRE(e != nullptr);
    CHECK_FALSE(e->pass);
    REQUIRE(e->witness.has_value());
    CHECK(e->witness->poly.eval(e->witness->point) != 0);
    CHECK(rep.find("skew_symmetry")->pass);
}

TEST_CASE("de Rham differential via the Koszul formula") {
    DullBracket d = tangent_lie(3);
    // function f = x1 x2: df = x2 dx1 + x1 dx2
    TensorMap f({}, 0, 3);
    f.coeff({}, 0) = x(3, 0) * x(3, 1);
    TensorMap df = koszul_d(d, f);
    CHECK(df.coeff({0}, 0) == x(3, 1));
    CHECK(df.coeff({1}, 0) == x(3, 0));
    CHECK(df.coeff({2}, 0).is_zero());

    // d^2 = 0 on a polynomial 1-form
    TensorMap omega({3}, 0, 3);
    omega.coeff({0}, 0) = x(3, 1) * x(3, 2);
    omega.coeff({1}, 0) = x(3, 0) * x(3, 0);
    omega.coeff({2}, 0) = c(3, 5);
    TensorMap domega = koszul_d(d, omega);
    // hand-computed exterior derivative coefficients (d omega)(e_i, e_j)
    CHECK(domega.coeff({0, 1}, 0) == c(3, 2) * x(3, 0) - x(3, 2));
    CHECK(domega.coeff({0, 2}, 0) == -x(3, 1));
    CHECK(domega.coeff({1, 2}, 0).is_zero());
    CHECK_NOTHROW(domega.validate());
    TensorMap dd = koszul_d(d, domega);
    TensorMap zero3({3, 3, 3}, 0, 3, Symmetry::alt);
    CHECK_FALSE(tensor_equal(dd, zero3).has_value());
}

TEST_CASE("connection duality and curvature") {
    Rng rng(29);
    DullBracket d = tangent_lie(2);
    FreeModule e{"E", 2, 2};
    std::vector<std::vector<Section>> g(2, std::vector<Section>(2, zero_section(2, 2)));
    for (auto& row : g)
        for (auto& s : row) s = random_section(2, 2, rng);
    Connection nabla(d.base(), e, g);
    Connection dualn = nabla.dual();

    Section X = random_section(2, 2, rng), s = random_section(2, 2, rng),
            alpha = random_section(2, 2, rng);
    // <nabla*_X alpha, s> + <alpha, nabla_X s> = X<alpha, s>
    CHECK(pair(dualn.act(X, alpha), s) + pair(alpha, nabla.act(X, s)) ==
          apply_derivation(d.base().anchor_of(X), pair(alpha, s)));

    // curvature is tensorial: R(fX, Y)s = f R(X,Y)s
    Section Y = random_section(2, 2, rng);
    Poly f = random_poly(2, rng);
    CHECK(section_eq(nabla.curvature(d, f * X, Y, s), f * nabla.curvature(d, X, Y, s)));
    // and the dual connection has minus-transposed curvature
    CHECK(pair(dualn.curvature(d, X, Y, alpha), s) == -pair(alpha, nabla.curvature(d, X, Y, s)));
}

TEST_CASE("Koszul differential of a connection-valued form squares to curvature") {
    Rng rng(31);
    DullBracket d = tangent_lie(2);
    FreeModule e{"E", 2, 2};
    std::vector<std::vector<Section>> g(2, std::vector<Section>(2, zero_section(2, 2)));
    for (auto& row : g)
        for (auto& s : row) s = random_section(2, 2, rng);
    Connection nabla(d.base(), e, g);

    // d_nabla(d_nabla s)(X,Y) = R(X,Y)s for a frame section s
    for (std::size_t j = 0; j < 2; ++j) {
        TensorMap s0({}, 2, 2);
        for (std::size_t v = 0; v < 2; ++v) s0.coeff({}, v) = (v == j) ? c(2, 1) : c(2, 0);
        TensorMap dds = koszul_d(d, nabla, koszul_d(d, nabla, s0));
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b) {
                Section r = nabla.curvature(d, frame_section(2, 2, a), frame_section(2, 2, b),
                                            frame_section(2, 2, j));
                for (std::size_t v = 0; v < 2; ++v) CHECK(dds.coeff({a, b}, v) == r[v]);
            }
    }
}
