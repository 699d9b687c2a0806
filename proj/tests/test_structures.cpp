#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lakit/structures.hpp"

using namespace lakit;

namespace {

Rng seeded() { return Rng(20260826); }

// cross(i, j) as a section of a rank-3 module: e1 x e2 = e3 cyclically.
Section cross(std::size_t i, std::size_t j, std::size_t nv) {
    Section out = zero_section(3, nv);
    if (i == j) return out;
    std::size_t k = 3 - i - j;
    int sign = ((j == (i + 1) % 3)) ? 1 : -1;
    out[k] = Poly::constant(nv, sign);
    return out;
}

std::vector<std::vector<Section>> cross_table(std::size_t nv) {
    std::vector<std::vector<Section>> c(3, std::vector<Section>(3));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) c[i][j] = cross(i, j, nv);
    return c;
}

std::vector<std::vector<Section>> zero_table(std::size_t r1, std::size_t r2, std::size_t out_rank,
                                             std::size_t nv) {
    return std::vector<std::vector<Section>>(r1,
                                             std::vector<Section>(r2, zero_section(out_rank, nv)));
}

std::vector<Section> zero_anchor(std::size_t rank, std::size_t nv) {
    return std::vector<Section>(rank, zero_section(nv, nv));
}

// rank-3 bundle with the cross-product bracket and zero anchor: so(3).
DullBracket so3(std::size_t nv) {
    AnchoredBundle b({"B", 3, nv}, zero_anchor(3, nv));
    return DullBracket(b, cross_table(nv));
}

// fill a 3-slot alternating tensor coefficient in all index orders
void fill_alt3(TensorMap& t, std::size_t i, std::size_t j, std::size_t k, std::size_t out,
               const Poly& v) {
    t.coeff({i, j, k}, out) = v;
    t.coeff({j, k, i}, out) = v;
    t.coeff({k, i, j}, out) = v;
    t.coeff({j, i, k}, out) = -v;
    t.coeff({i, k, j}, out) = -v;
    t.coeff({k, j, i}, out) = -v;
}

void check_live_witness(const CheckReport& rep, const std::string& axiom) {
    const CheckEntry* e = rep.find(axiom);
    REQUIRE(e != nullptr);
    CHECK_FALSE(e->pass);
    REQUIRE(e->witness.has_value());
    CHECK(e->witness->poly.eval(e->witness->point) != Rational(0));
}

} // namespace

TEST_CASE("quadratic Lie algebra from the cross product is a Courant algebroid") {
    const std::size_t nv = 1;
    AnchoredBundle E({"E", 3, nv}, zero_anchor(3, nv));
    PolyMat g(3, 3, nv);
    for (std::size_t i = 0; i < 3; ++i) g.at(i, i) = Poly::constant(nv, 1);
    std::vector<Section> dcomp(nv, zero_section(3, nv));
    CourantData cd(E, g, dcomp, cross_table(nv));

    CHECK(section_eq(cd.bracket(E.bundle.frame(0), E.bundle.frame(1)), E.bundle.frame(2)));
    CHECK(cd.pair_op(E.bundle.frame(1), E.bundle.frame(1)) == Poly::constant(nv, 1));

    Rng rng = seeded();
    CheckReport rep = check_courant(cd, true, rng);
    CHECK(rep.verdict());
    CHECK(rep.find("nondegenerate")->pass);

    // breaking skew-symmetry of the table breaks the symmetric-part axiom
    auto bad = cross_table(nv);
    bad[0][1] = -bad[0][1];
    CourantData mutated(E, g, dcomp, bad);
    Rng rng2 = seeded();
    CheckReport bad_rep = check_courant(mutated, true, rng2);
    CHECK_FALSE(bad_rep.verdict());
    check_live_witness(bad_rep, "CA3");
}

TEST_CASE("standard pairing on TM + T*M with a closed twist is a Courant algebroid") {
    const std::size_t p = 3, r = 6, nv = p;
    std::vector<Section> anchor(r, zero_section(p, nv));
    for (std::size_t i = 0; i < p; ++i) anchor[i] = frame_section(p, nv, i);
    AnchoredBundle E({"E", r, nv}, anchor);
    PolyMat g(r, r, nv);
    for (std::size_t i = 0; i < p; ++i) {
        g.at(i, p + i) = Poly::constant(nv, 1);
        g.at(p + i, i) = Poly::constant(nv, 1);
    }
    // D f = (0, df): <Df, e_i> = (df)_i = rho(e_i)(f), <Df, f_i> = 0.
    std::vector<Section> dcomp;
    for (std::size_t l = 0; l < p; ++l) dcomp.push_back(frame_section(r, nv, p + l));

    // twist of the zero table by H = x1 dx1^dx2^dx3 (a closed 3-form):
    // [[e_i, e_j]] gains the one-form H(d_i, d_j, .).
    Poly h = Poly::variable(nv, 0);
    auto table = zero_table(r, r, r, nv);
    table[0][1] = h * frame_section(r, nv, p + 2);
    table[1][2] = h * frame_section(r, nv, p + 0);
    table[2][0] = h * frame_section(r, nv, p + 1);
    table[1][0] = -table[0][1];
    table[2][1] = -table[1][2];
    table[0][2] = -table[2][0];

    CourantData cd(E, g, dcomp, table);
    Rng rng = seeded();
    CheckReport rep = check_courant(cd, true, rng);
    CHECK(rep.verdict());

    // a lone twist coefficient (not coming from any 3-form) is inconsistent
    auto bad = table;
    bad[0][1] = bad[0][1] + Poly::variable(nv, 1) * frame_section(r, nv, p + 2);
    bad[1][0] = -bad[0][1];
    Rng rng2 = seeded();
    CheckReport bad_rep = check_courant(CourantData(E, g, dcomp, bad), true, rng2);
    CHECK_FALSE(bad_rep.verdict());

    // D must match the anchor through the pairing
    CHECK_THROWS_AS(CourantData(E, g, std::vector<Section>(p, zero_section(r, nv)), table),
                    std::invalid_argument);
}

TEST_CASE("coordinate vector fields with a 3-form: split Lie 2-algebroid iff the form is closed") {
    const std::size_t p = 4;
    std::vector<Section> anchor;
    for (std::size_t i = 0; i < p; ++i) anchor.push_back(frame_section(p, p, i));
    AnchoredBundle Q({"Q", p, p}, anchor);
    DullBracket dull(Q, zero_table(p, p, p, p));
    FreeModule B{"B", 1, p};
    PolyMat dB(1, p, p);
    Connection nabla(Q, B, zero_table(p, 1, 1, p));

    TensorMap closed({p, p, p}, 1, p, Symmetry::alt);
    fill_alt3(closed, 0, 1, 2, 0, Poly::constant(p, 1));
    Rng rng = seeded();
    CHECK(check_split_lie2(SplitLie2(dull, B, dB, nabla, closed), rng).verdict());

    TensorMap nonclosed({p, p, p}, 1, p, Symmetry::alt);
    fill_alt3(nonclosed, 0, 1, 2, 0, Poly::variable(p, 3)); // x4 dx1^dx2^dx3, not closed
    Rng rng2 = seeded();
    CheckReport rep = check_split_lie2(SplitLie2(dull, B, dB, nabla, nonclosed), rng2);
    CHECK_FALSE(rep.verdict());
    check_live_witness(rep, "lie2_v_omega_closed");
    CHECK(rep.find("lie2_iii_jacobiator_via_omega")->pass);
    CHECK(rep.find("lie2_iv_curvature_via_omega")->pass);
}

namespace {

SelfDual2Rep adjoint_rep(std::size_t nv) {
    DullBracket bB = so3(nv);
    FreeModule Q{"Q", 3, nv};
    PolyMat dQ(3, 3, nv);
    Connection ad(bB.base(), Q, cross_table(nv));
    TensorMap R({3, 3, 3}, 3, nv, Symmetry::none);
    return SelfDual2Rep(bB, Q, dQ, ad, ad, R);
}

} // namespace

TEST_CASE("adjoint representation of so(3) is a self-dual 2-representation") {
    const std::size_t nv = 1;
    Rng rng = seeded();
    CheckReport rep = check_selfdual_2rep(adjoint_rep(nv), rng);
    CHECK(rep.verdict());
    CHECK(rep.entries.size() == 9);

    SUBCASE("a symmetric curvature term violates self-duality") {
        SelfDual2Rep r = adjoint_rep(nv);
        r.R.coeff({0, 1, 0}, 1) = Poly::constant(nv, 1);
        r.R.coeff({1, 0, 0}, 1) = Poly::constant(nv, -1);
        r.R.coeff({0, 1, 1}, 0) = Poly::constant(nv, 1);
        r.R.coeff({1, 0, 1}, 0) = Poly::constant(nv, -1);
        Rng rng2 = seeded();
        CheckReport bad = check_selfdual_2rep(r, rng2);
        CHECK(bad.find("R_alternating_base")->pass);
        check_live_witness(bad, "selfdual_R_antisymmetric");
    }
    SUBCASE("a connection that is not the dual connection is rejected") {
        SelfDual2Rep r = adjoint_rep(nv);
        auto bad_table = cross_table(nv);
        bad_table[0][1] = -bad_table[0][1];
        r.nablaQstar = Connection(r.bB.base(), r.Q, bad_table);
        Rng rng2 = seeded();
        check_live_witness(check_selfdual_2rep(r, rng2), "selfdual_connections_dual");
    }
    SUBCASE("a bracket failing Jacobi is rejected") {
        SelfDual2Rep r = adjoint_rep(nv);
        auto bad_table = cross_table(nv); // skew, but Jac(e1,e2,e3) = [e2,e3] = e1
        bad_table[0][1] = frame_section(3, nv, 1);
        bad_table[1][0] = -bad_table[0][1];
        r.bB = DullBracket(r.bB.base(), bad_table);
        Rng rng2 = seeded();
        check_live_witness(check_selfdual_2rep(r, rng2), "B_jacobi");
    }
}

namespace {

// zero split Lie 2-algebroid over the same Q and B as the adjoint 2-rep
SplitLie2 zero_lie2(std::size_t nv) {
    AnchoredBundle Q({"Q", 3, nv}, zero_anchor(3, nv));
    DullBracket dull(Q, zero_table(3, 3, 3, nv));
    FreeModule B{"B", 3, nv};
    PolyMat dB(3, 3, nv);
    Connection nabla(Q, B, zero_table(3, 3, 3, nv));
    TensorMap omega({3, 3, 3}, 3, nv, Symmetry::alt);
    return SplitLie2(dull, B, dB, nabla, omega);
}

} // namespace

TEST_CASE("zero bracket on Q matched with the adjoint 2-representation") {
    const std::size_t nv = 1;
    LACourantSplit s(zero_lie2(nv), adjoint_rep(nv));
    Rng rng = seeded();
    CHECK(check_matched_M(s, rng).verdict());
    Rng rng2 = seeded();
    CheckReport full = check_la_courant(s, rng2);
    CHECK(full.verdict());
    CHECK(full.entries.size() == 9 + 8 + 9);

    SUBCASE("the identity core map balances the compatibility terms exactly") {
        // this is the quadratic Lie algebra so(3) seen as a decomposition
        LACourantSplit quad = s;
        for (std::size_t i = 0; i < 3; ++i) quad.lie2.dB.at(i, i) = Poly::constant(nv, 1);
        Rng rng3 = seeded();
        CHECK(check_la_courant(quad, rng3).verdict());

        // ...but a non-equivariant core map does not
        LACourantSplit bad = s;
        bad.lie2.dB.at(0, 0) = Poly::constant(nv, 1);
        bad.lie2.dB.at(1, 1) = Poly::constant(nv, 1);
        Rng rng4 = seeded();
        CheckReport rep = check_matched_M(bad, rng4);
        CHECK_FALSE(rep.verdict());
        check_live_witness(rep, "M1");
        // the split Lie 2-algebroid and the 2-representation are untouched
        Rng rng5 = seeded();
        CHECK(check_split_lie2(bad.lie2, rng5).verdict());
    }
    SUBCASE("a nonzero Q-connection on B breaks the mixed Jacobi conditions") {
        LACourantSplit bad = s;
        auto table = zero_table(3, 3, 3, nv);
        for (std::size_t i = 0; i < 3; ++i) table[i][0] = frame_section(3, nv, 0);
        bad.lie2.nabla = Connection(bad.lie2.dull.base(), bad.lie2.B, table);
        Rng rng3 = seeded();
        CHECK_FALSE(check_matched_M(bad, rng3).verdict());
    }
}

TEST_CASE("matched pair of 2-term representations: so(3) acting on its adjoint complex") {
    const std::size_t nv = 1;
    DullBracket bA = so3(nv);
    AnchoredBundle Bb({"B", 1, nv}, zero_anchor(1, nv));
    DullBracket bB(Bb, zero_table(1, 1, 1, nv));
    FreeModule C{"C", 3, nv};
    PolyMat dA(3, 3, nv);
    for (std::size_t i = 0; i < 3; ++i) dA.at(i, i) = Poly::constant(nv, 1);
    PolyMat dB(1, 3, nv);
    Connection nablaAB(bA.base(), Bb.bundle, zero_table(3, 1, 1, nv));
    Connection nablaAC(bA.base(), C, cross_table(nv));
    Connection nablaBA(Bb, bA.base().bundle, zero_table(1, 3, 3, nv));
    Connection nablaBC(Bb, C, zero_table(1, 3, 3, nv));
    TensorMap RA({3, 3, 1}, 3, nv, Symmetry::none);
    TensorMap RB({1, 1, 3}, 3, nv, Symmetry::none);
    Matched2Reps mp(bA, bB, C, dA, dB, nablaAB, nablaAC, nablaBA, nablaBC, RA, RB);
    Rng rng = seeded();
    CheckReport rep = check_matched_m(mp, rng);
    CHECK(rep.verdict());
    CHECK(rep.entries.size() == 7);

    Matched2Reps bad = mp;
    bad.RA.coeff({0, 1, 0}, 2) = Poly::constant(nv, 1);
    bad.RA.coeff({1, 0, 0}, 2) = Poly::constant(nv, -1);
    Rng rng2 = seeded();
    CheckReport bad_rep = check_matched_m(bad, rng2);
    CHECK_FALSE(bad_rep.verdict());
    check_live_witness(bad_rep, "m4");
}
