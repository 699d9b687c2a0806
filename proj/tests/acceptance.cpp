// Acceptance gate: one pass/fail line per criterion, exit 0 only if all pass.
#include <chrono>
#include <iostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lakit/constructions.hpp"
#include "lakit/dirac.hpp"
#include "lakit/graded.hpp"
#include "lakit/metric.hpp"

using namespace lakit;

namespace {

Rng seeded() { return Rng(20260826); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

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

PolyMat identity_mat(std::size_t n, std::size_t nv) {
    PolyMat m(n, n, nv);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Poly::constant(nv, 1);
    return m;
}

TensorMap volume_h(std::size_t p, const Poly& c) {
    TensorMap h({p, p, p}, 0, p, Symmetry::alt);
    h.coeff({0, 1, 2}) = c;
    h.coeff({1, 2, 0}) = c;
    h.coeff({2, 0, 1}) = c;
    h.coeff({1, 0, 2}) = -c;
    h.coeff({0, 2, 1}) = -c;
    h.coeff({2, 1, 0}) = -c;
    return h;
}

void fill_alt3(TensorMap& t, std::size_t i, std::size_t j, std::size_t k, std::size_t out,
               const Poly& v) {
    t.coeff({i, j, k}, out) = v;
    t.coeff({j, k, i}, out) = v;
    t.coeff({k, i, j}, out) = v;
    t.coeff({j, i, k}, out) = -v;
    t.coeff({i, k, j}, out) = -v;
    t.coeff({k, j, i}, out) = -v;
}

Connection flat_connection(std::size_t p, const FreeModule& e) {
    std::vector<Section> tmanchor(p);
    for (std::size_t l = 0; l < p; ++l) tmanchor[l] = frame_section(p, p, l);
    AnchoredBundle tm({"TM", p, p}, tmanchor);
    return Connection(tm, e, zero_table(p, e.rank, e.rank, p));
}

LACourantSplit tangent_split(const CourantData& cd) {
    return tangent_prolongation_la_courant(cd, flat_connection(cd.nvars(), cd.E().bundle));
}

DullBracket tangent_algebroid(std::size_t p) {
    std::vector<Section> anchor(p);
    for (std::size_t l = 0; l < p; ++l) anchor[l] = frame_section(p, p, l);
    AnchoredBundle a({"A", p, p}, anchor);
    return DullBracket(a, zero_table(p, p, p, p));
}

DullBracket standard_q(std::size_t p) {
    const std::size_t rq = 2 * p;
    std::vector<Section> anchor(rq, zero_section(p, p));
    for (std::size_t l = 0; l < p; ++l) anchor[l] = frame_section(p, p, l);
    AnchoredBundle q({"Q", rq, p}, anchor);
    return DullBracket(q, zero_table(rq, rq, rq, p));
}

Matched2Reps so3_adjoint_matched(std::size_t nv) {
    AnchoredBundle ab({"A", 3, nv}, zero_anchor(3, nv));
    DullBracket bA(ab, cross_table(nv));
    AnchoredBundle bb({"B", 1, nv}, zero_anchor(1, nv));
    DullBracket bB(bb, zero_table(1, 1, 1, nv));
    FreeModule C{"C", 3, nv};
    PolyMat dA = identity_mat(3, nv);
    PolyMat dB(1, 3, nv);
    Connection nablaAB(ab, bb.bundle, zero_table(3, 1, 1, nv));
    Connection nablaAC(ab, C, cross_table(nv));
    Connection nablaBA(bb, ab.bundle, zero_table(1, 3, 3, nv));
    Connection nablaBC(bb, C, zero_table(1, 3, 3, nv));
    TensorMap RA({3, 3, 1}, 3, nv, Symmetry::none);
    TensorMap RB({1, 1, 3}, 3, nv, Symmetry::none);
    return Matched2Reps(bA, bB, C, dA, dB, nablaAB, nablaAC, nablaBA, nablaBC, RA, RB);
}

Matched2Reps rank_one_matched() {
    const std::size_t nv = 0;
    AnchoredBundle ab({"A", 1, nv}, zero_anchor(1, nv));
    DullBracket bA(ab, zero_table(1, 1, 1, nv));
    AnchoredBundle bb({"B", 1, nv}, zero_anchor(1, nv));
    DullBracket bB(bb, zero_table(1, 1, 1, nv));
    FreeModule C{"C", 0, nv};
    auto act = zero_table(1, 1, 1, nv);
    act[0][0] = frame_section(1, nv, 0);
    return Matched2Reps(bA, bB, C, PolyMat(1, 0, nv), PolyMat(1, 0, nv),
                        Connection(ab, bb.bundle, act), Connection(ab, C, zero_table(1, 0, 0, nv)),
                        Connection(bb, ab.bundle, zero_table(1, 1, 1, nv)),
                        Connection(bb, C, zero_table(1, 0, 0, nv)),
                        TensorMap({1, 1, 1}, 0, nv, Symmetry::none),
                        TensorMap({1, 1, 1}, 0, nv, Symmetry::none));
}

CourantData quadratic_so3() { return make_quadratic_lie_algebra(cross_table(0), identity_mat(3, 0)); }

LACourantSplit tangent_over_point(const CourantData& cd) {
    AnchoredBundle tm({"TM", 0, 0}, {});
    return tangent_prolongation_la_courant(cd, Connection(tm, cd.E().bundle, {}));
}

// corpus of decomposed structures, valid ones first
struct CorpusEntry {
    std::string name;
    LACourantSplit s;
    bool valid;
};

std::vector<CorpusEntry> build_corpus() {
    std::vector<CorpusEntry> c;
    CourantData so3 = quadratic_so3();
    CourantData ab2 = make_quadratic_lie_algebra(zero_table(2, 2, 2, 0), identity_mat(2, 0));
    CourantData ex1 = make_exact_courant(1, TensorMap({1, 1, 1}, 0, 1, Symmetry::alt));
    CourantData ex3c = make_exact_courant(3, volume_h(3, Poly::constant(3, 5)));
    CourantData ex3v = make_exact_courant(3, volume_h(3, Poly::variable(3, 0)));

    c.push_back({"tangent(so3)", tangent_over_point(so3), true});
    c.push_back({"tangent(abelian)", tangent_over_point(ab2), true});
    c.push_back({"tangent(exact,p=1)", tangent_split(ex1), true});
    c.push_back({"tangent(exact,p=3,const twist)", tangent_split(ex3c), true});
    c.push_back({"tangent(exact,p=3,x1 twist)", tangent_split(ex3v), true});
    c.push_back({"standard(TM line)",
                 standard_la_courant_over_lie_algebroid(tangent_algebroid(1), standard_q(1)),
                 true});
    c.push_back({"standard(TM plane)",
                 standard_la_courant_over_lie_algebroid(tangent_algebroid(2), standard_q(2)),
                 true});
    c.push_back({"matched(so3 adjoint)", la_courant_from_matched_2reps(so3_adjoint_matched(1)),
                 true});
    c.push_back({"matched(rank one)", la_courant_from_matched_2reps(rank_one_matched()), true});
    {
        // zero structure maps in small rank
        AnchoredBundle q({"Q", 2, 1}, zero_anchor(2, 1));
        DullBracket dull(q, zero_table(2, 2, 2, 1));
        FreeModule b{"B", 1, 1};
        AnchoredBundle bb(b, zero_anchor(1, 1));
        SplitLie2 lie2(dull, b, PolyMat(1, 2, 1), Connection(q, b, zero_table(2, 1, 1, 1)),
                       TensorMap({2, 2, 2}, 1, 1, Symmetry::alt));
        SelfDual2Rep rep(DullBracket(bb, zero_table(1, 1, 1, 1)), q.bundle, PolyMat(2, 2, 1),
                         Connection(bb, q.bundle, zero_table(1, 2, 2, 1)),
                         Connection(bb, q.bundle, zero_table(1, 2, 2, 1)),
                         TensorMap({1, 1, 2}, 2, 1, Symmetry::none));
        c.push_back({"zero(2,1)", LACourantSplit(lie2, rep), true});
    }

    // single-tensor mutations of each valid instance, cycling through slots
    std::size_t base_count = c.size();
    for (std::size_t n = 0; n < base_count; ++n) {
        LACourantSplit m = c[n].s;
        const std::size_t rq = m.rank_q(), rb = m.rank_b(), nv = m.nvars();
        Poly one = Poly::constant(nv, 1);
        // pick the first applicable mutation starting from a rotating index
        std::size_t which = n % 5;
        auto applicable = [&](std::size_t w) {
            switch (w) {
            case 0:
            case 1: return rq >= 1 && rb >= 1;
            case 3: return rq >= 2 && rb >= 2;
            case 2: return rq >= 2;
            default: return rq >= 1;
            }
        };
        while (!applicable(which)) which = (which + 1) % 5;
        switch (which) {
        case 0: { // connection on B
            auto t = zero_table(rq, rb, rb, nv);
            for (std::size_t i = 0; i < rq; ++i)
                for (std::size_t j = 0; j < rb; ++j) t[i][j] = m.lie2.nabla.frame_coeff(i, j);
            t[0][0][0] += one;
            m.lie2.nabla = Connection(m.lie2.dull.base(), m.lie2.B, t);
            break;
        }
        case 1: { // connection on Q, together with its dual on Q*
            auto t = zero_table(rb, rq, rq, nv);
            auto ts = zero_table(rb, rq, rq, nv);
            for (std::size_t i = 0; i < rb; ++i)
                for (std::size_t j = 0; j < rq; ++j) {
                    t[i][j] = m.rep.nablaQ.frame_coeff(i, j);
                    ts[i][j] = m.rep.nablaQstar.frame_coeff(i, j);
                }
            t[0][0][0] += one;
            ts[0][0][0] -= one;
            m.rep.nablaQ = Connection(m.rep.bB.base(), m.rep.Q, t);
            m.rep.nablaQstar = Connection(m.rep.bB.base(), m.rep.Q, ts);
            break;
        }
        case 2: { // dull bracket table (kept skew)
            auto t = zero_table(rq, rq, rq, nv);
            for (std::size_t i = 0; i < rq; ++i)
                for (std::size_t j = 0; j < rq; ++j) t[i][j] = m.lie2.dull.frame_coeff(i, j);
            t[0][1][0] += one;
            t[1][0][0] -= one;
            m.lie2 = SplitLie2(DullBracket(m.lie2.dull.base(), t), m.lie2.B, m.lie2.dB,
                               m.lie2.nabla, m.lie2.omega);
            break;
        }
        case 3: // curvature tensor R, antisymmetric in both index pairs
            m.rep.R.coeff({0, 1, 0}, 1) += one;
            m.rep.R.coeff({1, 0, 0}, 1) -= one;
            m.rep.R.coeff({0, 1, 1}, 0) -= one;
            m.rep.R.coeff({1, 0, 1}, 0) += one;
            break;
        default: // core map dQ (kept symmetric)
            m.rep.dQ.at(0, 0) += one;
            break;
        }
        c.push_back({c[n].name + " [mutated]", m, false});
    }
    return c;
}

struct Criterion {
    int number;
    std::string title;
    bool pass;
};

bool report(std::vector<Criterion>& out, int n, const std::string& title, bool pass) {
    out.push_back({n, title, pass});
    std::cout << "criterion " << n << ": " << (pass ? "pass" : "fail") << " - " << title
              << std::endl;
    return pass;
}

// ---------------------------------------------------------------- criteria

bool criterion1() {
    auto t0 = std::chrono::steady_clock::now();
    Rng rng = seeded();
    bool ok = check_courant(quadratic_so3(), true, rng).verdict();
    bool in_time1 = seconds_since(t0) < 5.0;

    auto t1 = std::chrono::steady_clock::now();
    Rng rng2 = seeded();
    ok = ok && check_courant(make_exact_courant(3, volume_h(3, Poly::constant(3, 5))), true, rng2)
                   .verdict();
    bool in_time2 = seconds_since(t1) < 5.0;

    // single structure-constant mutation
    auto bad = cross_table(0);
    bad[0][1][2] = Poly::constant(0, 2);
    Rng rng3 = seeded();
    CheckReport rep = check_courant(make_quadratic_lie_algebra(bad, identity_mat(3, 0)), true,
                                    rng3);
    const CheckEntry* ca1 = rep.find("CA1");
    bool mutation_caught = ca1 && !ca1->pass && ca1->witness &&
                           ca1->witness->poly.eval(ca1->witness->point) != Rational(0);
    return ok && in_time1 && in_time2 && mutation_caught;
}

bool criterion2(const std::vector<CorpusEntry>& corpus) {
    auto t0 = std::chrono::steady_clock::now();
    if (corpus.size() < 20) return false;
    bool agree = true, some_fail = false;
    for (const CorpusEntry& e : corpus) {
        Rng rng = seeded();
        bool vm = check_matched_M(e.s, rng).verdict();
        GradedDerivation Qv = homological_from_lie2(e.s.lie2, 6);
        PoissonBracket pb = poisson_from_selfdual(e.s.rep, 6);
        Rng rng2 = seeded();
        bool vc = check_Q_poisson_compat(Qv, pb, rng2).verdict();
        if (vm != vc) {
            std::cout << "  [criterion 2] disagreement on " << e.name << std::endl;
            agree = false;
        }
        if (!vm) some_fail = true;
    }
    return agree && some_fail && seconds_since(t0) < 120.0;
}

bool criterion3(const std::vector<CorpusEntry>& corpus) {
    bool ok = true;
    // valid instances: the homological derivation squares to zero
    for (const CorpusEntry& e : corpus)
        if (e.valid) {
            Rng rng = seeded();
            if (!check_homological(homological_from_lie2(e.s.lie2, 6), rng).verdict()) {
                std::cout << "  [criterion 3] Q^2 != 0 on valid " << e.name << std::endl;
                ok = false;
            }
        }

    // one mutation per structure condition, breaking exactly that condition
    struct Case {
        std::string target;
        SplitLie2 lie2;
    };
    std::vector<Case> cases;
    {
        // (i) dual connection not isotropic along the image of dB*
        AnchoredBundle q({"Q", 1, 1}, zero_anchor(1, 1));
        DullBracket dull(q, zero_table(1, 1, 1, 1));
        FreeModule b{"B", 2, 1};
        PolyMat dB(2, 1, 1);
        dB.at(0, 0) = Poly::constant(1, 1);
        auto t = zero_table(1, 2, 2, 1);
        t[0][1][1] = Poly::constant(1, 1); // nabla_{q0} b1 = b1
        cases.push_back({"lie2_i_dual_conn_isotropic",
                         SplitLie2(dull, b, dB, Connection(q, b, t),
                                   TensorMap({1, 1, 1}, 2, 1, Symmetry::alt))});
    }
    {
        // (ii) bracket on the image of dB* disagrees with the dual connection
        AnchoredBundle q({"Q", 2, 1}, zero_anchor(2, 1));
        auto t = zero_table(2, 2, 2, 1);
        t[0][1][1] = Poly::constant(1, 1);
        t[1][0][1] = Poly::constant(1, -1);
        DullBracket dull(q, t);
        FreeModule b{"B", 1, 1};
        PolyMat dB(1, 2, 1);
        dB.at(0, 0) = Poly::constant(1, 1);
        cases.push_back({"lie2_ii_bracket_on_dual_image",
                         SplitLie2(dull, b, dB, Connection(q, b, zero_table(2, 1, 1, 1)),
                                   TensorMap({2, 2, 2}, 1, 1, Symmetry::alt))});
    }
    {
        // (iii) non-vanishing Jacobiator with zero omega
        AnchoredBundle q({"Q", 3, 1}, zero_anchor(3, 1));
        auto t = cross_table(1);
        t[0][1] = frame_section(3, 1, 1);
        t[1][0] = -t[0][1];
        DullBracket dull(q, t);
        FreeModule b{"B", 1, 1};
        cases.push_back({"lie2_iii_jacobiator_via_omega",
                         SplitLie2(dull, b, PolyMat(1, 3, 1),
                                   Connection(q, b, zero_table(3, 1, 1, 1)),
                                   TensorMap({3, 3, 3}, 1, 1, Symmetry::alt))});
    }
    {
        // (iv) curved connection with zero omega
        AnchoredBundle q({"Q", 2, 1}, zero_anchor(2, 1));
        DullBracket dull(q, zero_table(2, 2, 2, 1));
        FreeModule b{"B", 2, 1};
        auto t = zero_table(2, 2, 2, 1);
        t[0][0][1] = Poly::constant(1, 1); // nabla_{q0} b0 = b1
        t[1][1][0] = Poly::constant(1, 1); // nabla_{q1} b1 = b0
        cases.push_back({"lie2_iv_curvature_via_omega",
                         SplitLie2(dull, b, PolyMat(2, 2, 1), Connection(q, b, t),
                                   TensorMap({2, 2, 2}, 2, 1, Symmetry::alt))});
    }
    {
        // (v) non-closed omega over coordinate vector fields
        const std::size_t p = 4;
        std::vector<Section> anchor;
        for (std::size_t i = 0; i < p; ++i) anchor.push_back(frame_section(p, p, i));
        AnchoredBundle q({"Q", p, p}, anchor);
        DullBracket dull(q, zero_table(p, p, p, p));
        FreeModule b{"B", 1, p};
        TensorMap w({p, p, p}, 1, p, Symmetry::alt);
        fill_alt3(w, 0, 1, 2, 0, Poly::variable(p, 3));
        cases.push_back({"lie2_v_omega_closed",
                         SplitLie2(dull, b, PolyMat(1, p, p),
                                   Connection(q, b, zero_table(p, 1, 1, p)), w)});
    }

    const std::vector<std::string> conditions = {
        "lie2_i_dual_conn_isotropic", "lie2_ii_bracket_on_dual_image",
        "lie2_iii_jacobiator_via_omega", "lie2_iv_curvature_via_omega", "lie2_v_omega_closed"};
    for (const Case& cs : cases) {
        Rng rng = seeded();
        CheckReport rep = check_split_lie2(cs.lie2, rng);
        for (const std::string& cond : conditions) {
            const CheckEntry* e = rep.find(cond);
            bool want_fail = cond == cs.target;
            if (!e || e->pass == want_fail) {
                std::cout << "  [criterion 3] mutation for " << cs.target << ": condition "
                          << cond << (want_fail ? " did not fail" : " failed too") << std::endl;
                ok = false;
            }
        }
        Rng rng2 = seeded();
        if (check_homological(homological_from_lie2(cs.lie2, 6), rng2).verdict()) {
            std::cout << "  [criterion 3] Q^2 = 0 despite broken " << cs.target << std::endl;
            ok = false;
        }
    }
    return ok;
}

bool criterion4(const std::vector<CorpusEntry>& corpus) {
    bool ok = true;
    Rng phirng = seeded();
    for (const CorpusEntry& e : corpus) {
        if (!e.valid) continue;
        Rng rng = seeded();
        if (!check_courant(core_degenerate_courant(e.s), false, rng).verdict()) {
            std::cout << "  [criterion 4] core Courant axioms fail on " << e.name << std::endl;
            ok = false;
        }
        Rng rng2 = seeded();
        if (!check_core_identities(e.s, rng2).verdict()) {
            std::cout << "  [criterion 4] core identities fail on " << e.name << std::endl;
            ok = false;
        }
        const std::size_t rq = e.s.rank_q(), rb = e.s.rank_b(), nv = e.s.nvars();
        if (rb == 0 || rq < 2) continue; // no nontrivial splitting change exists
        for (int trial = 0; trial < 10; ++trial) {
            TensorMap phi({rq, rq}, rb, nv, Symmetry::alt);
            for (std::size_t i = 0; i < rq; ++i)
                for (std::size_t j = i + 1; j < rq; ++j)
                    for (std::size_t m = 0; m < rb; ++m) {
                        Poly v = random_poly(nv, phirng);
                        phi.coeff({i, j}, m) = v;
                        phi.coeff({j, i}, m) = -v;
                    }
            if (!check_core_bracket_invariance(e.s, SplittingChange(phi)).verdict()) {
                std::cout << "  [criterion 4] core bracket not splitting-invariant on " << e.name
                          << std::endl;
                ok = false;
            }
        }
    }
    return ok;
}

bool criterion5() {
    std::vector<CourantData> algebroids;
    algebroids.push_back(quadratic_so3());
    algebroids.push_back(make_quadratic_lie_algebra(zero_table(2, 2, 2, 0), identity_mat(2, 0)));
    algebroids.push_back(make_exact_courant(1, TensorMap({1, 1, 1}, 0, 1, Symmetry::alt)));
    algebroids.push_back(make_exact_courant(3, volume_h(3, Poly::constant(3, 5))));
    algebroids.push_back(make_exact_courant(3, volume_h(3, Poly::variable(3, 0))));

    bool ok = true;
    for (const CourantData& cd : algebroids) {
        LACourantSplit s = cd.nvars() == 0 ? tangent_over_point(cd) : tangent_split(cd);
        CourantData core = core_degenerate_courant(s);
        const std::size_t r = cd.rank();
        const std::size_t nv = cd.nvars();
        // the core frame is the metric-dual of the original frame, so the
        // comparison is conjugated through the pairing
        RatMat gram(r, r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                gram(i, j) = cd.pairing_mat().at(i, j).constant_value();
        Metric beta(gram);
        bool same = true;
        for (std::size_t i = 0; i < r && same; ++i) {
            Section si = beta.sharp(frame_section(r, nv, i));
            Section ai = zero_section(nv, nv);
            for (std::size_t k = 0; k < r; ++k) ai = ai + si[k] * cd.E().anchor[k];
            same = section_eq(core.E().anchor[i], ai);
            for (std::size_t j = 0; j < r && same; ++j) {
                Section sj = beta.sharp(frame_section(r, nv, j));
                same = section_eq(core.table()[i][j], beta.flat(cd.bracket(si, sj))) &&
                       (core.pairing_mat().at(i, j) - beta.pairing(si, sj)).is_zero();
            }
        }
        for (std::size_t l = 0; l < nv && same; ++l)
            same = section_eq(core.Dmap(Poly::variable(nv, l)),
                              beta.flat(cd.Dmap(Poly::variable(nv, l))));
        if (!same) {
            std::cout << "  [criterion 5] core differs from the initial structure" << std::endl;
            ok = false;
        }
    }
    return ok;
}

// so(3) acting on the B side: A is a trivial line, B carries the cross
// product, C is the adjoint B-module.  Rank-2+ B makes the axioms that are
// antisymmetric in two B slots reachable by mutations.
Matched2Reps so3_mirror(std::size_t nv) {
    AnchoredBundle ab({"A", 1, nv}, zero_anchor(1, nv));
    DullBracket bA(ab, zero_table(1, 1, 1, nv));
    AnchoredBundle bb({"B", 3, nv}, zero_anchor(3, nv));
    DullBracket bB(bb, cross_table(nv));
    FreeModule C{"C", 3, nv};
    PolyMat dA(1, 3, nv);
    PolyMat dB = identity_mat(3, nv);
    Connection nablaAB(ab, bb.bundle, zero_table(1, 3, 3, nv));
    Connection nablaAC(ab, C, zero_table(1, 3, 3, nv));
    Connection nablaBA(bb, ab.bundle, zero_table(3, 1, 1, nv));
    Connection nablaBC(bb, C, cross_table(nv));
    TensorMap RA({1, 1, 3}, 3, nv, Symmetry::none);
    TensorMap RB({3, 3, 1}, 3, nv, Symmetry::none);
    return Matched2Reps(bA, bB, C, dA, dB, nablaAB, nablaAC, nablaBA, nablaBC, RA, RB);
}

bool criterion6() {
    bool ok = true;
    for (const Matched2Reps& mp : {so3_adjoint_matched(1), rank_one_matched(), so3_mirror(1)}) {
        Rng rng = seeded();
        if (!check_matched_m(mp, rng).verdict()) ok = false;
        Rng rng2 = seeded();
        if (!check_la_courant(la_courant_from_matched_2reps(mp), rng2).verdict()) ok = false;
    }

    // catalog of single-tensor mutations of the so(3) pair
    std::vector<Matched2Reps> catalog;
    auto base = [] { return so3_adjoint_matched(1); };
    {
        Matched2Reps m = base();
        m.dA.at(0, 0) = Poly::constant(1, 2);
        catalog.push_back(m);
    }
    {
        Matched2Reps m = base();
        auto t = zero_table(3, 1, 1, 1);
        t[0][0][0] = Poly::constant(1, 1);
        m.nablaAB = Connection(m.bA.base(), m.bB.base().bundle, t);
        catalog.push_back(m);
    }
    {
        Matched2Reps m = base();
        auto t = cross_table(1);
        t[0][0] = frame_section(3, 1, 0);
        m.nablaAC = Connection(m.bA.base(), m.C, t);
        catalog.push_back(m);
    }
    {
        Matched2Reps m = base();
        auto t = zero_table(1, 3, 3, 1);
        t[0][0][1] = Poly::constant(1, 1);
        m.nablaBA = Connection(m.bB.base(), m.bA.base().bundle, t);
        catalog.push_back(m);
    }
    {
        Matched2Reps m = base();
        auto t = zero_table(1, 3, 3, 1);
        t[0][0][0] = Poly::constant(1, 1);
        m.nablaBC = Connection(m.bB.base(), m.C, t);
        catalog.push_back(m);
    }
    {
        Matched2Reps m = base();
        m.RA.coeff({0, 1, 0}, 2) = Poly::constant(1, 1);
        m.RA.coeff({1, 0, 0}, 2) = Poly::constant(1, -1);
        catalog.push_back(m);
    }
    {
        Matched2Reps m = base();
        m.RB.coeff({0, 0, 0}, 1) = Poly::constant(1, 1);
        catalog.push_back(m);
    }
    {
        Matched2Reps m = base();
        auto t = cross_table(1);
        t[0][1] = frame_section(3, 1, 1);
        t[1][0] = -t[0][1];
        m.bA = DullBracket(m.bA.base(), t);
        catalog.push_back(m);
    }

    // mutations of the mirrored pair reach the axioms antisymmetric in B
    auto mirror = [] { return so3_mirror(1); };
    {
        Matched2Reps m = mirror();
        auto t = zero_table(1, 3, 3, 1);
        t[0][0][1] = Poly::constant(1, 1);
        m.nablaAB = Connection(m.bA.base(), m.bB.base().bundle, t);
        catalog.push_back(m);
    }
    {
        Matched2Reps m = mirror();
        auto t = zero_table(3, 1, 1, 1);
        t[0][0][0] = Poly::constant(1, 1);
        m.nablaBA = Connection(m.bB.base(), m.bA.base().bundle, t);
        catalog.push_back(m);
    }
    {
        Matched2Reps m = mirror();
        m.RB.coeff({0, 1, 0}, 2) = Poly::constant(1, 1);
        m.RB.coeff({1, 0, 0}, 2) = Poly::constant(1, -1);
        catalog.push_back(m);
    }
    {
        Matched2Reps m = mirror();
        m.RA.coeff({0, 0, 0}, 0) = Poly::constant(1, 1);
        catalog.push_back(m);
    }
    {
        Matched2Reps m = mirror();
        auto t = cross_table(1);
        t[0][0] = frame_section(3, 1, 0);
        m.nablaBC = Connection(m.bB.base(), m.C, t);
        catalog.push_back(m);
    }

    std::set<std::string> covered;
    for (const Matched2Reps& m : catalog) {
        Rng rng = seeded();
        CheckReport rep = check_matched_m(m, rng);
        if (rep.verdict()) {
            std::cout << "  [criterion 6] a mutation left all compatibility axioms intact"
                      << std::endl;
            ok = false;
            continue;
        }
        for (const CheckEntry& e : rep.entries)
            if (!e.pass) covered.insert(e.axiom);
        Rng rng2 = seeded();
        bool still_valid = false;
        try {
            still_valid = check_la_courant(la_courant_from_matched_2reps(m), rng2).verdict();
        } catch (const std::invalid_argument&) {
            // the mutated data no longer has the shape of an admissible
            // structure: the break is detected at construction time
        }
        if (still_valid) {
            std::cout << "  [criterion 6] a broken matched pair still yields a valid structure"
                      << std::endl;
            ok = false;
        }
    }
    for (const std::string& ax : {"m1", "m2", "m3", "m4", "m5", "m6", "m7"})
        if (!covered.count(ax)) {
            std::cout << "  [criterion 6] no mutation in the catalog breaks " << ax << std::endl;
            ok = false;
        }
    return ok;
}

// U = TM inside TM + T*M over three coordinates, full support, core = U°.
DoubleSubbundleData tm_double_sub() {
    DoubleSubbundleData d;
    RatMat ub(6, 3), kb(6, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        ub(i, i) = 1;
        kb(3 + i, i) = 1;
    }
    d.U = SubBundle(6, ub);
    d.Bp = SubBundle(3, RatMat::identity(3));
    d.K = SubBundle(6, kb);
    return d;
}

bool criterion7() {
    CourantData cd0 = make_exact_courant(3, TensorMap({3, 3, 3}, 0, 3, Symmetry::alt));
    LACourantSplit s0 = tangent_split(cd0);
    DoubleSubbundleData d = tm_double_sub();

    Rng r1 = seeded(), r2 = seeded(), r3 = seeded();
    CheckReport vb0 = check_vb_dirac(s0.lie2, d, r1);
    bool ok = vb0.verdict() && check_subalgebroid(s0.rep, d, r2).verdict() &&
              check_la_dirac(s0, d, r3).verdict();

    Rng r4 = seeded(), r5 = seeded();
    Matched2Reps restricted = restricted_matched_pair(s0, d);
    ok = ok && check_matched_m(restricted, r4).verdict();
    (void)r5;

    // switching on a constant twist must flip exactly one structure condition:
    // the bracket on the side bundle stops closing
    CourantData cdH = make_exact_courant(3, volume_h(3, Poly::constant(3, 5)));
    LACourantSplit sH = tangent_split(cdH);
    Rng r6 = seeded();
    CheckReport vbH = check_vb_dirac(sH.lie2, d, r6);
    std::set<std::string> flipped;
    for (const CheckEntry& e : vbH.entries)
        if (!e.pass) {
            const CheckEntry* before = vb0.find(e.axiom);
            if (before && before->pass) flipped.insert(e.axiom);
        }
    bool flip_ok = flipped == std::set<std::string>{"vbdirac_bracket_closes_in_side"};
    if (!flip_ok) {
        std::cout << "  [criterion 7] twisted instance flipped:";
        for (const std::string& ax : flipped) std::cout << " " << ax;
        std::cout << std::endl;
    }
    return ok && flip_ok && !vbH.verdict();
}

bool criterion8() {
    CourantData cd0 = make_exact_courant(3, TensorMap({3, 3, 3}, 0, 3, Symmetry::alt));
    RatMat ub(6, 3);
    for (std::size_t i = 0; i < 3; ++i) ub(i, i) = 1;
    SubBundle u(6, ub);
    Rng rng = seeded();
    PseudoDiracData pd = pseudo_dirac(cd0, flat_connection(3, cd0.E().bundle), u, rng);

    bool ok = true;
    for (const std::string& ax :
         {"pseudo_leibniz", "pseudo_metric", "pseudo_bracket_closes", "pseudo_flatness_form",
          "pseudo_jacobiator_formula", "pseudo_orthogonal_inside", "pseudo_orthogonal_parallel",
          "pseudo_quotient_flat"}) {
        const CheckEntry* e = pd.report.find(ax);
        if (!e || !e->pass) {
            std::cout << "  [criterion 8] " << ax << " fails" << std::endl;
            ok = false;
        }
    }
    // the invariant derivatives vanish identically, so the flatness form is 0
    for (const auto& row : pd.nabla_p)
        for (const Section& s : row) ok = ok && is_zero(s);
    return ok;
}

bool criterion9() {
    auto t0 = std::chrono::steady_clock::now();
    CourantData cd0 = make_exact_courant(3, TensorMap({3, 3, 3}, 0, 3, Symmetry::alt));
    LACourantSplit s0 = tangent_split(cd0);
    RatMat ub(6, 3);
    for (std::size_t i = 0; i < 3; ++i) ub(i, i) = 1;
    ManinPairData mp = manin_pair(s0, ub);
    Rng rng = seeded();
    bool ok = check_manin_pair(s0, mp, rng).verdict();
    Rng rng2 = seeded();
    ok = ok && check_courant(mp.courant, true, rng2).verdict();
    return ok && seconds_since(t0) < 60.0;
}

bool criterion10() {
    Rng rng = seeded();
    const std::size_t r = 3, nv = 2;
    bool ok = true;

    // Jacobiator = adjoint of the dual-connection curvature, on random
    // skew bracket tables with random anchors
    for (int trial = 0; trial < 20 && ok; ++trial) {
        auto c = zero_table(r, r, r, nv);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = i + 1; j < r; ++j)
                for (std::size_t k = 0; k < r; ++k) {
                    c[i][j][k] = random_poly(nv, rng);
                    c[j][i][k] = -c[i][j][k];
                }
        std::vector<Section> anchor(r, zero_section(nv, nv));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t l = 0; l < nv; ++l) anchor[i][l] = random_poly(nv, rng);
        DullBracket d(AnchoredBundle({"Q", r, nv}, anchor), c);
        for (std::size_t i = 0; i < r && ok; ++i)
            for (std::size_t j = 0; j < r && ok; ++j)
                for (std::size_t k = 0; k < r && ok; ++k)
                    for (std::size_t t = 0; t < r && ok; ++t) {
                        Section q3 = frame_section(r, nv, k);
                        Poly lhs = pair(d.jacobiator(frame_section(r, nv, i),
                                                     frame_section(r, nv, j), q3),
                                        frame_section(r, nv, t));
                        Poly rhs = pair(q3, d.dorfman_curvature(frame_section(r, nv, i),
                                                                frame_section(r, nv, j),
                                                                frame_section(r, nv, t)));
                        if (!(lhs - rhs).is_zero()) {
                            std::cout << "  [criterion 10] Jacobiator-curvature identity fails"
                                      << std::endl;
                            ok = false;
                        }
                    }
    }

    // the derived connection preserves exact dual sections, on random
    // anchor-compatible brackets (TM + trivial line, bracket values in the
    // trivial part)
    for (int trial = 0; trial < 20 && ok; ++trial) {
        auto c = zero_table(r, r, r, nv);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = i + 1; j < r; ++j) {
                c[i][j][2] = random_poly(nv, rng);
                c[j][i][2] = -c[i][j][2];
            }
        std::vector<Section> anchor(r, zero_section(nv, nv));
        for (std::size_t l = 0; l < nv; ++l) anchor[l] = frame_section(nv, nv, l);
        DullBracket d(AnchoredBundle({"Q", r, nv}, anchor), c);
        Poly f = random_poly(nv, rng);
        Poly g = random_poly(nv, rng);
        Section rdf = d.base().rho_star(differential(f));
        for (std::size_t i = 0; i < r && ok; ++i)
            for (int scaled = 0; scaled < 2 && ok; ++scaled) {
                Section q = frame_section(r, nv, i);
                if (scaled) q = g * q;
                Section lhs = d.dorfman(q, rdf);
                Section rhs = d.base().rho_star(differential(d.base().rho(q, f)));
                if (!section_eq(lhs, rhs)) {
                    std::cout << "  [criterion 10] exact-section identity fails" << std::endl;
                    ok = false;
                }
                // the Jacobiator-curvature identity is tensorial here, so
                // scaled arguments are covered on this family
                for (std::size_t j = 0; j < r && ok; ++j)
                    for (std::size_t t = 0; t < r && ok; ++t) {
                        Poly l2 = pair(d.jacobiator(frame_section(r, nv, j),
                                                    frame_section(r, nv, (j + 1) % r), q),
                                       frame_section(r, nv, t));
                        Poly r2 = pair(q, d.dorfman_curvature(frame_section(r, nv, j),
                                                              frame_section(r, nv, (j + 1) % r),
                                                              frame_section(r, nv, t)));
                        if (!(l2 - r2).is_zero()) {
                            std::cout << "  [criterion 10] Jacobiator-curvature identity fails "
                                         "on the compatible family"
                                      << std::endl;
                            ok = false;
                        }
                    }
            }
    }
    return ok;
}

} // namespace

int main() {
    std::vector<Criterion> results;
    std::vector<CorpusEntry> corpus = build_corpus();

    report(results, 1, "Courant axioms on generators with a mutation witness", criterion1());
    report(results, 2, "matched-pair verdicts agree with graded compatibility on the corpus",
           criterion2(corpus));
    report(results, 3, "homological derivation squares to zero exactly when all conditions hold",
           criterion3(corpus));
    report(results, 4, "core structures satisfy the degenerate axioms and are splitting-invariant",
           criterion4(corpus));
    report(results, 5, "tangent prolongation core recovers the initial bracket", criterion5());
    report(results, 6, "matched pairs build valid structures; single-axiom breaks are detected",
           criterion6());
    report(results, 7, "side-bundle Dirac checks and restriction; twist flips one condition",
           criterion7());
    report(results, 8, "pseudo-Dirac conditions, vanishing flatness form, Jacobiator formula",
           criterion8());
    report(results, 9, "quotient pair passes all Courant and morphism checks", criterion9());
    report(results, 10, "bracket-curvature and exact-section identities on random brackets",
           criterion10());

    int failed = 0;
    for (const Criterion& c : results)
        if (!c.pass) ++failed;
    std::cout << (failed == 0 ? "ACCEPTANCE: all criteria pass"
                              : "ACCEPTANCE: " + std::to_string(failed) + " criteria fail")
              << std::endl;
    return failed == 0 ? 0 : 1;
}
