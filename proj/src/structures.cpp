#include "lakit/structures.hpp"

#include <stdexcept>

namespace lakit {

namespace {

Poly poly_det(const PolyMat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("poly_det: square matrix expected");
    const std::size_t n = m.rows();
    if (n == 0) return Poly::constant(m.nvars(), 1);
    if (n == 1) return m.at(0, 0);
    Poly acc(m.nvars());
    for (std::size_t j = 0; j < n; ++j) {
        if (m.at(0, j).is_zero()) continue;
        PolyMat minor(n - 1, n - 1, m.nvars());
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                minor.at(r - 1, cc++) = m.at(r, c);
            }
        }
        Poly term = m.at(0, j) * poly_det(minor);
        acc += (j % 2 == 0) ? term : -term;
    }
    return acc;
}

// Wrap a scalar identity discrepancy as a one-component section so the
// report helper can extract witnesses uniformly.
Section as_section(const Poly& p) { return Section{p}; }

// An axiom whose quantifier ranges are empty produces no entries; record it
// as vacuously passed so every checker reports a fixed set of axioms.
void ensure_entries(CheckReport& rep, std::initializer_list<const char*> axioms) {
    for (const char* ax : axioms)
        if (!rep.find(ax)) rep.add_pass(ax);
}

} // namespace

CourantData::CourantData(AnchoredBundle e, PolyMat pairing, std::vector<Section> dcomp,
                         std::vector<std::vector<Section>> bracket_table)
    : e_(std::move(e)), pairing_(std::move(pairing)), dcomp_(std::move(dcomp)),
      c_(std::move(bracket_table)) {
    const std::size_t r = e_.rank();
    if (pairing_.rows() != r || pairing_.cols() != r)
        throw std::invalid_argument("CourantData: pairing shape");
    if (!pairing_.is_symmetric()) throw std::invalid_argument("CourantData: pairing not symmetric");
    if (dcomp_.size() != e_.nvars())
        throw std::invalid_argument("CourantData: one D-image per base coordinate");
    for (const auto& s : dcomp_)
        if (s.size() != r) throw std::invalid_argument("CourantData: D-image rank");
    if (c_.size() != r) throw std::invalid_argument("CourantData: bracket table shape");
    for (const auto& row : c_) {
        if (row.size() != r) throw std::invalid_argument("CourantData: bracket table shape");
        for (const auto& s : row)
            if (s.size() != r) throw std::invalid_argument("CourantData: bracket coefficient rank");
    }
    // <D x_l, e_i> = rho(e_i)(x_l); since D and rho(e_i) are both
    // derivation-type in f, coordinates decide the identity for every f.
    for (std::size_t l = 0; l < e_.nvars(); ++l)
        for (std::size_t i = 0; i < r; ++i) {
            Poly lhs = pair_op(dcomp_[l], e_.bundle.frame(i));
            Poly rhs = e_.anchor[i].at(l);
            if (lhs != rhs)
                throw std::invalid_argument("CourantData: <Df,e> = rho(e)(f) fails on coordinates");
        }
}

Poly CourantData::pair_op(const Section& e1, const Section& e2) const {
    if (e1.size() != rank() || e2.size() != rank())
        throw std::invalid_argument("CourantData::pair_op: rank mismatch");
    Poly acc(nvars());
    for (std::size_t i = 0; i < rank(); ++i)
        for (std::size_t j = 0; j < rank(); ++j) {
            if (pairing_.at(i, j).is_zero()) continue;
            acc += pairing_.at(i, j) * e1[i] * e2[j];
        }
    return acc;
}

Section CourantData::Dmap(const Poly& f) const {
    Section out = e_.bundle.zero();
    for (std::size_t l = 0; l < e_.nvars(); ++l) {
        Poly dl = f.derivative(l);
        if (!dl.is_zero()) out = out + dl * dcomp_[l];
    }
    return out;
}

Section CourantData::bracket(const Section& e1, const Section& e2) const {
    const std::size_t r = rank();
    if (e1.size() != r || e2.size() != r)
        throw std::invalid_argument("CourantData::bracket: rank mismatch");
    Section out = e_.bundle.zero();
    for (std::size_t i = 0; i < r; ++i) {
        if (e1[i].is_zero()) continue;
        for (std::size_t j = 0; j < r; ++j) {
            Poly s = e1[i] * e2[j];
            if (!s.is_zero()) out = out + s * c_[i][j];
        }
    }
    Section rho1 = e_.anchor_of(e1), rho2 = e_.anchor_of(e2);
    for (std::size_t j = 0; j < r; ++j) out[j] += apply_derivation(rho1, e2[j]);
    for (std::size_t i = 0; i < r; ++i) out[i] -= apply_derivation(rho2, e1[i]);
    for (std::size_t i = 0; i < r; ++i) {
        if (e1[i].is_constant()) continue;
        out = out + pair_op(e_.bundle.frame(i), e2) * Dmap(e1[i]);
    }
    return out;
}

SplitLie2::SplitLie2(DullBracket d, FreeModule b, PolyMat db, Connection n, TensorMap w)
    : dull(std::move(d)), B(std::move(b)), dB(std::move(db)), nabla(std::move(n)),
      omega(std::move(w)) {
    if (dB.rows() != B.rank || dB.cols() != dull.rank())
        throw std::invalid_argument("SplitLie2: dB shape");
    if (nabla.acting().rank() != dull.rank() || nabla.space().rank != B.rank)
        throw std::invalid_argument("SplitLie2: nabla shape");
    if (omega.arity() != 3 || omega.out_rank() != B.rank ||
        omega.arg_ranks() != std::vector<std::size_t>(3, dull.rank()))
        throw std::invalid_argument("SplitLie2: omega shape");
    if (omega.symmetry() != Symmetry::alt)
        throw std::invalid_argument("SplitLie2: omega must be tagged alternating");
    omega.validate();
    if (B.nvars != dull.nvars()) throw std::invalid_argument("SplitLie2: base mismatch");
}

Section SplitLie2::omega_pair(const Section& q1, const Section& q2, const Section& b) const {
    Section out = zero_section(rank_q(), nvars());
    for (std::size_t k = 0; k < rank_q(); ++k)
        out[k] = pair(omega.eval({q1, q2, dull.base().bundle.frame(k)}), b);
    return out;
}

SelfDual2Rep::SelfDual2Rep(DullBracket b, FreeModule q, PolyMat dq, Connection nq, Connection nqs,
                           TensorMap r)
    : bB(std::move(b)), Q(std::move(q)), dQ(std::move(dq)), nablaQ(std::move(nq)),
      nablaQstar(std::move(nqs)), R(std::move(r)) {
    if (dQ.rows() != Q.rank || dQ.cols() != Q.rank)
        throw std::invalid_argument("SelfDual2Rep: dQ shape");
    if (nablaQ.acting().rank() != bB.rank() || nablaQ.space().rank != Q.rank)
        throw std::invalid_argument("SelfDual2Rep: nablaQ shape");
    if (nablaQstar.acting().rank() != bB.rank() || nablaQstar.space().rank != Q.rank)
        throw std::invalid_argument("SelfDual2Rep: nablaQstar shape");
    if (R.arity() != 3 || R.out_rank() != Q.rank ||
        R.arg_ranks() != std::vector<std::size_t>{bB.rank(), bB.rank(), Q.rank})
        throw std::invalid_argument("SelfDual2Rep: R shape");
    if (Q.nvars != bB.nvars()) throw std::invalid_argument("SelfDual2Rep: base mismatch");
}

Section SelfDual2Rep::R_of(const Section& b1, const Section& b2, const Section& q) const {
    return R.eval({b1, b2, q});
}

LACourantSplit::LACourantSplit(SplitLie2 l, SelfDual2Rep r) : lie2(std::move(l)), rep(std::move(r)) {
    if (lie2.rank_q() != rep.rank_q() || lie2.rank_b() != rep.rank_b() ||
        lie2.nvars() != rep.nvars())
        throw std::invalid_argument("LACourantSplit: components must share Q, B and base");
}

Matched2Reps::Matched2Reps(DullBracket a, DullBracket b, FreeModule c, PolyMat da, PolyMat db,
                           Connection nab, Connection nac, Connection nba, Connection nbc,
                           TensorMap ra, TensorMap rb)
    : bA(std::move(a)), bB(std::move(b)), C(std::move(c)), dA(std::move(da)), dB(std::move(db)),
      nablaAB(std::move(nab)), nablaAC(std::move(nac)), nablaBA(std::move(nba)),
      nablaBC(std::move(nbc)), RA(std::move(ra)), RB(std::move(rb)) {
    if (dA.rows() != bA.rank() || dA.cols() != C.rank)
        throw std::invalid_argument("Matched2Reps: dA shape");
    if (dB.rows() != bB.rank() || dB.cols() != C.rank)
        throw std::invalid_argument("Matched2Reps: dB shape");
    if (nablaAB.acting().rank() != bA.rank() || nablaAB.space().rank != bB.rank() ||
        nablaAC.acting().rank() != bA.rank() || nablaAC.space().rank != C.rank ||
        nablaBA.acting().rank() != bB.rank() || nablaBA.space().rank != bA.rank() ||
        nablaBC.acting().rank() != bB.rank() || nablaBC.space().rank != C.rank)
        throw std::invalid_argument("Matched2Reps: connection shapes");
    if (RA.arg_ranks() != std::vector<std::size_t>{bA.rank(), bA.rank(), bB.rank()} ||
        RA.out_rank() != C.rank)
        throw std::invalid_argument("Matched2Reps: RA shape");
    if (RB.arg_ranks() != std::vector<std::size_t>{bB.rank(), bB.rank(), bA.rank()} ||
        RB.out_rank() != C.rank)
        throw std::invalid_argument("Matched2Reps: RB shape");
}

// ---------------------------------------------------------------------------
// checkers

CheckReport check_courant(const CourantData& c, bool require_nondegenerate, Rng& rng) {
    CheckReport rep;
    const std::size_t r = c.rank();
    const std::size_t nv = c.nvars();
    Poly f = random_poly(nv, rng);
    const auto& M = c.E().bundle;

    auto each_pair = [&](auto&& fn) {
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                fn(M.frame(i), M.frame(j), std::vector<std::size_t>{i, j});
                fn(M.frame(i), f * M.frame(j), std::vector<std::size_t>{i, j});
                fn(f * M.frame(i), M.frame(j), std::vector<std::size_t>{i, j});
            }
    };

    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t k = 0; k < r; ++k)
                for (int scaled = 0; scaled < 2; ++scaled) {
                    Section e1 = M.frame(i), e2 = M.frame(j), e3 = M.frame(k);
                    if (scaled) e3 = f * e3;
                    rep.add_section_check("CA1",
                                          c.bracket(e1, c.bracket(e2, e3)) -
                                              c.bracket(c.bracket(e1, e2), e3) -
                                              c.bracket(e2, c.bracket(e1, e3)),
                                          {i, j, k});
                    rep.add_section_check(
                        "CA2",
                        as_section(c.E().rho(e1, c.pair_op(e2, e3)) -
                                   c.pair_op(c.bracket(e1, e2), e3) -
                                   c.pair_op(e2, c.bracket(e1, e3))),
                        {i, j, k});
                }

    each_pair([&](const Section& e1, const Section& e2, std::vector<std::size_t> fr) {
        rep.add_section_check("CA3",
                              c.bracket(e1, e2) + c.bracket(e2, e1) - c.Dmap(c.pair_op(e1, e2)),
                              fr);
        rep.add_section_check("CA4",
                              c.E().anchor_of(c.bracket(e1, e2)) -
                                  vf_bracket(c.E().anchor_of(e1), c.E().anchor_of(e2)),
                              fr);
        rep.add_section_check("CA5",
                              c.bracket(e1, f * e2) - f * c.bracket(e1, e2) -
                                  c.E().rho(e1, f) * e2,
                              fr);
    });
    ensure_entries(rep, {"CA1", "CA2", "CA3", "CA4", "CA5"});

    if (require_nondegenerate) {
        Poly det = poly_det(c.pairing_mat());
        if (!det.is_zero() && det.is_constant())
            rep.add_pass("nondegenerate");
        else if (det.is_zero())
            rep.add_fail("nondegenerate",
                         make_witness(Poly::constant(nv, 1), {})); // det == 0 identically
        else
            rep.add_fail("nondegenerate", make_witness(det, {}));
    }
    return rep;
}

CheckReport check_split_lie2(const SplitLie2& l, Rng& rng) {
    CheckReport rep;
    const std::size_t rq = l.rank_q(), rb = l.rank_b(), nv = l.nvars();
    const auto& Q = l.dull.base().bundle;
    Poly f = random_poly(nv, rng);
    Connection nabla_star = l.nabla.dual(); // Q-connection on B*
    FreeModule Bstar{"B*", rb, nv};

    // (i) coisotropy of the dual connection along the image of dB*
    for (std::size_t m = 0; m < rb; ++m)
        for (std::size_t n = 0; n < rb; ++n)
            for (int scaled = 0; scaled < 2; ++scaled) {
                Section b1 = frame_section(rb, nv, m);
                Section b2 = frame_section(rb, nv, n);
                if (scaled) b2 = f * b2;
                rep.add_section_check("lie2_i_dual_conn_isotropic",
                                      nabla_star.act(l.dBstar_of(b1), b2) +
                                          nabla_star.act(l.dBstar_of(b2), b1),
                                      {m, n});
            }

    // (ii) the bracket restricted to the image of dB* is the dual connection
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t n = 0; n < rb; ++n)
            for (int scaled = 0; scaled < 2; ++scaled) {
                Section q = Q.frame(i);
                Section beta = frame_section(rb, nv, n);
                if (scaled) beta = f * beta;
                rep.add_section_check("lie2_ii_bracket_on_dual_image",
                                      l.dull.bracket(q, l.dBstar_of(beta)) -
                                          l.dBstar_of(nabla_star.act(q, beta)),
                                      {i, n});
            }

    // (iii) Jacobiator realized by omega through dB*
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t j = 0; j < rq; ++j)
            for (std::size_t k = 0; k < rq; ++k)
                for (int scaled = 0; scaled < 2; ++scaled) {
                    Section q1 = Q.frame(i), q2 = Q.frame(j), q3 = Q.frame(k);
                    if (scaled) q3 = f * q3;
                    rep.add_section_check("lie2_iii_jacobiator_via_omega",
                                          l.dull.jacobiator(q1, q2, q3) -
                                              l.dBstar_of(l.omega.eval({q1, q2, q3})),
                                          {i, j, k});
                }

    // (iv) curvature of nabla realized by omega through dB
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t j = 0; j < rq; ++j)
            for (std::size_t m = 0; m < rb; ++m)
                for (int scaled = 0; scaled < 2; ++scaled) {
                    Section q1 = Q.frame(i), q2 = Q.frame(j);
                    Section b = frame_section(rb, nv, m);
                    if (scaled) b = f * b;
                    rep.add_section_check("lie2_iv_curvature_via_omega",
                                          l.nabla.curvature(l.dull, q1, q2, b) -
                                              l.dB_of(l.omega_pair(q1, q2, b)),
                                          {i, j, m});
                }

    // (v) omega closed for the dual connection
    {
        TensorMap dw = koszul_d(l.dull, nabla_star, l.omega);
        TensorMap zero(std::vector<std::size_t>(4, rq), rb, nv, Symmetry::alt);
        auto w = tensor_equal(dw, zero);
        if (w)
            rep.add_fail("lie2_v_omega_closed", *w);
        else
            rep.add_pass("lie2_v_omega_closed");
    }

    // derived: rho_Q vanishes on the image of dB*
    for (std::size_t n = 0; n < rb; ++n)
        rep.add_section_check("lie2_anchor_kills_dual_image",
                              l.dull.base().anchor_of(l.dBstar_of(frame_section(rb, nv, n))), {n});

    // derived: the Dorfman connection intertwines dB and nabla
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t a = 0; a < rq; ++a)
            for (int scaled = 0; scaled < 2; ++scaled) {
                Section q = Q.frame(i);
                Section tau = frame_section(rq, nv, a);
                if (scaled) tau = f * tau;
                rep.add_section_check("lie2_dorfman_intertwines",
                                      l.dB_of(l.dull.dorfman(q, tau)) -
                                          l.nabla.act(q, l.dB_of(tau)),
                                      {i, a});
            }

    // derived: dorfman curvature realized by omega through dB
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t j = 0; j < rq; ++j)
            for (std::size_t a = 0; a < rq; ++a)
                for (int scaled = 0; scaled < 2; ++scaled) {
                    Section q1 = Q.frame(i), q2 = Q.frame(j);
                    Section tau = frame_section(rq, nv, a);
                    if (scaled) tau = f * tau;
                    rep.add_section_check("lie2_omega_dorfman_curvature",
                                          l.omega_pair(q1, q2, l.dB_of(tau)) -
                                              l.dull.dorfman_curvature(q1, q2, tau),
                                          {i, j, a});
                }
    ensure_entries(rep, {"lie2_i_dual_conn_isotropic", "lie2_ii_bracket_on_dual_image",
                         "lie2_iii_jacobiator_via_omega", "lie2_iv_curvature_via_omega",
                         "lie2_anchor_kills_dual_image", "lie2_dorfman_intertwines",
                         "lie2_omega_dorfman_curvature"});
    return rep;
}

CheckReport check_selfdual_2rep(const SelfDual2Rep& r, Rng& rng) {
    CheckReport rep;
    const std::size_t rq = r.rank_q(), rb = r.rank_b(), nv = r.nvars();
    Poly f = random_poly(nv, rng);
    const auto& Bm = r.bB.base().bundle;

    // Jacobi identity for the bracket on B
    for (std::size_t m = 0; m < rb; ++m)
        for (std::size_t n = 0; n < rb; ++n)
            for (std::size_t p = 0; p < rb; ++p)
                for (int scaled = 0; scaled < 2; ++scaled) {
                    Section b3 = Bm.frame(p);
                    if (scaled) b3 = f * b3;
                    rep.add_section_check("B_jacobi",
                                          r.bB.jacobiator(Bm.frame(m), Bm.frame(n), b3),
                                          {m, n, p});
                }

    // self-duality: dQ is symmetric
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t j = 0; j < rq; ++j)
            rep.add_section_check("selfdual_partial_symmetric",
                                  as_section(r.dQ.at(i, j) - r.dQ.at(j, i)), {i, j});

    // self-duality: nablaQstar is the dual of nablaQ
    for (std::size_t m = 0; m < rb; ++m)
        for (std::size_t a = 0; a < rq; ++a)
            for (std::size_t i = 0; i < rq; ++i)
                for (int scaled = 0; scaled < 2; ++scaled) {
                    Section b = Bm.frame(m);
                    Section tau = frame_section(rq, nv, a);
                    Section q = frame_section(rq, nv, i);
                    if (scaled) q = f * q;
                    Poly disc = r.bB.base().rho(b, pair(tau, q)) -
                                pair(r.nablaQstar.act(b, tau), q) - pair(tau, r.nablaQ.act(b, q));
                    rep.add_section_check("selfdual_connections_dual", as_section(disc), {m, a, i});
                }

    // R is a two-form in the B slots
    for (std::size_t m = 0; m < rb; ++m)
        for (std::size_t n = 0; n < rb; ++n)
            for (std::size_t i = 0; i < rq; ++i)
                for (std::size_t j = 0; j < rq; ++j)
                    rep.add_section_check("R_alternating_base",
                                          as_section(r.R.coeff({m, n, i}, j) +
                                                     r.R.coeff({n, m, i}, j)),
                                          {m, n, i, j});

    // self-duality: R(b1,b2) is antisymmetric as a map Q -> Q*
    for (std::size_t m = 0; m < rb; ++m)
        for (std::size_t n = 0; n < rb; ++n)
            for (std::size_t i = 0; i < rq; ++i)
                for (std::size_t j = 0; j < rq; ++j)
                    rep.add_section_check("selfdual_R_antisymmetric",
                                          as_section(r.R.coeff({m, n, i}, j) +
                                                     r.R.coeff({m, n, j}, i)),
                                          {m, n, i, j});

    // 2-representation: dQ is a chain map for the two connections
    for (std::size_t m = 0; m < rb; ++m)
        for (std::size_t a = 0; a < rq; ++a)
            for (int scaled = 0; scaled < 2; ++scaled) {
                Section b = Bm.frame(m);
                Section tau = frame_section(rq, nv, a);
                if (scaled) tau = f * tau;
                rep.add_section_check("rep_chain_map",
                                      r.dQ_of(r.nablaQstar.act(b, tau)) -
                                          r.nablaQ.act(b, r.dQ_of(tau)),
                                      {m, a});
            }

    // 2-representation: curvatures are R composed with dQ on either side
    for (std::size_t m = 0; m < rb; ++m)
        for (std::size_t n = 0; n < rb; ++n)
            for (std::size_t a = 0; a < rq; ++a)
                for (int scaled = 0; scaled < 2; ++scaled) {
                    Section b1 = Bm.frame(m), b2 = Bm.frame(n);
                    Section tau = frame_section(rq, nv, a);
                    Section q = frame_section(rq, nv, a);
                    if (scaled) {
                        tau = f * tau;
                        q = f * q;
                    }
                    rep.add_section_check("rep_curvature_dual_side",
                                          r.nablaQstar.curvature(r.bB, b1, b2, tau) -
                                              r.R_of(b1, b2, r.dQ_of(tau)),
                                          {m, n, a});
                    rep.add_section_check("rep_curvature_vector_side",
                                          r.nablaQ.curvature(r.bB, b1, b2, q) -
                                              r.dQ_of(r.R_of(b1, b2, q)),
                                          {m, n, a});
                }

    // 2-representation: differential Bianchi identity d_nabla R = 0, where R
    // takes values in Hom(Q, Q*) with the induced connection.
    auto nabla_hom_R = [&](const Section& b, const Section& b1, const Section& b2,
                           const Section& q) {
        return r.nablaQstar.act(b, r.R_of(b1, b2, q)) - r.R_of(b1, b2, r.nablaQ.act(b, q));
    };
    for (std::size_t m = 0; m < rb; ++m)
        for (std::size_t n = 0; n < rb; ++n)
            for (std::size_t p = 0; p < rb; ++p)
                for (std::size_t i = 0; i < rq; ++i)
                    for (int scaled = 0; scaled < 2; ++scaled) {
                        Section b1 = Bm.frame(m), b2 = Bm.frame(n), b3 = Bm.frame(p);
                        Section q = frame_section(rq, nv, i);
                        if (scaled) q = f * q;
                        Section disc =
                            nabla_hom_R(b1, b2, b3, q) - nabla_hom_R(b2, b1, b3, q) +
                            nabla_hom_R(b3, b1, b2, q) -
                            r.R_of(r.bB.bracket(b1, b2), b3, q) +
                            r.R_of(r.bB.bracket(b1, b3), b2, q) -
                            r.R_of(r.bB.bracket(b2, b3), b1, q);
                        rep.add_section_check("rep_bianchi", disc, {m, n, p, i});
                    }
    ensure_entries(rep, {"B_jacobi", "selfdual_partial_symmetric", "selfdual_connections_dual",
                         "R_alternating_base", "selfdual_R_antisymmetric", "rep_chain_map",
                         "rep_curvature_dual_side", "rep_curvature_vector_side", "rep_bianchi"});
    return rep;
}

CheckReport check_matched_M(const LACourantSplit& s, Rng& rng) {
    CheckReport rep;
    const SplitLie2& l = s.lie2;
    const SelfDual2Rep& r = s.rep;
    const std::size_t rq = s.rank_q(), rb = s.rank_b(), nv = s.nvars();
    const auto& Qm = l.dull.base().bundle;
    const auto& Bm = r.bB.base().bundle;
    Poly f = random_poly(nv, rng);

    auto dBstar = [&](const Section& beta) { return l.dBstar_of(beta); };

    // M1: dQ(Delta_q tau) = nabla_{dB tau} q + [[q, dQ tau]] + dB*<tau, nabla_. q>
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t a = 0; a < rq; ++a)
            for (int scaled = 0; scaled < 2; ++scaled) {
                Section q = Qm.frame(i);
                Section tau = frame_section(rq, nv, a);
                if (scaled) tau = f * tau;
                Section beta = zero_section(rb, nv); // <tau, nabla_. q> in B*
                for (std::size_t m = 0; m < rb; ++m)
                    beta[m] = pair(tau, r.nablaQ.act(Bm.frame(m), q));
                Section disc = r.dQ_of(l.dull.dorfman(q, tau)) -
                               r.nablaQ.act(l.dB_of(tau), q) -
                               l.dull.bracket(q, r.dQ_of(tau)) - dBstar(beta);
                rep.add_section_check("M1", disc, {i, a});
            }

    // M2: dB(nabla*_b tau) = [b, dB tau] + nabla_{dQ tau} b
    for (std::size_t m = 0; m < rb; ++m)
        for (std::size_t a = 0; a < rq; ++a)
            for (int scaled = 0; scaled < 2; ++scaled) {
                Section b = Bm.frame(m);
                Section tau = frame_section(rq, nv, a);
                if (scaled) tau = f * tau;
                Section disc = l.dB_of(r.nablaQstar.act(b, tau)) -
                               r.bB.bracket(b, l.dB_of(tau)) - l.nabla.act(r.dQ_of(tau), b);
                rep.add_section_check("M2", disc, {m, a});
            }

    // M3
    for (std::size_t m = 0; m < rb; ++m)
        for (std::size_t n = 0; n < rb; ++n)
            for (std::size_t i = 0; i < rq; ++i)
                for (int scaled = 0; scaled < 2; ++scaled) {
                    Section b1 = Bm.frame(m), b2 = Bm.frame(n);
                    Section q = Qm.frame(i);
                    if (scaled) q = f * q;
                    Section disc = l.dB_of(r.R_of(b1, b2, q)) +
                                   l.nabla.act(q, r.bB.bracket(b1, b2)) -
                                   r.bB.bracket(l.nabla.act(q, b1), b2) -
                                   r.bB.bracket(b1, l.nabla.act(q, b2)) -
                                   l.nabla.act(r.nablaQ.act(b2, q), b1) +
                                   l.nabla.act(r.nablaQ.act(b1, q), b2);
                    rep.add_section_check("M3", disc, {m, n, i});
                }

    // M4
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t j = 0; j < rq; ++j)
            for (std::size_t m = 0; m < rb; ++m)
                for (int scaled = 0; scaled < 2; ++scaled) {
                    Section q1 = Qm.frame(i), q2 = Qm.frame(j);
                    Section b = Bm.frame(m);
                    if (scaled) q2 = f * q2;
                    Section beta = zero_section(rb, nv); // <R(., b) q1, q2> in B*
                    for (std::size_t n = 0; n < rb; ++n)
                        beta[n] = pair(r.R_of(Bm.frame(n), b, q1), q2);
                    Section disc = r.dQ_of(l.omega_pair(q1, q2, b)) +
                                   r.nablaQ.act(b, l.dull.bracket(q1, q2)) -
                                   l.dull.bracket(q1, r.nablaQ.act(b, q2)) -
                                   l.dull.bracket(r.nablaQ.act(b, q1), q2) -
                                   r.nablaQ.act(l.nabla.act(q2, b), q1) +
                                   r.nablaQ.act(l.nabla.act(q1, b), q2) - dBstar(beta);
                    rep.add_section_check("M4", disc, {i, j, m});
                }

    // M5, in the expanded section-wise form
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t j = 0; j < rq; ++j)
            for (std::size_t m = 0; m < rb; ++m)
                for (std::size_t n = 0; n < rb; ++n)
                    for (int scaled = 0; scaled < 2; ++scaled) {
                        Section q1 = Qm.frame(i), q2 = Qm.frame(j);
                        Section b1 = Bm.frame(m), b2 = Bm.frame(n);
                        if (scaled) q2 = f * q2;
                        Section lhs =
                            r.nablaQstar.act(b2, l.omega_pair(q1, q2, b1)) -
                            r.nablaQstar.act(b1, l.omega_pair(q1, q2, b2)) +
                            l.omega_pair(q1, q2, r.bB.bracket(b1, b2)) +
                            l.omega_pair(r.nablaQ.act(b1, q1), q2, b2) +
                            l.omega_pair(q1, r.nablaQ.act(b1, q2), b2) -
                            l.omega_pair(r.nablaQ.act(b2, q1), q2, b1) -
                            l.omega_pair(q1, r.nablaQ.act(b2, q2), b1) +
                            l.dull.dorfman(q1, r.R_of(b1, b2, q2)) -
                            l.dull.dorfman(q2, r.R_of(b1, b2, q1)) -
                            r.R_of(b1, b2, l.dull.bracket(q1, q2)) -
                            r.R_of(l.nabla.act(q1, b1), b2, q2) -
                            r.R_of(b1, l.nabla.act(q1, b2), q2) +
                            r.R_of(l.nabla.act(q2, b1), b2, q1) +
                            r.R_of(b1, l.nabla.act(q2, b2), q1);
                        Section rhs = zero_section(rq, nv);
                        for (std::size_t k = 0; k < rq; ++k)
                            rhs[k] = pair(r.R_of(b1, l.nabla.act(Qm.frame(k), b2), q1), q2) +
                                     pair(r.R_of(l.nabla.act(Qm.frame(k), b1), b2, q1), q2);
                        rhs = rhs - l.dull.base().rho_star(
                                        differential(pair(r.R_of(b1, b2, q1), q2)));
                        rep.add_section_check("M5", lhs - rhs, {i, j, m, n});
                    }

    // derived: anchors agree through the core maps
    for (std::size_t a = 0; a < rq; ++a) {
        Section tau = frame_section(rq, nv, a);
        rep.add_section_check("anchors_agree_on_core",
                              l.dull.base().anchor_of(r.dQ_of(tau)) -
                                  r.bB.base().anchor_of(l.dB_of(tau)),
                              {a});
    }

    // derived: mixed anchors bracket to the difference of the connections
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t m = 0; m < rb; ++m)
            for (int scaled = 0; scaled < 2; ++scaled) {
                Section q = Qm.frame(i);
                Section b = Bm.frame(m);
                if (scaled) b = f * b;
                Section disc =
                    vf_bracket(l.dull.base().anchor_of(q), r.bB.base().anchor_of(b)) -
                    r.bB.base().anchor_of(l.nabla.act(q, b)) +
                    l.dull.base().anchor_of(r.nablaQ.act(b, q));
                rep.add_section_check("mixed_anchors", disc, {i, m});
            }

    // derived: symmetric part of the induced core bracket is exact
    for (std::size_t a = 0; a < rq; ++a)
        for (std::size_t bidx = 0; bidx < rq; ++bidx)
            for (int scaled = 0; scaled < 2; ++scaled) {
                Section t1 = frame_section(rq, nv, a);
                Section t2 = frame_section(rq, nv, bidx);
                if (scaled) t2 = f * t2;
                Section disc = l.dull.dorfman(r.dQ_of(t1), t2) -
                               r.nablaQstar.act(l.dB_of(t2), t1) +
                               l.dull.dorfman(r.dQ_of(t2), t1) -
                               r.nablaQstar.act(l.dB_of(t1), t2) -
                               l.dull.base().rho_star(differential(pair(t1, r.dQ_of(t2))));
                rep.add_section_check("core_symmetric_part", disc, {a, bidx});
            }

    // derived: commutator of the Dorfman connection with the dual connection
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t m = 0; m < rb; ++m)
            for (std::size_t a = 0; a < rq; ++a)
                for (int scaled = 0; scaled < 2; ++scaled) {
                    Section q = Qm.frame(i);
                    Section b = Bm.frame(m);
                    Section tau = frame_section(rq, nv, a);
                    if (scaled) tau = f * tau;
                    Section lhs = l.omega_pair(q, r.dQ_of(tau), b) - r.R_of(b, l.dB_of(tau), q);
                    Section rhs = l.dull.dorfman(q, r.nablaQstar.act(b, tau)) -
                                  r.nablaQstar.act(b, l.dull.dorfman(q, tau)) +
                                  l.dull.dorfman(r.nablaQ.act(b, q), tau) -
                                  r.nablaQstar.act(l.nabla.act(q, b), tau);
                    Section corr = zero_section(rq, nv);
                    for (std::size_t k = 0; k < rq; ++k)
                        corr[k] = pair(r.nablaQ.act(l.nabla.act(Qm.frame(k), b), q), tau);
                    rep.add_section_check("dorfman_dual_commutator", lhs - rhs + corr, {i, m, a});
                }
    ensure_entries(rep, {"M1", "M2", "M3", "M4", "M5", "anchors_agree_on_core",
                         "mixed_anchors", "core_symmetric_part", "dorfman_dual_commutator"});
    return rep;
}

CheckReport check_matched_m(const Matched2Reps& mp, Rng& rng) {
    CheckReport rep;
    const std::size_t ra = mp.bA.rank(), rb = mp.bB.rank(), rc = mp.C.rank, nv = mp.C.nvars;
    const auto& Am = mp.bA.base().bundle;
    const auto& Bm = mp.bB.base().bundle;
    Poly f = random_poly(nv, rng);
    auto cframe = [&](std::size_t k) { return frame_section(rc, nv, k); };

    // m1
    for (std::size_t k1 = 0; k1 < rc; ++k1)
        for (std::size_t k2 = 0; k2 < rc; ++k2)
            for (int scaled = 0; scaled < 2; ++scaled) {
                Section c1 = cframe(k1), c2 = cframe(k2);
                if (scaled) c2 = f * c2;
                Section disc = mp.nablaAC.act(mp.dA.apply(c1), c2) -
                               mp.nablaBC.act(mp.dB.apply(c2), c1) +
                               mp.nablaAC.act(mp.dA.apply(c2), c1) -
                               mp.nablaBC.act(mp.dB.apply(c1), c2);
                rep.add_section_check("m1", disc, {k1, k2});
            }

    // m2
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t k = 0; k < rc; ++k)
            for (int scaled = 0; scaled < 2; ++scaled) {
                Section a = Am.frame(i);
                Section c = cframe(k);
                if (scaled) c = f * c;
                Section disc = mp.bA.bracket(a, mp.dA.apply(c)) -
                               mp.dA.apply(mp.nablaAC.act(a, c)) +
                               mp.nablaBA.act(mp.dB.apply(c), a);
                rep.add_section_check("m2", disc, {i, k});
            }

    // m3
    for (std::size_t j = 0; j < rb; ++j)
        for (std::size_t k = 0; k < rc; ++k)
            for (int scaled = 0; scaled < 2; ++scaled) {
                Section b = Bm.frame(j);
                Section c = cframe(k);
                if (scaled) c = f * c;
                Section disc = mp.bB.bracket(b, mp.dB.apply(c)) -
                               mp.dB.apply(mp.nablaBC.act(b, c)) +
                               mp.nablaAB.act(mp.dA.apply(c), b);
                rep.add_section_check("m3", disc, {j, k});
            }

    // m4
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = 0; j < rb; ++j)
            for (std::size_t k = 0; k < rc; ++k)
                for (int scaled = 0; scaled < 2; ++scaled) {
                    Section a = Am.frame(i);
                    Section b = Bm.frame(j);
                    Section c = cframe(k);
                    if (scaled) c = f * c;
                    Section disc = mp.nablaBC.act(b, mp.nablaAC.act(a, c)) -
                                   mp.nablaAC.act(a, mp.nablaBC.act(b, c)) -
                                   mp.nablaAC.act(mp.nablaBA.act(b, a), c) +
                                   mp.nablaBC.act(mp.nablaAB.act(a, b), c) -
                                   mp.RB.eval({b, mp.dB.apply(c), a}) +
                                   mp.RA.eval({a, mp.dA.apply(c), b});
                    rep.add_section_check("m4", disc, {i, j, k});
                }

    // m5
    for (std::size_t i1 = 0; i1 < ra; ++i1)
        for (std::size_t i2 = 0; i2 < ra; ++i2)
            for (std::size_t j = 0; j < rb; ++j)
                for (int scaled = 0; scaled < 2; ++scaled) {
                    Section a1 = Am.frame(i1), a2 = Am.frame(i2);
                    Section b = Bm.frame(j);
                    if (scaled) a2 = f * a2;
                    Section disc = mp.dA.apply(mp.RA.eval({a1, a2, b})) +
                                   mp.nablaBA.act(b, mp.bA.bracket(a1, a2)) -
                                   mp.bA.bracket(mp.nablaBA.act(b, a1), a2) -
                                   mp.bA.bracket(a1, mp.nablaBA.act(b, a2)) -
                                   mp.nablaBA.act(mp.nablaAB.act(a2, b), a1) +
                                   mp.nablaBA.act(mp.nablaAB.act(a1, b), a2);
                    rep.add_section_check("m5", disc, {i1, i2, j});
                }

    // m6
    for (std::size_t j1 = 0; j1 < rb; ++j1)
        for (std::size_t j2 = 0; j2 < rb; ++j2)
            for (std::size_t i = 0; i < ra; ++i)
                for (int scaled = 0; scaled < 2; ++scaled) {
                    Section b1 = Bm.frame(j1), b2 = Bm.frame(j2);
                    Section a = Am.frame(i);
                    if (scaled) b2 = f * b2;
                    Section disc = mp.dB.apply(mp.RB.eval({b1, b2, a})) +
                                   mp.nablaAB.act(a, mp.bB.bracket(b1, b2)) -
                                   mp.bB.bracket(mp.nablaAB.act(a, b1), b2) -
                                   mp.bB.bracket(b1, mp.nablaAB.act(a, b2)) -
                                   mp.nablaAB.act(mp.nablaBA.act(b2, a), b1) +
                                   mp.nablaAB.act(mp.nablaBA.act(b1, a), b2);
                    rep.add_section_check("m6", disc, {j1, j2, i});
                }

    // m7: d_{nabla^A} R_B = d_{nabla^B} R_A in Omega^2(A, Lambda^2 B* (x) C),
    // with R_B read as a one-form on A valued in Lambda^2 B* (x) C.
    auto nablaA_on_RB = [&](const Section& a, const Section& ax, const Section& b1,
                            const Section& b2) {
        // (nabla^A_a R_B(ax))(b1,b2)
        return mp.nablaAC.act(a, mp.RB.eval({b1, b2, ax})) -
               mp.RB.eval({mp.nablaAB.act(a, b1), b2, ax}) -
               mp.RB.eval({b1, mp.nablaAB.act(a, b2), ax});
    };
    auto nablaB_on_RA = [&](const Section& b, const Section& bx, const Section& a1,
                            const Section& a2) {
        return mp.nablaBC.act(b, mp.RA.eval({a1, a2, bx})) -
               mp.RA.eval({mp.nablaBA.act(b, a1), a2, bx}) -
               mp.RA.eval({a1, mp.nablaBA.act(b, a2), bx});
    };
    for (std::size_t i1 = 0; i1 < ra; ++i1)
        for (std::size_t i2 = 0; i2 < ra; ++i2)
            for (std::size_t j1 = 0; j1 < rb; ++j1)
                for (std::size_t j2 = 0; j2 < rb; ++j2)
                    for (int scaled = 0; scaled < 2; ++scaled) {
                        Section a1 = Am.frame(i1), a2 = Am.frame(i2);
                        Section b1 = Bm.frame(j1), b2 = Bm.frame(j2);
                        if (scaled) a2 = f * a2;
                        Section lhs = nablaA_on_RB(a1, a2, b1, b2) - nablaA_on_RB(a2, a1, b1, b2) -
                                      mp.RB.eval({b1, b2, mp.bA.bracket(a1, a2)});
                        Section rhs = nablaB_on_RA(b1, b2, a1, a2) - nablaB_on_RA(b2, b1, a1, a2) -
                                      mp.RA.eval({a1, a2, mp.bB.bracket(b1, b2)});
                        rep.add_section_check("m7", lhs - rhs, {i1, i2, j1, j2});
                    }
    ensure_entries(rep, {"m1", "m2", "m3", "m4", "m5", "m6", "m7"});
    return rep;
}

CheckReport check_la_courant(const LACourantSplit& s, Rng& rng) {
    CheckReport rep;
    rep.merge(check_selfdual_2rep(s.rep, rng));
    rep.merge(check_split_lie2(s.lie2, rng));
    rep.merge(check_matched_M(s, rng));
    return rep;
}

} // namespace lakit
