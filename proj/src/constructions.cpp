#include "lakit/constructions.hpp"

#include <stdexcept>

#include "lakit/exactla.hpp"

namespace lakit {

namespace {

// rho^* of a base one-form through the pairing of a Courant algebroid with a
// constant Gram matrix: <rho* theta, e>_E = theta(rho(e)).
Section pairing_rho_star(const AnchoredBundle& e, const RatMat& ginv, const Section& theta) {
    const std::size_t n = e.rank();
    Section v(n, Poly(e.nvars()));
    for (std::size_t k = 0; k < n; ++k) v[k] = pair(theta, e.anchor[k]);
    Section out(n, Poly(e.nvars()));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t k = 0; k < n; ++k) out[a] += ginv(a, k) * v[k];
    return out;
}

RatMat constant_gram(const PolyMat& pairing) {
    if (!pairing.is_constant())
        throw std::invalid_argument("tangent prolongation: pairing must have constant coefficients");
    RatMat g(pairing.rows(), pairing.cols());
    for (std::size_t i = 0; i < pairing.rows(); ++i)
        for (std::size_t j = 0; j < pairing.cols(); ++j) g(i, j) = pairing.at(i, j).constant_value();
    return g;
}

// phi(b, q): contract the B* slot of the splitting change with b and the
// first Q slot with q, giving a section of Q*.
Section phi_contract(const TensorMap& phi, const Section& b, const Section& q) {
    const std::size_t rq = phi.arg_ranks()[0];
    const std::size_t rb = phi.out_rank();
    Section out(rq, Poly(phi.nvars()));
    for (std::size_t j = 0; j < rq; ++j)
        for (std::size_t i = 0; i < rq; ++i)
            for (std::size_t m = 0; m < rb; ++m) out[j] += phi.coeff({i, j}, m) * q[i] * b[m];
    return out;
}

std::vector<std::vector<Section>> core_table(const DullBracket& dull, const Connection& nqs,
                                             const PolyMat& dQ, const PolyMat& dB) {
    const std::size_t rq = dull.rank(), nv = dull.nvars();
    std::vector<std::vector<Section>> c(rq, std::vector<Section>(rq));
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t j = 0; j < rq; ++j) {
            Section ti = frame_section(rq, nv, i), tj = frame_section(rq, nv, j);
            c[i][j] = dull.dorfman(dQ.apply(ti), tj) - nqs.act(dB.apply(tj), ti);
        }
    return c;
}

} // namespace

Section core_bracket(const LACourantSplit& s, const Section& tau1, const Section& tau2) {
    return s.lie2.dull.dorfman(s.rep.dQ.apply(tau1), tau2) -
           s.rep.nablaQstar.act(s.lie2.dB.apply(tau2), tau1);
}

CourantData core_degenerate_courant(const LACourantSplit& s) {
    const std::size_t rq = s.rank_q(), nv = s.nvars();
    const AnchoredBundle& q = s.lie2.dull.base();

    std::vector<Section> anchor(rq);
    for (std::size_t i = 0; i < rq; ++i)
        anchor[i] = q.anchor_of(s.rep.dQ.apply(frame_section(rq, nv, i)));
    AnchoredBundle core({"core(" + q.bundle.name + ")", rq, nv}, anchor);

    PolyMat pairing = s.rep.dQ;

    std::vector<Section> dcomp(nv);
    for (std::size_t l = 0; l < nv; ++l)
        dcomp[l] = q.rho_star(differential(Poly::variable(nv, l)));

    return CourantData(std::move(core), std::move(pairing), std::move(dcomp),
                       core_table(s.lie2.dull, s.rep.nablaQstar, s.rep.dQ, s.lie2.dB));
}

CheckReport check_core_identities(const LACourantSplit& s, Rng& rng) {
    CheckReport rep;
    const std::size_t rq = s.rank_q(), nv = s.nvars();
    const AnchoredBundle& q = s.lie2.dull.base();
    auto tau = [&](std::size_t i) { return frame_section(rq, nv, i); };
    auto rho_star_d = [&](const Poly& f) { return q.rho_star(differential(f)); };

    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t j = 0; j < rq; ++j)
            for (int scaled = 0; scaled < 2; ++scaled) {
                Section t1 = tau(i), t2 = tau(j);
                if (scaled) t2 = random_poly(nv, rng) * t2;
                Section br = core_bracket(s, t1, t2);

                rep.add_section_check("core_dB_bracket_morphism",
                                      s.lie2.dB.apply(br) -
                                          s.rep.bB.bracket(s.lie2.dB.apply(t1),
                                                           s.lie2.dB.apply(t2)),
                                      {i, j});

                Section beta(s.rank_b(), Poly(nv));
                for (std::size_t m = 0; m < s.rank_b(); ++m)
                    beta[m] = pair(t2, s.rep.nablaQ.act(frame_section(s.rank_b(), nv, m),
                                                        s.rep.dQ.apply(t1)));
                rep.add_section_check("core_dQ_image_formula",
                                      s.rep.dQ.apply(br) -
                                          s.lie2.dull.bracket(s.rep.dQ.apply(t1),
                                                              s.rep.dQ.apply(t2)) -
                                          s.lie2.dBstar_of(beta),
                                      {i, j});
            }

    for (std::size_t i = 0; i < rq; ++i)
        rep.add_section_check("core_anchor_factors_through_dB",
                              s.rep.bB.base().anchor_of(s.lie2.dB.apply(tau(i))) -
                                  q.anchor_of(s.rep.dQ.apply(tau(i))),
                              {i});

    // curvature formula: R(dB tau1, dB tau2) q recovered from the bracket
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t j = 0; j < rq; ++j)
            for (std::size_t k = 0; k < rq; ++k)
                for (int scaled = 0; scaled < 2; ++scaled) {
                    Section t1 = tau(i), t2 = tau(j), qq = tau(k);
                    if (scaled) qq = random_poly(nv, rng) * qq;
                    Section b1 = s.lie2.dB.apply(t1), b2 = s.lie2.dB.apply(t2);
                    Section rhs = -s.lie2.dull.dorfman(qq, core_bracket(s, t1, t2)) +
                                  core_bracket(s, s.lie2.dull.dorfman(qq, t1), t2) +
                                  core_bracket(s, t1, s.lie2.dull.dorfman(qq, t2)) +
                                  s.lie2.dull.dorfman(s.rep.nablaQ.act(b2, qq), t1) -
                                  s.lie2.dull.dorfman(s.rep.nablaQ.act(b1, qq), t2) -
                                  rho_star_d(pair(t1, s.rep.nablaQ.act(b2, qq)));
                    rep.add_section_check("core_bracket_curvature_formula",
                                          s.rep.R_of(b1, b2, qq) - rhs, {i, j, k});
                }

    // exact arguments are central: [[rho* d f, tau]] = 0
    std::vector<Poly> fs;
    for (std::size_t l = 0; l < nv; ++l) fs.push_back(Poly::variable(nv, l));
    fs.push_back(random_poly(nv, rng));
    for (std::size_t fi = 0; fi < fs.size(); ++fi)
        for (std::size_t j = 0; j < rq; ++j)
            rep.add_section_check("core_exact_terms_central",
                                  core_bracket(s, rho_star_d(fs[fi]), tau(j)), {fi, j});

    for (const char* name :
         {"core_dB_bracket_morphism", "core_dQ_image_formula", "core_anchor_factors_through_dB",
          "core_bracket_curvature_formula", "core_exact_terms_central"})
        if (!rep.find(name)) rep.add_pass(name);
    return rep;
}

SplittingChange::SplittingChange(TensorMap p) : phi(std::move(p)) {
    if (phi.arity() != 2 || phi.symmetry() != Symmetry::alt)
        throw std::invalid_argument("SplittingChange: two alternating Q slots expected");
    if (phi.out_rank() == 0)
        throw std::invalid_argument("SplittingChange: values must live in B*");
    phi.validate();
}

SplitChangeResult apply_splitting_change(const LACourantSplit& s, const SplittingChange& sc) {
    const std::size_t rq = s.rank_q(), rb = s.rank_b(), nv = s.nvars();
    if (sc.phi.arg_ranks()[0] != rq || sc.phi.out_rank() != rb)
        throw std::invalid_argument("apply_splitting_change: shape mismatch");

    std::vector<std::vector<Section>> table(rq, std::vector<Section>(rq));
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t j = 0; j < rq; ++j)
            table[i][j] =
                s.lie2.dull.frame_coeff(i, j) -
                s.lie2.dBstar_of(sc.phi.eval(
                    {frame_section(rq, nv, i), frame_section(rq, nv, j)}));
    DullBracket dull(s.lie2.dull.base(), std::move(table));

    std::vector<std::vector<Section>> g(rb, std::vector<Section>(rq));
    for (std::size_t m = 0; m < rb; ++m)
        for (std::size_t a = 0; a < rq; ++a)
            g[m][a] = s.rep.nablaQstar.frame_coeff(m, a) +
                      phi_contract(sc.phi, frame_section(rb, nv, m),
                                   s.rep.dQ.apply(frame_section(rq, nv, a)));
    Connection nqs(s.rep.nablaQstar.acting(), s.rep.nablaQstar.space(), std::move(g));

    return {std::move(dull), std::move(nqs)};
}

CheckReport check_core_bracket_invariance(const LACourantSplit& s, const SplittingChange& sc) {
    SplitChangeResult t = apply_splitting_change(s, sc);
    auto before = core_table(s.lie2.dull, s.rep.nablaQstar, s.rep.dQ, s.lie2.dB);
    auto after = core_table(t.dull, t.nablaQstar, s.rep.dQ, s.lie2.dB);
    CheckReport rep;
    for (std::size_t i = 0; i < before.size(); ++i)
        for (std::size_t j = 0; j < before.size(); ++j)
            rep.add_section_check("core_bracket_splitting_invariant", before[i][j] - after[i][j],
                                  {i, j});
    if (!rep.find("core_bracket_splitting_invariant"))
        rep.add_pass("core_bracket_splitting_invariant");
    return rep;
}

CourantData make_quadratic_lie_algebra(std::vector<std::vector<Section>> table, PolyMat gram) {
    const std::size_t n = gram.rows(), nv = gram.nvars();
    RatMat g = constant_gram(gram);
    if (!inverse(g)) throw std::invalid_argument("make_quadratic_lie_algebra: gram is degenerate");
    AnchoredBundle e({"g", n, nv}, std::vector<Section>(n, zero_section(nv, nv)));
    std::vector<Section> dcomp(nv, zero_section(n, nv));
    return CourantData(std::move(e), std::move(gram), std::move(dcomp), std::move(table));
}

CourantData make_exact_courant(std::size_t p, const TensorMap& h) {
    if (h.arity() != 3 || h.out_rank() != 0 || h.symmetry() != Symmetry::alt ||
        h.arg_ranks()[0] != p || h.nvars() != p)
        throw std::invalid_argument("make_exact_courant: H must be an alternating 3-form on TM");
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j)
            for (std::size_t k = j + 1; k < p; ++k)
                for (std::size_t l = k + 1; l < p; ++l) {
                    Poly dh = h.coeff({j, k, l}).derivative(i) - h.coeff({i, k, l}).derivative(j) +
                              h.coeff({i, j, l}).derivative(k) - h.coeff({i, j, k}).derivative(l);
                    if (!dh.is_zero())
                        throw std::invalid_argument("make_exact_courant: H is not closed");
                }

    const std::size_t n = 2 * p;
    std::vector<Section> anchor(n, zero_section(p, p));
    for (std::size_t i = 0; i < p; ++i) anchor[i] = frame_section(p, p, i);
    AnchoredBundle e({"TM+T*M", n, p}, std::move(anchor));

    PolyMat pairing(n, n, p);
    for (std::size_t i = 0; i < p; ++i) {
        pairing.at(i, p + i) = Poly::constant(p, 1);
        pairing.at(p + i, i) = Poly::constant(p, 1);
    }

    std::vector<Section> dcomp(p);
    for (std::size_t l = 0; l < p; ++l) dcomp[l] = frame_section(n, p, p + l);

    std::vector<std::vector<Section>> table(n, std::vector<Section>(n, zero_section(n, p)));
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t k = 0; k < p; ++k) table[i][j][p + k] = h.coeff({i, j, k});

    return CourantData(std::move(e), std::move(pairing), std::move(dcomp), std::move(table));
}

LACourantSplit tangent_prolongation_la_courant(const CourantData& e, const Connection& conn) {
    const std::size_t n = e.rank(), p = e.nvars();
    if (conn.space().rank != n || conn.acting().rank() != p)
        throw std::invalid_argument("tangent prolongation: connection shape mismatch");
    RatMat g = constant_gram(e.pairing_mat());
    auto ginv_opt = inverse(g);
    if (!ginv_opt) throw std::invalid_argument("tangent prolongation: degenerate pairing");
    const RatMat& ginv = *ginv_opt;

    auto fr = [&](std::size_t i) { return frame_section(n, p, i); };
    auto tmfr = [&](std::size_t l) { return frame_section(p, p, l); };

    // metric property of the connection, checked exactly on frames
    for (std::size_t l = 0; l < p; ++l)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Poly lhs = e.pair_op(fr(i), fr(j)).derivative(l);
                Poly rhs = e.pair_op(conn.frame_coeff(l, i), fr(j)) +
                           e.pair_op(fr(i), conn.frame_coeff(l, j));
                if (lhs != rhs)
                    throw std::invalid_argument("tangent prolongation: connection is not metric");
            }

    const AnchoredBundle& q = e.E();

    // dull bracket [[e, e']] - rho* <nabla_. e, e'>
    std::vector<std::vector<Section>> dtable(n, std::vector<Section>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Section theta(p, Poly(p));
            for (std::size_t l = 0; l < p; ++l)
                theta[l] = e.pair_op(conn.frame_coeff(l, i), fr(j));
            dtable[i][j] = e.bracket(fr(i), fr(j)) - pairing_rho_star(q, ginv, theta);
        }
    DullBracket dull(q, std::move(dtable));

    // dB = rho o ginv, dQ = ginv
    PolyMat dB(p, n, p), dQ(n, n, p);
    for (std::size_t l = 0; l < p; ++l)
        for (std::size_t i = 0; i < n; ++i) {
            Poly acc(p);
            for (std::size_t j = 0; j < n; ++j) acc += ginv(j, i) * q.anchor[j][l];
            dB.at(l, i) = acc;
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) dQ.at(i, j) = Poly::constant(p, ginv(i, j));

    // nabla^bas_e X = [rho(e), X] + rho(conn_X e)
    FreeModule tm{"TM", p, p};
    std::vector<std::vector<Section>> ntable(n, std::vector<Section>(p));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t m = 0; m < p; ++m)
            ntable[i][m] =
                vf_bracket(q.anchor[i], tmfr(m)) + q.anchor_of(conn.frame_coeff(m, i));
    Connection nabla(q, tm, ntable);

    // basic curvature 3-form, values in T*M
    TensorMap omega({n, n, n}, p, p, Symmetry::alt);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t m = 0; m < p; ++m) {
                Section w = -conn.act(tmfr(m), e.bracket(fr(i), fr(j))) +
                            e.bracket(conn.frame_coeff(m, i), fr(j)) +
                            e.bracket(fr(i), conn.frame_coeff(m, j)) +
                            conn.act(ntable[j][m], fr(i)) - conn.act(ntable[i][m], fr(j));
                Section mu(p, Poly(p));
                for (std::size_t k = 0; k < n; ++k) {
                    Poly wk = e.pair_op(conn.act(ntable[k][m], fr(i)), fr(j));
                    for (std::size_t a = 0; a < n; ++a) w[a] -= ginv(a, k) * wk;
                }
                for (std::size_t k = 0; k < n; ++k)
                    omega.coeff({i, j, k}, m) = e.pair_op(w, fr(k));
            }
    omega.validate();

    AnchoredBundle tmb(tm, [&] {
        std::vector<Section> a(p);
        for (std::size_t l = 0; l < p; ++l) a[l] = tmfr(l);
        return a;
    }());
    DullBracket bTM(tmb, std::vector<std::vector<Section>>(
                             p, std::vector<Section>(p, zero_section(p, p))));

    TensorMap r({p, p, n}, n, p, Symmetry::none);
    for (std::size_t l = 0; l < p; ++l)
        for (std::size_t m = 0; m < p; ++m)
            for (std::size_t i = 0; i < n; ++i) {
                Section curv = conn.curvature(bTM, tmfr(l), tmfr(m), fr(i));
                for (std::size_t a = 0; a < n; ++a) r.coeff({l, m, i}, a) = e.pair_op(curv, fr(a));
            }

    SplitLie2 lie2(std::move(dull), tm, std::move(dB), std::move(nabla), std::move(omega));
    SelfDual2Rep rep(std::move(bTM), q.bundle, std::move(dQ), conn, conn.dual(), std::move(r));
    return LACourantSplit(std::move(lie2), std::move(rep));
}

LACourantSplit standard_la_courant_over_lie_algebroid(const DullBracket& a,
                                                      const DullBracket& dullq) {
    const std::size_t p = a.nvars(), ra = a.rank(), rq = p + ra;
    if (dullq.rank() != rq || dullq.nvars() != p)
        throw std::invalid_argument("standard decomposition: Q must be TM + A*");

    auto qfr = [&](std::size_t i) { return frame_section(rq, p, i); };
    auto afr = [&](std::size_t m) { return frame_section(ra, p, m); };
    // inclusion of A into the core Q* = T*M coords then A coords
    auto iota_a = [&](const Section& s) {
        Section out = zero_section(rq, p);
        for (std::size_t nn = 0; nn < ra; ++nn) out[p + nn] = s[nn];
        return out;
    };
    auto pr_a = [&](const Section& taus) {
        Section out(ra, Poly(p));
        for (std::size_t nn = 0; nn < ra; ++nn) out[nn] = taus[p + nn];
        return out;
    };
    // Omega_q a = Delta_q (a, 0) - (0, d<alpha, a>) with q = (X, alpha)
    auto omega_map = [&](const Section& qsec, const Section& asec) {
        Poly alpha_a(p);
        for (std::size_t nn = 0; nn < ra; ++nn) alpha_a += qsec[p + nn] * asec[nn];
        Section out = dullq.dorfman(qsec, iota_a(asec));
        Section df = differential(alpha_a);
        for (std::size_t l = 0; l < p; ++l) out[l] -= df[l];
        return out;
    };
    // Lie derivative along a of a section of Q = TM + A*
    auto lie_on_q = [&](std::size_t m, const Section& s) {
        Section out = zero_section(rq, p);
        Section x = a.base().anchor[m];
        for (std::size_t l = 0; l < p; ++l) {
            out[l] += apply_derivation(x, s[l]);
            // [rho(a_m), d_l] = -d_l(rho(a_m))
            for (std::size_t k = 0; k < p; ++k) out[k] -= s[l] * x[k].derivative(l);
        }
        for (std::size_t nn = 0; nn < ra; ++nn) {
            out[p + nn] += apply_derivation(x, s[p + nn]);
            // (L_{a_m} eps_n)(a_c) = -<eps_n, [a_m, a_c]>
            for (std::size_t c = 0; c < ra; ++c)
                out[p + c] -= s[p + nn] * a.frame_coeff(m, c)[nn];
        }
        return out;
    };
    // Lie derivative along a of a section of Q* = T*M + A
    auto lie_on_qstar = [&](std::size_t m, const Section& s) {
        Section out = zero_section(rq, p);
        Section x = a.base().anchor[m];
        for (std::size_t l = 0; l < p; ++l) {
            out[l] += apply_derivation(x, s[l]);
            // L_X dx_l = d(X_l)
            for (std::size_t k = 0; k < p; ++k) out[k] += s[l] * x[l].derivative(k);
        }
        Section apart(ra, Poly(p));
        for (std::size_t nn = 0; nn < ra; ++nn) apart[nn] = s[p + nn];
        Section br = a.bracket(afr(m), apart);
        for (std::size_t nn = 0; nn < ra; ++nn) out[p + nn] += br[nn];
        return out;
    };

    // split Lie 2-algebroid side
    PolyMat dB(ra, rq, p), dQ(rq, rq, p);
    for (std::size_t nn = 0; nn < ra; ++nn) dB.at(nn, p + nn) = Poly::constant(p, 1);
    for (std::size_t nn = 0; nn < ra; ++nn)
        for (std::size_t l = 0; l < p; ++l) {
            dQ.at(l, p + nn) = a.base().anchor[nn][l];
            dQ.at(p + nn, l) = a.base().anchor[nn][l];
        }

    FreeModule amod = a.base().bundle;
    std::vector<std::vector<Section>> ntable(rq, std::vector<Section>(ra));
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t m = 0; m < ra; ++m) ntable[i][m] = pr_a(dullq.dorfman(qfr(i), iota_a(afr(m))));
    Connection nabla(dullq.base(), amod, std::move(ntable));

    TensorMap omega({rq, rq, rq}, ra, p, Symmetry::alt);
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t j = 0; j < rq; ++j)
            for (std::size_t k = 0; k < rq; ++k) {
                Section jac = dullq.jacobiator(qfr(i), qfr(j), qfr(k));
                for (std::size_t m = 0; m < ra; ++m) omega.coeff({i, j, k}, m) = jac[p + m];
            }
    omega.validate();

    SplitLie2 lie2(dullq, amod, std::move(dB), std::move(nabla), std::move(omega));

    // self-dual 2-representation of A on dQ: the basic connections
    std::vector<std::vector<Section>> gq(ra, std::vector<Section>(rq));
    for (std::size_t m = 0; m < ra; ++m)
        for (std::size_t i = 0; i < rq; ++i)
            gq[m][i] = dQ.apply(omega_map(qfr(i), afr(m))) + lie_on_q(m, qfr(i));
    Connection nablaQ(a.base(), dullq.base().bundle, gq);

    std::vector<std::vector<Section>> gqs(ra, std::vector<Section>(rq));
    for (std::size_t m = 0; m < ra; ++m)
        for (std::size_t idx = 0; idx < rq; ++idx) {
            Section taufr = frame_section(rq, p, idx);
            gqs[m][idx] = omega_map(dQ.apply(taufr), afr(m)) + lie_on_qstar(m, taufr);
        }
    Connection nablaQstar(a.base(), dullq.base().bundle, gqs);

    TensorMap r({ra, ra, rq}, rq, p, Symmetry::none);
    for (std::size_t m = 0; m < ra; ++m)
        for (std::size_t nn = 0; nn < ra; ++nn)
            for (std::size_t i = 0; i < rq; ++i) {
                Section val = -omega_map(qfr(i), a.frame_coeff(m, nn)) +
                              lie_on_qstar(m, omega_map(qfr(i), afr(nn))) -
                              lie_on_qstar(nn, omega_map(qfr(i), afr(m))) +
                              omega_map(nablaQ.act(afr(nn), qfr(i)), afr(m)) -
                              omega_map(nablaQ.act(afr(m), qfr(i)), afr(nn));
                for (std::size_t j = 0; j < rq; ++j) r.coeff({m, nn, i}, j) = val[j];
            }

    SelfDual2Rep rep(a, dullq.base().bundle, std::move(dQ), std::move(nablaQ),
                     std::move(nablaQstar), std::move(r));
    return LACourantSplit(std::move(lie2), std::move(rep));
}

LACourantSplit la_courant_from_matched_2reps(const Matched2Reps& mp) {
    const std::size_t ra = mp.bA.rank(), rb = mp.bB.rank(), rc = mp.C.rank;
    const std::size_t nv = mp.bA.nvars(), rq = ra + rc;

    std::vector<Section> anchor(rq, zero_section(nv, nv));
    for (std::size_t i = 0; i < ra; ++i) anchor[i] = mp.bA.base().anchor[i];
    AnchoredBundle q({"A+C*", rq, nv}, std::move(anchor));

    Connection nacd = mp.nablaAC.dual();

    // dull bracket dual to Delta_{(a,gamma)}(alpha,c) =
    //   (L_a alpha + <nablaAC*_. gamma, c>, nablaAC_a c)
    auto delta_frame = [&](std::size_t i, std::size_t k) {
        Section out = zero_section(rq, nv);
        if (i < ra) {
            if (k < ra) {
                // (L_{a_i} eps_k)_j = -<eps_k, [a_i, a_j]>
                for (std::size_t j = 0; j < ra; ++j) out[j] -= mp.bA.frame_coeff(i, j)[k];
            } else {
                Section g = mp.nablaAC.frame_coeff(i, k - ra);
                for (std::size_t nn = 0; nn < rc; ++nn) out[ra + nn] = g[nn];
            }
        } else {
            if (k >= ra)
                for (std::size_t j = 0; j < ra; ++j) out[j] += nacd.frame_coeff(j, i - ra)[k - ra];
        }
        return out;
    };
    std::vector<std::vector<Section>> dtable(rq, std::vector<Section>(rq));
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t j = 0; j < rq; ++j) {
            Section c = zero_section(rq, nv);
            for (std::size_t k = 0; k < rq; ++k) c[k] = -delta_frame(i, k)[j];
            dtable[i][j] = c;
        }
    DullBracket dull(q, std::move(dtable));

    PolyMat dB(rb, rq, nv), dQ(rq, rq, nv);
    for (std::size_t m = 0; m < rb; ++m)
        for (std::size_t nn = 0; nn < rc; ++nn) dB.at(m, ra + nn) = mp.dB.at(m, nn);
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t nn = 0; nn < rc; ++nn) {
            dQ.at(i, ra + nn) = mp.dA.at(i, nn);
            dQ.at(ra + nn, i) = mp.dA.at(i, nn);
        }

    FreeModule bmod = mp.bB.base().bundle;
    std::vector<std::vector<Section>> ntable(rq, std::vector<Section>(rb, zero_section(rb, nv)));
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t m = 0; m < rb; ++m) ntable[i][m] = mp.nablaAB.frame_coeff(i, m);
    Connection nabla(q, bmod, std::move(ntable));

    TensorMap omega({rq, rq, rq}, rb, nv, Symmetry::alt);
    for (std::size_t m = 0; m < rb; ++m)
        for (std::size_t i = 0; i < rq; ++i)
            for (std::size_t j = 0; j < rq; ++j)
                for (std::size_t k = 0; k < rq; ++k) {
                    if (i < ra && j < ra && k >= ra)
                        omega.coeff({i, j, k}, m) = mp.RA.coeff({i, j, m}, k - ra);
                    else if (i < ra && j >= ra && k < ra)
                        omega.coeff({i, j, k}, m) = mp.RA.coeff({k, i, m}, j - ra);
                    else if (i >= ra && j < ra && k < ra)
                        omega.coeff({i, j, k}, m) = mp.RA.coeff({j, k, m}, i - ra);
                }
    omega.validate();

    SplitLie2 lie2(std::move(dull), bmod, std::move(dB), std::move(nabla), std::move(omega));

    Connection nbad = mp.nablaBA.dual(), nbcd = mp.nablaBC.dual();
    std::vector<std::vector<Section>> gq(rb, std::vector<Section>(rq));
    std::vector<std::vector<Section>> gqs(rb, std::vector<Section>(rq));
    for (std::size_t m = 0; m < rb; ++m)
        for (std::size_t i = 0; i < rq; ++i) {
            Section v = zero_section(rq, nv), w = zero_section(rq, nv);
            if (i < ra) {
                Section ga = mp.nablaBA.frame_coeff(m, i);
                for (std::size_t j = 0; j < ra; ++j) v[j] = ga[j];
                Section gad = nbad.frame_coeff(m, i);
                for (std::size_t j = 0; j < ra; ++j) w[j] = gad[j];
            } else {
                Section gc = nbcd.frame_coeff(m, i - ra);
                for (std::size_t nn = 0; nn < rc; ++nn) v[ra + nn] = gc[nn];
                Section gcs = mp.nablaBC.frame_coeff(m, i - ra);
                for (std::size_t nn = 0; nn < rc; ++nn) w[ra + nn] = gcs[nn];
            }
            gq[m][i] = v;
            gqs[m][i] = w;
        }
    Connection nablaQ(mp.bB.base(), lie2.dull.base().bundle, std::move(gq));
    Connection nablaQstar(mp.bB.base(), lie2.dull.base().bundle, std::move(gqs));

    TensorMap r({rb, rb, rq}, rq, nv, Symmetry::none);
    for (std::size_t m = 0; m < rb; ++m)
        for (std::size_t nn = 0; nn < rb; ++nn)
            for (std::size_t i = 0; i < rq; ++i)
                for (std::size_t j = 0; j < rq; ++j) {
                    if (i < ra && j >= ra)
                        r.coeff({m, nn, i}, j) = mp.RB.coeff({m, nn, i}, j - ra);
                    else if (i >= ra && j < ra)
                        r.coeff({m, nn, i}, j) = -mp.RB.coeff({m, nn, j}, i - ra);
                }

    SelfDual2Rep rep(mp.bB, lie2.dull.base().bundle, std::move(dQ), std::move(nablaQ),
                     std::move(nablaQstar), std::move(r));
    return LACourantSplit(std::move(lie2), std::move(rep));
}

namespace {

// Reduce a (U + Q*)-coordinate section to quotient coordinates: solve
// [reps | relations] x = w and keep the representative block.
Section quotient_reduce(const RatMat& reps, const RatMat& relations, const Section& w) {
    const std::size_t dim = reps.rows(), nb = reps.cols();
    RatMat full = hcat(reps, relations);
    // One exact solve per monomial: collect each exponent's rational
    // coordinate vector across the components of w.
    std::map<Exponents, RatVec> rhs;
    const std::size_t nvars = w.empty() ? 0 : w[0].nvars();
    for (std::size_t r = 0; r < dim; ++r)
        for (const auto& [e, cval] : w[r].terms()) {
            auto it = rhs.find(e);
            if (it == rhs.end()) it = rhs.emplace(e, RatVec(dim, Rational(0))).first;
            it->second[r] = cval;
        }
    Section out(nb, Poly(nvars));
    for (const auto& [e, vec] : rhs) {
        auto sol = solve(full, vec);
        if (!sol) throw std::invalid_argument("manin pair: section not in the span");
        for (std::size_t c = 0; c < nb; ++c)
            if (sol->at(c) != Rational(0))
                out[c] += Poly::monomial(nvars, e, sol->at(c));
    }
    return out;
}

} // namespace

ManinPairData manin_pair(const LACourantSplit& s, const RatMat& u_basis) {
    const std::size_t rq = s.rank_q(), nv = s.nvars();
    if (u_basis.rows() != rq) throw std::invalid_argument("manin pair: U must live inside Q");
    SubBundle u(rq, u_basis);
    SubBundle uann = u.annihilator();
    const std::size_t k = u.rank(), nrel = uann.rank();

    if (!s.rep.dQ.is_constant())
        throw std::invalid_argument("manin pair: dQ must have constant coefficients");
    RatMat dqc(rq, rq);
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t j = 0; j < rq; ++j) dqc(i, j) = s.rep.dQ.at(i, j).constant_value();

    const std::size_t dim = k + rq; // ambient U + Q* coordinates
    // graph relations (-dQ tau, tau) for tau in a basis of U°; the U block is
    // expressed in U coordinates
    RatMat relations(dim, nrel);
    for (std::size_t t = 0; t < nrel; ++t) {
        RatVec tau = uann.basis().col(t);
        RatVec img(rq, Rational(0));
        for (std::size_t i = 0; i < rq; ++i)
            for (std::size_t j = 0; j < rq; ++j) img[i] += dqc(i, j) * tau[j];
        // -dQ tau lies in U; write it in the U basis
        Section img_sec(rq, Poly(nv));
        for (std::size_t i = 0; i < rq; ++i) img_sec[i] = Poly::constant(nv, -img[i]);
        Section coords = u.coordinates(img_sec);
        for (std::size_t c = 0; c < k; ++c) relations(c, t) = coords[c].constant_value();
        for (std::size_t j = 0; j < rq; ++j) relations(k + j, t) = tau[j];
    }

    // complete the relations to a basis of U + Q* with coordinate candidates
    RatMat candidates = RatMat::identity(dim);
    RatMat reps = complete_basis(relations, candidates);
    // reorder roles: the quotient basis is the completion
    const std::size_t nb = reps.cols();
    if (nb != 2 * k) throw std::invalid_argument("manin pair: unexpected quotient rank");

    // helpers on (U + Q*) coordinates: first k entries = U coordinates,
    // remaining rq = Q* coordinates
    auto u_of = [&](const Section& w) {
        Section out = zero_section(rq, nv);
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t i = 0; i < rq; ++i) out[i] += u.basis()(i, c) * w[c];
        return out;
    };
    auto tau_of = [&](const Section& w) {
        Section out(rq, Poly(nv));
        for (std::size_t j = 0; j < rq; ++j) out[j] = w[k + j];
        return out;
    };
    auto pair_b = [&](const Section& w1, const Section& w2) {
        return pair(u_of(w1), tau_of(w2)) + pair(u_of(w2), tau_of(w1)) +
               pair(tau_of(w1), s.rep.dQ.apply(tau_of(w2)));
    };
    auto anchor_b = [&](const Section& w) {
        return s.lie2.dull.base().anchor_of(u_of(w)) +
               s.rep.bB.base().anchor_of(s.lie2.dB.apply(tau_of(w)));
    };
    auto bracket_b = [&](const Section& w1, const Section& w2) {
        Section u1 = u_of(w1), u2 = u_of(w2), t1 = tau_of(w1), t2 = tau_of(w2);
        Section b1 = s.lie2.dB.apply(t1), b2 = s.lie2.dB.apply(t2);
        Section upart = s.lie2.dull.bracket(u1, u2) + s.rep.nablaQ.act(b1, u2) -
                        s.rep.nablaQ.act(b2, u1);
        Section tpart = core_bracket(s, t1, t2) + s.lie2.dull.dorfman(u1, t2) -
                        s.lie2.dull.dorfman(u2, t1) +
                        s.lie2.dull.base().rho_star(differential(pair(t1, u2)));
        // upart lies in U (LA-Dirac); express in U coordinates
        Section ucoords = u.coordinates(upart);
        Section out(dim, Poly(nv));
        for (std::size_t c = 0; c < k; ++c) out[c] = ucoords[c];
        for (std::size_t j = 0; j < rq; ++j) out[k + j] = tpart[j];
        return out;
    };

    // assemble the quotient Courant data on the chosen representatives
    auto rep_sec = [&](std::size_t c) {
        Section w(dim, Poly(nv));
        for (std::size_t r = 0; r < dim; ++r) w[r] = Poly::constant(nv, reps(r, c));
        return w;
    };
    std::vector<Section> banchor(nb);
    PolyMat bpair(nb, nb, nv);
    std::vector<std::vector<Section>> btable(nb, std::vector<Section>(nb));
    for (std::size_t c1 = 0; c1 < nb; ++c1) {
        banchor[c1] = anchor_b(rep_sec(c1));
        for (std::size_t c2 = 0; c2 < nb; ++c2) {
            bpair.at(c1, c2) = pair_b(rep_sec(c1), rep_sec(c2));
            btable[c1][c2] = quotient_reduce(reps, relations, bracket_b(rep_sec(c1), rep_sec(c2)));
        }
    }
    std::vector<Section> bdcomp(nv);
    for (std::size_t l = 0; l < nv; ++l) {
        Section w(dim, Poly(nv));
        Section rd = s.lie2.dull.base().rho_star(differential(Poly::variable(nv, l)));
        for (std::size_t j = 0; j < rq; ++j) w[k + j] = rd[j];
        bdcomp[l] = quotient_reduce(reps, relations, w);
    }
    AnchoredBundle bb({"UB", nb, nv}, std::move(banchor));
    CourantData courant(std::move(bb), std::move(bpair), std::move(bdcomp), std::move(btable));

    return ManinPairData{k, u_basis, reps, relations, std::move(courant)};
}

CheckReport check_manin_pair(const LACourantSplit& s, const ManinPairData& mp, Rng& rng) {
    CheckReport rep = check_courant(mp.courant, true, rng);

    const std::size_t rq = s.rank_q(), nv = s.nvars(), k = mp.rank_u;
    const std::size_t dim = k + rq, nb = mp.reps.cols();
    SubBundle u(rq, mp.u_basis);

    auto embed_u = [&](std::size_t c) {
        // U-basis vector c as a quotient coordinate vector
        Section w(dim, Poly(nv));
        w[c] = Poly::constant(nv, 1);
        return quotient_reduce(mp.reps, mp.relations, w);
    };
    auto embed_tau = [&](const Section& tau) {
        Section w(dim, Poly(nv));
        for (std::size_t j = 0; j < rq; ++j) w[k + j] = tau[j];
        return quotient_reduce(mp.reps, mp.relations, w);
    };

    // the bracket and pairing vanish on the graph relations (well-definedness)
    for (std::size_t t = 0; t < mp.relations.cols(); ++t) {
        Section g(dim, Poly(nv));
        for (std::size_t r = 0; r < dim; ++r) g[r] = Poly::constant(nv, mp.relations(r, t));
        Section gred = quotient_reduce(mp.reps, mp.relations, g);
        rep.add_section_check("manin_quotient_well_defined", gred, {t});
    }
    if (!rep.find("manin_quotient_well_defined")) rep.add_pass("manin_quotient_well_defined");

    // U embeds as a Dirac structure: isotropic of half rank with closed bracket
    {
        bool ok = 2 * k == nb;
        Poly acc(nv);
        for (std::size_t c1 = 0; c1 < k && ok; ++c1)
            for (std::size_t c2 = 0; c2 < k && ok; ++c2) {
                Poly pr(nv);
                Section e1 = embed_u(c1), e2 = embed_u(c2);
                for (std::size_t a = 0; a < nb; ++a)
                    for (std::size_t b = 0; b < nb; ++b)
                        pr += e1[a] * e2[b] * mp.courant.pairing_mat().at(a, b);
                if (!pr.is_zero()) ok = false, acc = pr;
            }
        if (ok)
            rep.add_pass("manin_U_isotropic_half_rank");
        else
            rep.add_fail("manin_U_isotropic_half_rank",
                         make_witness(acc.is_zero() ? Poly::constant(nv, 1) : acc, {}));
    }
    {
        // bracket of embedded U sections stays in embedded U
        RatMat uimg(nb, k);
        for (std::size_t c = 0; c < k; ++c) {
            Section e = embed_u(c);
            for (std::size_t a = 0; a < nb; ++a) uimg(a, c) = e[a].constant_value();
        }
        SubBundle uq(nb, uimg);
        for (std::size_t c1 = 0; c1 < k; ++c1)
            for (std::size_t c2 = 0; c2 < k; ++c2) {
                Section br = mp.courant.bracket(embed_u(c1), embed_u(c2));
                Section res = zero_section(nb, nv);
                if (!uq.contains(br)) res = br;
                rep.add_section_check("manin_U_bracket_closes", res, {c1, c2});
            }
        if (!rep.find("manin_U_bracket_closes")) rep.add_pass("manin_U_bracket_closes");
    }

    // morphism psi : Q* -> quotient of degenerate Courant algebroids, and the
    // four compatibility conditions
    CourantData core = core_degenerate_courant(s);
    auto taufr = [&](std::size_t i) { return frame_section(rq, nv, i); };
    for (std::size_t i = 0; i < rq; ++i) {
        rep.add_section_check("manin_psi_anchor",
                              mp.courant.E().anchor_of(embed_tau(taufr(i))) -
                                  core.E().anchor_of(taufr(i)),
                              {i});
        for (std::size_t j = 0; j < rq; ++j) {
            Section e1 = embed_tau(taufr(i)), e2 = embed_tau(taufr(j));
            Poly pr(nv);
            for (std::size_t a = 0; a < nb; ++a)
                for (std::size_t b = 0; b < nb; ++b)
                    pr += e1[a] * e2[b] * mp.courant.pairing_mat().at(a, b);
            Section d(1, pr - core.pair_op(taufr(i), taufr(j)));
            rep.add_section_check("manin_psi_pairing", d, {i, j});

            Section br = mp.courant.bracket(e1, e2) - embed_tau(core.bracket(taufr(i), taufr(j)));
            rep.add_section_check("manin_psi_bracket", br, {i, j});
        }
    }

    // psi(Q*) + U spans the quotient
    {
        RatMat span(nb, rq + k);
        for (std::size_t i = 0; i < rq; ++i) {
            Section e = embed_tau(taufr(i));
            for (std::size_t a = 0; a < nb; ++a) span(a, i) = e[a].constant_value();
        }
        for (std::size_t c = 0; c < k; ++c) {
            Section e = embed_u(c);
            for (std::size_t a = 0; a < nb; ++a) span(a, rq + c) = e[a].constant_value();
        }
        if (rat_rank(span) == nb)
            rep.add_pass("manin_psi_plus_U_spans");
        else
            rep.add_fail("manin_psi_plus_U_spans", make_witness(Poly::constant(nv, 1), {}));
    }

    // <psi tau, u> = <iota u, tau>
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t c = 0; c < k; ++c) {
            Section e1 = embed_tau(taufr(i)), e2 = embed_u(c);
            Poly pr(nv);
            for (std::size_t a = 0; a < nb; ++a)
                for (std::size_t b = 0; b < nb; ++b)
                    pr += e1[a] * e2[b] * mp.courant.pairing_mat().at(a, b);
            Poly expect = pair(u.basis_section(c, nv), taufr(i));
            rep.add_section_check("manin_psi_pairs_with_U", Section{pr - expect}, {i, c});
        }

    return rep;
}

} // namespace lakit
