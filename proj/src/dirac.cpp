#include "lakit/dirac.hpp"

#include <stdexcept>

namespace lakit {

namespace {

// Residual of the membership "s in target": pairings of s against a basis of
// the annihilator of target (zero section iff s is a pointwise member).
Section membership_residual(const SubBundle& ann, const Section& s, std::size_t nvars) {
    Section out = zero_section(ann.rank(), nvars);
    for (std::size_t t = 0; t < ann.rank(); ++t)
        out[t] = pair(ann.basis_section(t, nvars), s);
    return out;
}

// Residual of "s lies in the annihilator of sub" for s in the dual bundle.
Section dual_membership_residual(const SubBundle& sub, const Section& s, std::size_t nvars) {
    Section out = zero_section(sub.rank(), nvars);
    for (std::size_t c = 0; c < sub.rank(); ++c)
        out[c] = pair(sub.basis_section(c, nvars), s);
    return out;
}

void ensure_entry(CheckReport& rep, const std::string& axiom) {
    if (!rep.find(axiom)) rep.add_pass(axiom);
}

void shape_check(const DoubleSubbundleData& d, std::size_t rq, std::size_t rb) {
    if (d.U.ambient_rank() != rq || d.K.ambient_rank() != rq || d.Bp.ambient_rank() != rb)
        throw std::invalid_argument("double subbundle: ambient ranks do not match the structure");
}

} // namespace

CheckReport check_isotropic(const DoubleSubbundleData& d) {
    CheckReport rep;
    const std::size_t rq = d.U.ambient_rank();
    // Every core element annihilates the side: <tau, u> = 0.
    for (std::size_t t = 0; t < d.K.rank(); ++t)
        rep.add_section_check("iso_core_annihilates_side",
                              dual_membership_residual(d.U, d.K.basis_section(t, 0), 0), {t});
    ensure_entry(rep, "iso_core_annihilates_side");

    if (d.Lambda) {
        const TensorMap& lam = *d.Lambda;
        if (lam.arity() != 2 || lam.arg_ranks()[0] != rq || lam.arg_ranks()[1] != rq ||
            lam.out_rank() != d.Bp.ambient_rank())
            throw std::invalid_argument("check_isotropic: decoration has the wrong shape");
        const std::size_t nv = lam.nvars();
        for (std::size_t c1 = 0; c1 < d.U.rank(); ++c1)
            for (std::size_t c2 = 0; c2 < d.U.rank(); ++c2) {
                Section val = lam.eval(
                    {d.U.basis_section(c1, nv), d.U.basis_section(c2, nv)});
                rep.add_section_check("iso_decoration_annihilates_support",
                                      dual_membership_residual(d.Bp, val, nv), {c1, c2});
            }
    }
    ensure_entry(rep, "iso_decoration_annihilates_support");
    return rep;
}

CheckReport check_maximal_isotropic(const DoubleSubbundleData& d) {
    CheckReport rep = check_isotropic(d);
    const bool ranks = d.U.rank() + d.K.rank() == d.U.ambient_rank();
    // With isotropy, U = K annihilator is equivalent to equality of ranks
    // plus the containment U <= K annihilator already recorded above; check
    // both directions explicitly anyway.
    SubBundle kann = d.K.annihilator();
    const bool equal = ranks && kann.rank() == d.U.rank() && kann.contains(d.U);
    if (equal)
        rep.add_pass("maximal_side_is_core_annihilator");
    else
        rep.add_fail("maximal_side_is_core_annihilator",
                     make_witness(Poly::constant(0, Rational(1)), {}));
    return rep;
}

TensorMap lagrangianize(const TensorMap& lambda) {
    if (lambda.arity() != 2 || lambda.symmetry() != Symmetry::sym)
        throw std::invalid_argument("lagrangianize: decoration must be a symmetric 2-tensor");
    lambda.validate();
    const std::size_t rq = lambda.arg_ranks()[0];
    const std::size_t rb = lambda.out_rank() ? lambda.out_rank() : 1;
    TensorMap shift(lambda.arg_ranks(), lambda.out_rank(), lambda.nvars(), Symmetry::sym);
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t j = 0; j < rq; ++j)
            for (std::size_t m = 0; m < rb; ++m)
                shift.coeff({i, j}, m) = Rational(-1, 2) * lambda.coeff({i, j}, m);
    // The decoration recomputed after shifting the lift by `shift` is
    // Lambda + shift + shift^T; it must vanish identically.
    for (std::size_t i = 0; i < rq; ++i)
        for (std::size_t j = 0; j < rq; ++j)
            for (std::size_t m = 0; m < rb; ++m) {
                Poly res = lambda.coeff({i, j}, m) + shift.coeff({i, j}, m) +
                           shift.coeff({j, i}, m);
                if (!res.is_zero())
                    throw std::logic_error("lagrangianize: corrected decoration is nonzero");
            }
    return shift;
}

CheckReport check_vb_dirac(const SplitLie2& l, const DoubleSubbundleData& d, Rng& rng) {
    shape_check(d, l.rank_q(), l.rank_b());
    if (!check_maximal_isotropic(d).verdict())
        throw std::invalid_argument("check_vb_dirac: double subbundle is not maximal isotropic");
    CheckReport rep;
    const std::size_t nv = l.nvars();
    SubBundle uann = d.U.annihilator();
    SubBundle bpann = d.Bp.annihilator();
    const Poly f = random_poly(nv, rng);

    for (std::size_t t = 0; t < uann.rank(); ++t)
        rep.add_section_check(
            "vbdirac_dB_into_support",
            membership_residual(bpann, l.dB_of(uann.basis_section(t, nv)), nv), {t});

    for (std::size_t c = 0; c < d.U.rank(); ++c) {
        Section u = d.U.basis_section(c, nv);
        for (std::size_t m = 0; m < d.Bp.rank(); ++m) {
            Section b = d.Bp.basis_section(m, nv);
            rep.add_section_check("vbdirac_connection_preserves_support",
                                  membership_residual(bpann, l.nabla.act(u, b), nv), {c, m});
            rep.add_section_check("vbdirac_connection_preserves_support",
                                  membership_residual(bpann, l.nabla.act(u, f * b), nv), {c, m});
        }
        for (std::size_t c2 = 0; c2 < d.U.rank(); ++c2) {
            Section u2 = d.U.basis_section(c2, nv);
            rep.add_section_check("vbdirac_bracket_closes_in_side",
                                  membership_residual(uann, l.dull.bracket(u, u2), nv), {c, c2});
            rep.add_section_check("vbdirac_bracket_closes_in_side",
                                  membership_residual(uann, l.dull.bracket(u, f * u2), nv),
                                  {c, c2});
            for (std::size_t m = 0; m < d.Bp.rank(); ++m)
                rep.add_section_check(
                    "vbdirac_omega_into_side_annihilator",
                    dual_membership_residual(
                        d.U, l.omega_pair(u, u2, d.Bp.basis_section(m, nv)), nv),
                    {c, c2, m});
        }
    }
    for (const char* name : {"vbdirac_dB_into_support", "vbdirac_connection_preserves_support",
                             "vbdirac_bracket_closes_in_side",
                             "vbdirac_omega_into_side_annihilator"})
        ensure_entry(rep, name);
    return rep;
}

CheckReport check_subalgebroid(const SelfDual2Rep& r, const DoubleSubbundleData& d, Rng& rng) {
    shape_check(d, r.rank_q(), r.rank_b());
    if (!check_maximal_isotropic(d).verdict())
        throw std::invalid_argument(
            "check_subalgebroid: double subbundle is not maximal isotropic");
    CheckReport rep;
    const std::size_t nv = r.nvars();
    SubBundle uann = d.U.annihilator();
    SubBundle bpann = d.Bp.annihilator();
    const Poly f = random_poly(nv, rng);

    for (std::size_t t = 0; t < uann.rank(); ++t)
        rep.add_section_check("subalg_dQ_into_side",
                              membership_residual(uann, r.dQ_of(uann.basis_section(t, nv)), nv),
                              {t});

    for (std::size_t m = 0; m < d.Bp.rank(); ++m) {
        Section b = d.Bp.basis_section(m, nv);
        for (std::size_t c = 0; c < d.U.rank(); ++c) {
            Section u = d.U.basis_section(c, nv);
            rep.add_section_check("subalg_connection_preserves_side",
                                  membership_residual(uann, r.nablaQ.act(b, u), nv), {m, c});
            rep.add_section_check("subalg_connection_preserves_side",
                                  membership_residual(uann, r.nablaQ.act(b, f * u), nv), {m, c});
        }
        for (std::size_t n = 0; n < d.Bp.rank(); ++n) {
            Section b2 = d.Bp.basis_section(n, nv);
            rep.add_section_check("subalg_support_bracket_closes",
                                  membership_residual(bpann, r.bB.bracket(b, b2), nv), {m, n});
            rep.add_section_check("subalg_support_bracket_closes",
                                  membership_residual(bpann, r.bB.bracket(b, f * b2), nv), {m, n});
            for (std::size_t c = 0; c < d.U.rank(); ++c)
                rep.add_section_check(
                    "subalg_curvature_into_side_annihilator",
                    dual_membership_residual(d.U, r.R_of(b, b2, d.U.basis_section(c, nv)), nv),
                    {m, n, c});
        }
    }
    for (const char* name : {"subalg_dQ_into_side", "subalg_connection_preserves_side",
                             "subalg_support_bracket_closes",
                             "subalg_curvature_into_side_annihilator"})
        ensure_entry(rep, name);
    return rep;
}

InducedAlgebroid induced_lie_algebroid(const SplitLie2& l, const DoubleSubbundleData& d,
                                       Rng& rng) {
    if (!check_vb_dirac(l, d, rng).verdict())
        throw std::invalid_argument("induced_lie_algebroid: Dirac conditions fail");
    const std::size_t nv = l.nvars();
    const std::size_t k = d.U.rank();

    std::vector<Section> anchor(k);
    for (std::size_t c = 0; c < k; ++c)
        anchor[c] = l.dull.base().anchor_of(d.U.basis_section(c, nv));
    AnchoredBundle ub(FreeModule{"U", k, nv}, anchor);
    std::vector<std::vector<Section>> table(k, std::vector<Section>(k));
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t c2 = 0; c2 < k; ++c2)
            table[c][c2] = d.U.coordinates(
                l.dull.bracket(d.U.basis_section(c, nv), d.U.basis_section(c2, nv)));
    DullBracket induced(ub, table);

    CheckReport rep;
    const Poly f = random_poly(nv, rng);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            for (std::size_t c = 0; c < k; ++c) {
                rep.add_section_check(
                    "induced_jacobi",
                    induced.jacobiator(ub.bundle.frame(a), ub.bundle.frame(b),
                                       ub.bundle.frame(c)),
                    {a, b, c});
                rep.add_section_check(
                    "induced_jacobi",
                    induced.jacobiator(ub.bundle.frame(a), f * ub.bundle.frame(b),
                                       ub.bundle.frame(c)),
                    {a, b, c});
            }
    ensure_entry(rep, "induced_jacobi");

    // Independence of the restricted bracket under an adapted change of
    // splitting: phi = alpha ^ gamma (x) w with alpha annihilating U vanishes
    // on U x U, and the transformed dull bracket differs by -dB* phi(.,.).
    SubBundle uann = d.U.annihilator();
    if (uann.rank() > 0 && l.rank_b() > 0 && k > 0) {
        const std::size_t rq = l.rank_q();
        Section alpha = uann.basis_section(0, nv);
        Section gamma = zero_section(rq, nv);
        Section w = zero_section(l.rank_b(), nv);
        for (std::size_t i = 0; i < rq; ++i) gamma[i] = random_poly(nv, rng);
        for (std::size_t m = 0; m < l.rank_b(); ++m) w[m] = random_poly(nv, rng);
        TensorMap phi({rq, rq}, l.rank_b(), nv, Symmetry::alt);
        for (std::size_t i = 0; i < rq; ++i)
            for (std::size_t j = 0; j < rq; ++j)
                for (std::size_t m = 0; m < l.rank_b(); ++m)
                    phi.coeff({i, j}, m) = (alpha[i] * gamma[j] - gamma[i] * alpha[j]) * w[m];
        std::vector<std::vector<Section>> nt(rq, std::vector<Section>(rq));
        for (std::size_t i = 0; i < rq; ++i)
            for (std::size_t j = 0; j < rq; ++j) {
                Section pv = phi.eval({l.dull.base().bundle.frame(i), l.dull.base().bundle.frame(j)});
                nt[i][j] = l.dull.frame_coeff(i, j) - l.dBstar_of(pv);
            }
        DullBracket transformed(l.dull.base(), nt);
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t c2 = 0; c2 < k; ++c2) {
                Section u1 = d.U.basis_section(c, nv), u2 = d.U.basis_section(c2, nv);
                rep.add_section_check("induced_splitting_independence",
                                      transformed.bracket(u1, u2) - l.dull.bracket(u1, u2),
                                      {c, c2});
            }
    }
    ensure_entry(rep, "induced_splitting_independence");
    return {induced, rep};
}

Matched2Reps restricted_matched_pair(const LACourantSplit& s, const DoubleSubbundleData& d) {
    shape_check(d, s.rank_q(), s.rank_b());
    const std::size_t rb = s.rank_b();
    if (d.Bp.rank() != rb)
        throw std::invalid_argument("restricted_matched_pair: support must be the whole of B");
    const std::size_t nv = s.nvars();
    const std::size_t k = d.U.rank();
    SubBundle uann = d.U.annihilator();
    const std::size_t kc = uann.rank();

    std::vector<Section> anchor(k);
    for (std::size_t c = 0; c < k; ++c)
        anchor[c] = s.lie2.dull.base().anchor_of(d.U.basis_section(c, nv));
    AnchoredBundle ub(FreeModule{"U", k, nv}, anchor);
    std::vector<std::vector<Section>> table(k, std::vector<Section>(k));
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t c2 = 0; c2 < k; ++c2)
            table[c][c2] = d.U.coordinates(
                s.lie2.dull.bracket(d.U.basis_section(c, nv), d.U.basis_section(c2, nv)));
    DullBracket bA(ub, table);

    FreeModule cmod{"Uann", kc, nv};
    PolyMat dA(k, kc, nv), dB(rb, kc, nv);
    for (std::size_t t = 0; t < kc; ++t) {
        Section tau = uann.basis_section(t, nv);
        Section da = d.U.coordinates(s.rep.dQ_of(tau));
        Section db = s.lie2.dB_of(tau);
        for (std::size_t c = 0; c < k; ++c) dA.at(c, t) = da[c];
        for (std::size_t m = 0; m < rb; ++m) dB.at(m, t) = db[m];
    }

    const FreeModule& bmod = s.lie2.B;
    const AnchoredBundle& bb = s.rep.nablaQ.acting();
    std::vector<std::vector<Section>> gab(k, std::vector<Section>(rb));
    std::vector<std::vector<Section>> gac(k, std::vector<Section>(kc));
    for (std::size_t c = 0; c < k; ++c) {
        Section u = d.U.basis_section(c, nv);
        for (std::size_t m = 0; m < rb; ++m) gab[c][m] = s.lie2.nabla.act(u, bmod.frame(m));
        for (std::size_t t = 0; t < kc; ++t)
            gac[c][t] = uann.coordinates(s.lie2.dull.dorfman(u, uann.basis_section(t, nv)));
    }
    std::vector<std::vector<Section>> gba(rb, std::vector<Section>(k));
    std::vector<std::vector<Section>> gbc(rb, std::vector<Section>(kc));
    for (std::size_t m = 0; m < rb; ++m) {
        for (std::size_t c = 0; c < k; ++c)
            gba[m][c] =
                d.U.coordinates(s.rep.nablaQ.act(bmod.frame(m), d.U.basis_section(c, nv)));
        for (std::size_t t = 0; t < kc; ++t)
            gbc[m][t] = uann.coordinates(
                s.rep.nablaQstar.act(bmod.frame(m), uann.basis_section(t, nv)));
    }
    Connection nablaAB(ub, bmod, gab), nablaAC(ub, cmod, gac);
    Connection nablaBA(bb, FreeModule{"U", k, nv}, gba), nablaBC(bb, cmod, gbc);

    TensorMap RA({k, k, rb}, kc, nv), RB({rb, rb, k}, kc, nv);
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t c2 = 0; c2 < k; ++c2)
            for (std::size_t m = 0; m < rb; ++m) {
                Section val = uann.coordinates(s.lie2.omega_pair(
                    d.U.basis_section(c, nv), d.U.basis_section(c2, nv), bmod.frame(m)));
                for (std::size_t t = 0; t < kc; ++t) RA.coeff({c, c2, m}, t) = val[t];
            }
    for (std::size_t m = 0; m < rb; ++m)
        for (std::size_t n = 0; n < rb; ++n)
            for (std::size_t c = 0; c < k; ++c) {
                Section val = uann.coordinates(
                    s.rep.R_of(bmod.frame(m), bmod.frame(n), d.U.basis_section(c, nv)));
                for (std::size_t t = 0; t < kc; ++t) RB.coeff({m, n, c}, t) = val[t];
            }

    return Matched2Reps(bA, s.rep.bB, cmod, dA, dB, nablaAB, nablaAC, nablaBA, nablaBC, RA, RB);
}

CheckReport check_la_dirac(const LACourantSplit& s, const DoubleSubbundleData& d, Rng& rng) {
    CheckReport rep = check_vb_dirac(s.lie2, d, rng);
    rep.merge(check_subalgebroid(s.rep, d, rng));
    if (rep.verdict() && d.Bp.rank() == s.rank_b())
        rep.merge(check_matched_m(restricted_matched_pair(s, d), rng));
    return rep;
}

PseudoDiracData pseudo_dirac(const CourantData& e, const Connection& conn, const SubBundle& u,
                             Rng& rng) {
    const std::size_t nv = e.nvars();
    const std::size_t re = e.rank();
    if (u.ambient_rank() != re)
        throw std::invalid_argument("pseudo_dirac: subbundle ambient rank mismatch");
    if (!e.pairing_mat().is_constant())
        throw std::invalid_argument("pseudo_dirac: pairing must have constant coefficients");
    if (conn.acting().rank() != nv || conn.space().rank != re)
        throw std::invalid_argument("pseudo_dirac: connection shape mismatch");

    RatMat gram(re, re);
    for (std::size_t i = 0; i < re; ++i)
        for (std::size_t j = 0; j < re; ++j)
            gram(i, j) = e.pairing_mat().at(i, j).constant_value();
    Metric beta(gram);

    const FreeModule& tm = conn.acting().bundle;
    const FreeModule& em = conn.space();
    for (std::size_t l = 0; l < nv; ++l)
        for (std::size_t i = 0; i < re; ++i)
            for (std::size_t j = 0; j < re; ++j) {
                Poly res = beta.pairing(conn.frame_coeff(l, i), em.frame(j)) +
                           beta.pairing(em.frame(i), conn.frame_coeff(l, j));
                if (!res.is_zero())
                    throw std::invalid_argument("pseudo_dirac: connection is not metric");
            }
    const std::size_t k = u.rank();
    for (std::size_t l = 0; l < nv; ++l)
        for (std::size_t c = 0; c < k; ++c)
            if (!u.contains(conn.act(tm.frame(l), u.basis_section(c, nv))))
                throw std::invalid_argument(
                    "pseudo_dirac: connection does not preserve the subbundle");

    PseudoDiracData out;
    out.U = u;
    out.nabla_p.assign(nv, std::vector<Section>(k));
    auto ubs = [&](std::size_t c) { return u.basis_section(c, nv); };
    for (std::size_t l = 0; l < nv; ++l)
        for (std::size_t c = 0; c < k; ++c) {
            Section row = zero_section(k, nv);
            for (std::size_t j = 0; j < k; ++j)
                row[j] = beta.pairing(conn.act(tm.frame(l), ubs(c)), ubs(j));
            out.nabla_p[l][c] = row;
        }

    CheckReport& rep = out.report;
    const Poly f = random_poly(nv, rng);
    SubBundle uann = u.annihilator();
    SubBundle uperp = u.orthogonal(beta);

    // One-form <nabla^p a, b> and the corrected bracket
    // [[a, b]]_p = [[a, b]] - beta^{-1} rho^* <nabla^p a, b>.
    auto theta = [&](const Section& a, const Section& b) {
        Section t = zero_section(nv, nv);
        for (std::size_t l = 0; l < nv; ++l) t[l] = beta.pairing(conn.act(tm.frame(l), a), b);
        return t;
    };
    auto bracket_p = [&](const Section& a, const Section& b) {
        return e.bracket(a, b) - beta.sharp(e.E().rho_star(theta(a, b)));
    };

    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t l = 0; l < nv; ++l) {
            Section res = zero_section(k, nv);
            Section cov = conn.act(tm.frame(l), f * ubs(c));
            for (std::size_t j = 0; j < k; ++j)
                res[j] = beta.pairing(cov, ubs(j)) - f * out.nabla_p[l][c][j] -
                         f.derivative(l) * beta.pairing(ubs(c), ubs(j));
            rep.add_section_check("pseudo_leibniz", res, {c, l});
        }
    ensure_entry(rep, "pseudo_leibniz");

    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t c2 = 0; c2 < k; ++c2) {
            Section res = zero_section(nv, nv);
            Poly g = beta.pairing(ubs(c), ubs(c2));
            for (std::size_t l = 0; l < nv; ++l)
                res[l] = g.derivative(l) - out.nabla_p[l][c][c2] - out.nabla_p[l][c2][c];
            rep.add_section_check("pseudo_metric", res, {c, c2});
        }
    ensure_entry(rep, "pseudo_metric");

    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t c2 = 0; c2 < k; ++c2) {
            rep.add_section_check("pseudo_bracket_closes",
                                  membership_residual(uann, bracket_p(ubs(c), ubs(c2)), nv),
                                  {c, c2});
            rep.add_section_check("pseudo_bracket_closes",
                                  membership_residual(uann, bracket_p(ubs(c), f * ubs(c2)), nv),
                                  {c, c2});
        }
    ensure_entry(rep, "pseudo_bracket_closes");

    // Psi(u1,u2,u3) = sum_cyc (<[[u1,u2]]_p, nabla^p u3> + i_{rho(u1)} d<nabla^p u2, u3>)
    //               + d(<nabla^p_{rho(u1)} u2 - nabla^p_{rho(u2)} u1, u3>
    //                   - <[[u1,u2]]_p, u3>).
    auto psi = [&](const Section& u1, const Section& u2, const Section& u3) {
        Section acc = zero_section(nv, nv);
        const Section* cyc[3][3] = {{&u1, &u2, &u3}, {&u2, &u3, &u1}, {&u3, &u1, &u2}};
        for (auto& trip : cyc) {
            const Section &a = *trip[0], &b = *trip[1], &c = *trip[2];
            Section br = bracket_p(a, b);
            Section th = theta(b, c);
            Section x = e.E().anchor_of(a);
            for (std::size_t m = 0; m < nv; ++m) {
                acc[m] += beta.pairing(br, conn.act(tm.frame(m), c));
                for (std::size_t l = 0; l < nv; ++l)
                    acc[m] += x[l] * (th[m].derivative(l) - th[l].derivative(m));
            }
        }
        Poly g = Poly::constant(nv, Rational(0));
        Section x1 = e.E().anchor_of(u1), x2 = e.E().anchor_of(u2);
        Section t23 = theta(u2, u3), t13 = theta(u1, u3);
        for (std::size_t l = 0; l < nv; ++l) g += x1[l] * t23[l] - x2[l] * t13[l];
        g -= beta.pairing(bracket_p(u1, u2), u3);
        return acc + differential(g);
    };

    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t c2 = 0; c2 < k; ++c2)
            for (std::size_t c3 = 0; c3 < k; ++c3) {
                rep.add_section_check("pseudo_flatness_form", psi(ubs(c), ubs(c2), ubs(c3)),
                                      {c, c2, c3});
                rep.add_section_check("pseudo_flatness_form",
                                      psi(ubs(c), f * ubs(c2), ubs(c3)), {c, c2, c3});
                Section jac = bracket_p(bracket_p(ubs(c), ubs(c2)), ubs(c3)) +
                              bracket_p(bracket_p(ubs(c2), ubs(c3)), ubs(c)) +
                              bracket_p(bracket_p(ubs(c3), ubs(c)), ubs(c2));
                Section rhs = beta.sharp(e.E().rho_star(psi(ubs(c), ubs(c2), ubs(c3))));
                rep.add_section_check("pseudo_jacobiator_formula", jac - rhs, {c, c2, c3});
            }
    ensure_entry(rep, "pseudo_flatness_form");
    ensure_entry(rep, "pseudo_jacobiator_formula");

    if (u.contains(uperp))
        rep.add_pass("pseudo_orthogonal_inside");
    else
        rep.add_fail("pseudo_orthogonal_inside",
                     make_witness(Poly::constant(nv, Rational(1)), {}));

    for (std::size_t t = 0; t < uperp.rank(); ++t)
        for (std::size_t l = 0; l < nv; ++l) {
            Section res = zero_section(k, nv);
            Section cov = conn.act(tm.frame(l), uperp.basis_section(t, nv));
            for (std::size_t j = 0; j < k; ++j) res[j] = beta.pairing(cov, ubs(j));
            rep.add_section_check("pseudo_orthogonal_parallel", res, {t, l});
        }
    ensure_entry(rep, "pseudo_orthogonal_parallel");

    std::vector<std::vector<Section>> zt(nv, std::vector<Section>(nv, zero_section(nv, nv)));
    DullBracket tmdull(conn.acting(), zt);
    for (std::size_t l = 0; l < nv; ++l)
        for (std::size_t m = 0; m < nv; ++m)
            for (std::size_t c = 0; c < k; ++c) {
                Section curv = conn.curvature(tmdull, tm.frame(l), tm.frame(m), ubs(c));
                Section res = zero_section(k, nv);
                for (std::size_t j = 0; j < k; ++j) res[j] = beta.pairing(curv, ubs(j));
                rep.add_section_check("pseudo_quotient_flat", res, {l, m, c});
            }
    ensure_entry(rep, "pseudo_quotient_flat");
    return out;
}

} // namespace lakit
