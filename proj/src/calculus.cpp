#include "lakit/calculus.hpp"

#include <algorithm>
#include <stdexcept>

namespace lakit {

AnchoredBundle::AnchoredBundle(FreeModule m, std::vector<Section> a)
    : bundle(std::move(m)), anchor(std::move(a)) {
    if (anchor.size() != bundle.rank)
        throw std::invalid_argument("AnchoredBundle: one anchor image per frame element");
    for (const auto& vf : anchor)
        if (vf.size() != bundle.nvars)
            throw std::invalid_argument("AnchoredBundle: anchor images are base vector fields");
}

Section AnchoredBundle::anchor_of(const Section& q) const {
    if (q.size() != rank()) throw std::invalid_argument("AnchoredBundle: rank mismatch");
    Section out = zero_section(nvars(), nvars());
    for (std::size_t i = 0; i < rank(); ++i) out = out + q[i] * anchor[i];
    return out;
}

Poly AnchoredBundle::rho(const Section& q, const Poly& f) const {
    return apply_derivation(anchor_of(q), f);
}

Section AnchoredBundle::rho_star(const Section& theta) const {
    if (theta.size() != nvars()) throw std::invalid_argument("rho_star: expects a base one-form");
    Section out = zero_section(rank(), nvars());
    for (std::size_t i = 0; i < rank(); ++i) out[i] = pair(theta, anchor[i]);
    return out;
}

DullBracket::DullBracket(AnchoredBundle q, std::vector<std::vector<Section>> coeffs)
    : q_(std::move(q)), c_(std::move(coeffs)) {
    const std::size_t r = q_.rank();
    if (c_.size() != r) throw std::invalid_argument("DullBracket: coefficient table shape");
    for (const auto& row : c_) {
        if (row.size() != r) throw std::invalid_argument("DullBracket: coefficient table shape");
        for (const auto& s : row)
            if (s.size() != r) throw std::invalid_argument("DullBracket: coefficient rank");
    }
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            if (!section_eq(c_[i][j], -c_[j][i]))
                throw std::invalid_argument("DullBracket: table must be skew-symmetric");
}

Section DullBracket::bracket(const Section& q1, const Section& q2) const {
    const std::size_t r = rank();
    if (q1.size() != r || q2.size() != r) throw std::invalid_argument("DullBracket: rank mismatch");
    Section out = q_.bundle.zero();
    for (std::size_t i = 0; i < r; ++i) {
        if (q1[i].is_zero()) continue;
        for (std::size_t j = 0; j < r; ++j) {
            Poly s = q1[i] * q2[j];
            if (!s.is_zero()) out = out + s * c_[i][j];
        }
    }
    Section rho1 = q_.anchor_of(q1), rho2 = q_.anchor_of(q2);
    for (std::size_t j = 0; j < r; ++j) {
        out[j] += apply_derivation(rho1, q2[j]);
        out[j] -= apply_derivation(rho2, q1[j]);
    }
    return out;
}

Section DullBracket::jacobiator(const Section& q1, const Section& q2, const Section& q3) const {
    return bracket(bracket(q1, q2), q3) + bracket(bracket(q2, q3), q1) +
           bracket(bracket(q3, q1), q2);
}

Section DullBracket::dorfman(const Section& q, const Section& tau) const {
    const std::size_t r = rank();
    if (q.size() != r || tau.size() != r) throw std::invalid_argument("dorfman: rank mismatch");
    Section out = q_.bundle.zero();
    // <e_j, Delta_{e_i} eps_a> = -<[[e_i, e_j]], eps_a>
    for (std::size_t i = 0; i < r; ++i) {
        if (q[i].is_zero()) continue;
        for (std::size_t a = 0; a < r; ++a) {
            if (tau[a].is_zero()) continue;
            Poly s = q[i] * tau[a];
            for (std::size_t j = 0; j < r; ++j) out[j] -= s * c_[i][j][a];
        }
    }
    Section rhoq = q_.anchor_of(q);
    for (std::size_t a = 0; a < r; ++a) out[a] += apply_derivation(rhoq, tau[a]);
    for (std::size_t i = 0; i < r; ++i) {
        if (q[i].is_constant()) continue;
        out = out + tau[i] * q_.rho_star(differential(q[i]));
    }
    return out;
}

Section DullBracket::dorfman_curvature(const Section& q1, const Section& q2,
                                       const Section& tau) const {
    return dorfman(q1, dorfman(q2, tau)) - dorfman(q2, dorfman(q1, tau)) -
           dorfman(bracket(q1, q2), tau);
}

Connection::Connection(AnchoredBundle d, FreeModule e, std::vector<std::vector<Section>> coeffs)
    : d_(std::move(d)), e_(std::move(e)), g_(std::move(coeffs)) {
    if (g_.size() != d_.rank()) throw std::invalid_argument("Connection: table shape");
    for (const auto& row : g_) {
        if (row.size() != e_.rank) throw std::invalid_argument("Connection: table shape");
        for (const auto& s : row)
            if (s.size() != e_.rank) throw std::invalid_argument("Connection: coefficient rank");
    }
    if (d_.nvars() != e_.nvars) throw std::invalid_argument("Connection: base mismatch");
}

Section Connection::act(const Section& d, const Section& s) const {
    if (d.size() != d_.rank() || s.size() != e_.rank)
        throw std::invalid_argument("Connection::act: rank mismatch");
    Section out = e_.zero();
    for (std::size_t i = 0; i < d_.rank(); ++i) {
        if (d[i].is_zero()) continue;
        for (std::size_t j = 0; j < e_.rank; ++j) {
            Poly f = d[i] * s[j];
            if (!f.is_zero()) out = out + f * g_[i][j];
        }
    }
    Section rhod = d_.anchor_of(d);
    for (std::size_t j = 0; j < e_.rank; ++j) out[j] += apply_derivation(rhod, s[j]);
    return out;
}

Connection Connection::dual() const {
    std::vector<std::vector<Section>> dual_g(
        d_.rank(), std::vector<Section>(e_.rank, zero_section(e_.rank, e_.nvars)));
    for (std::size_t i = 0; i < d_.rank(); ++i)
        for (std::size_t a = 0; a < e_.rank; ++a)
            for (std::size_t j = 0; j < e_.rank; ++j) dual_g[i][a][j] = -g_[i][j][a];
    FreeModule dual_mod{e_.name + "*", e_.rank, e_.nvars};
    return Connection(d_, dual_mod, std::move(dual_g));
}

Section Connection::curvature(const DullBracket& bd, const Section& d1, const Section& d2,
                              const Section& s) const {
    return act(d1, act(d2, s)) - act(d2, act(d1, s)) - act(bd.bracket(d1, d2), s);
}

CheckReport check_dull_axioms(const DullBracket& dull, Rng& rng) {
    CheckReport rep;
    const std::size_t r = dull.rank();
    const std::size_t nv = dull.nvars();
    const auto& Q = dull.base();
    Poly f = random_poly(nv, rng);
    for (std::size_t i = 0; i < r; ++i) {
        Section ei = Q.bundle.frame(i);
        for (std::size_t j = 0; j < r; ++j) {
            Section ej = Q.bundle.frame(j);
            rep.add_section_check("skew_symmetry",
                                  dull.bracket(ei, ej) + dull.bracket(ej, ei), {i, j});
            rep.add_section_check("leibniz",
                                  dull.bracket(ei, f * ej) - f * dull.bracket(ei, ej) -
                                      Q.rho(ei, f) * ej,
                                  {i, j});
            // anchor compatibility, on frames and with a scaled argument
            rep.add_section_check("anchor_compatibility",
                                  Q.anchor_of(dull.bracket(ei, ej)) -
                                      vf_bracket(Q.anchor_of(ei), Q.anchor_of(ej)),
                                  {i, j});
            rep.add_section_check("anchor_compatibility",
                                  Q.anchor_of(dull.bracket(ei, f * ej)) -
                                      vf_bracket(Q.anchor_of(ei), Q.anchor_of(f * ej)),
                                  {i, j});
        }
    }
    if (r == 0)
        for (const char* ax : {"skew_symmetry", "leibniz", "anchor_compatibility"})
            rep.add_pass(ax);
    return rep;
}

namespace {

// Fill an alternating output tensor from values computed on strictly
// increasing frame tuples.
void fill_alternating(TensorMap& out, const std::vector<std::size_t>& sorted_idx,
                      const Section& value) {
    std::vector<std::size_t> perm(sorted_idx.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    // iterate over all permutations, tracking sign
    std::sort(perm.begin(), perm.end());
    do {
        int sign = 1;
        for (std::size_t i = 0; i < perm.size(); ++i)
            for (std::size_t j = i + 1; j < perm.size(); ++j)
                if (perm[i] > perm[j]) sign = -sign;
        std::vector<std::size_t> idx(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) idx[i] = sorted_idx[perm[i]];
        for (std::size_t v = 0; v < value.size(); ++v)
            out.coeff(idx, out.out_rank() ? v : 0) =
                sign > 0 ? value[v] : -value[v];
    } while (std::next_permutation(perm.begin(), perm.end()));
}

template <typename ActFn>
TensorMap koszul_impl(const DullBracket& dull, const TensorMap& omega, std::size_t out_rank,
                      ActFn&& act) {
    const std::size_t r = dull.rank();
    const std::size_t k = omega.arity();
    for (std::size_t ar : omega.arg_ranks())
        if (ar != r) throw std::invalid_argument("koszul_d: form must live on the bracket bundle");
    omega.validate();
    TensorMap out(std::vector<std::size_t>(k + 1, r), omega.out_rank(), omega.nvars(),
                  Symmetry::alt);
    const std::size_t vals = out_rank ? out_rank : 1;
    // strictly increasing (k+1)-tuples
    std::vector<std::size_t> idx(k + 1);
    for (std::size_t i = 0; i <= k; ++i) idx[i] = i;
    if (k + 1 > r) return out;
    while (true) {
        // Koszul formula on the frame tuple
        Section value = zero_section(vals, omega.nvars());
        for (std::size_t i = 0; i <= k; ++i) {
            std::vector<Section> args;
            for (std::size_t t = 0; t <= k; ++t)
                if (t != i) args.push_back(dull.base().bundle.frame(idx[t]));
            Section w = omega.out_rank() ? omega.eval(args) : Section{omega.eval_scalar(args)};
            Section term = act(dull.base().bundle.frame(idx[i]), w);
            value = (i % 2 == 0) ? value + term : value - term;
        }
        for (std::size_t i = 0; i <= k; ++i)
            for (std::size_t j = i + 1; j <= k; ++j) {
                std::vector<Section> args;
                args.push_back(dull.bracket(dull.base().bundle.frame(idx[i]),
                                            dull.base().bundle.frame(idx[j])));
                for (std::size_t t = 0; t <= k; ++t)
                    if (t != i && t != j) args.push_back(dull.base().bundle.frame(idx[t]));
                Section w = omega.out_rank() ? omega.eval(args) : Section{omega.eval_scalar(args)};
                value = ((i + j) % 2 == 0) ? value + w : value - w;
            }
        fill_alternating(out, idx, value);
        // next strictly increasing tuple
        std::size_t pos = k + 1;
        while (pos > 0) {
            --pos;
            if (idx[pos] + (k - pos) + 1 < r) {
                ++idx[pos];
                for (std::size_t t = pos + 1; t <= k; ++t) idx[t] = idx[t - 1] + 1;
                break;
            }
            if (pos == 0) return out;
        }
    }
}

} // namespace

TensorMap koszul_d(const DullBracket& dull, const TensorMap& omega) {
    if (omega.out_rank() != 0) throw std::invalid_argument("koszul_d: expected scalar-valued form");
    return koszul_impl(dull, omega, 0, [&](const Section& q, const Section& w) {
        return Section{dull.base().rho(q, w[0])};
    });
}

TensorMap koszul_d(const DullBracket& dull, const Connection& nabla, const TensorMap& omega) {
    if (omega.out_rank() != nabla.space().rank)
        throw std::invalid_argument("koszul_d: form values must live in the connection space");
    return koszul_impl(dull, omega, nabla.space().rank,
                       [&](const Section& q, const Section& w) { return nabla.act(q, w); });
}

} // namespace lakit
