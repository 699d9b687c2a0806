#include "lakit/graded.hpp"

#include <algorithm>

namespace lakit {

namespace {

// sign of interleaving two strictly increasing odd-index lists; nullopt when
// they intersect (odd square = 0)
std::optional<int> merge_odd(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
                             std::vector<std::size_t>& out) {
    out.clear();
    int sign = 1;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i] < b[j])) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j] < a[i]) {
            // b[j] moves past the remaining a-entries
            if ((a.size() - i) % 2 == 1) sign = -sign;
            out.push_back(b[j++]);
        } else {
            return std::nullopt;
        }
    }
    return sign;
}

} // namespace

GradedFunction::GradedFunction(std::size_t rq, std::size_t rb, std::size_t nvars,
                               std::size_t trunc)
    : rq_(rq), rb_(rb), nvars_(nvars), trunc_(trunc) {}

GradedFunction GradedFunction::from_poly(std::size_t rq, std::size_t rb, std::size_t trunc,
                                         const Poly& p) {
    GradedFunction g(rq, rb, p.nvars(), trunc);
    g.add_term({}, p);
    return g;
}

GradedFunction GradedFunction::generator_tau(std::size_t rq, std::size_t rb, std::size_t nvars,
                                             std::size_t trunc, std::size_t a) {
    GradedFunction g(rq, rb, nvars, trunc);
    g.add_term({{a}, {}}, Poly::constant(nvars, 1));
    return g;
}

GradedFunction GradedFunction::generator_b(std::size_t rq, std::size_t rb, std::size_t nvars,
                                           std::size_t trunc, std::size_t m) {
    GradedFunction g(rq, rb, nvars, trunc);
    g.add_term({{}, {m}}, Poly::constant(nvars, 1));
    return g;
}

GradedFunction GradedFunction::monomial(std::size_t rq, std::size_t rb, std::size_t nvars,
                                        std::size_t trunc, GradedKey key) {
    GradedFunction g(rq, rb, nvars, trunc);
    g.add_term(std::move(key), Poly::constant(nvars, 1));
    return g;
}

bool GradedFunction::is_homogeneous() const {
    if (terms_.empty()) return true;
    std::size_t d = terms_.begin()->first.degree();
    for (const auto& [k, p] : terms_)
        if (k.degree() != d) return false;
    return true;
}

std::size_t GradedFunction::degree() const {
    std::size_t d = 0;
    for (const auto& [k, p] : terms_) d = std::max(d, k.degree());
    return d;
}

void GradedFunction::add_term(GradedKey key, const Poly& coeff) {
    if (coeff.is_zero()) return;
    if (!std::is_sorted(key.qs.begin(), key.qs.end(), std::less_equal<>()))
        throw std::invalid_argument("GradedFunction: odd indices must be strictly increasing");
    if (!std::is_sorted(key.bs.begin(), key.bs.end()))
        throw std::invalid_argument("GradedFunction: even indices must be weakly increasing");
    for (std::size_t a : key.qs)
        if (a >= rq_) throw std::invalid_argument("GradedFunction: odd index out of range");
    for (std::size_t m : key.bs)
        if (m >= rb_) throw std::invalid_argument("GradedFunction: even index out of range");
    if (key.degree() > trunc_) throw TruncationOverflow(key.degree(), trunc_);
    if (coeff.nvars() != nvars_) throw std::invalid_argument("GradedFunction: nvars mismatch");
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(std::move(key), coeff);
    } else {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void GradedFunction::check_compatible(const GradedFunction& o) const {
    if (rq_ != o.rq_ || rb_ != o.rb_ || nvars_ != o.nvars_ || trunc_ != o.trunc_)
        throw std::invalid_argument("GradedFunction: incompatible algebras");
}

GradedFunction& GradedFunction::operator+=(const GradedFunction& o) {
    check_compatible(o);
    for (const auto& [k, p] : o.terms_) add_term(k, p);
    return *this;
}

GradedFunction& GradedFunction::operator-=(const GradedFunction& o) {
    check_compatible(o);
    for (const auto& [k, p] : o.terms_) add_term(k, -p);
    return *this;
}

GradedFunction GradedFunction::operator-() const {
    GradedFunction out(rq_, rb_, nvars_, trunc_);
    for (const auto& [k, p] : terms_) out.terms_.emplace(k, -p);
    return out;
}

GradedFunction operator*(const Poly& p, const GradedFunction& g) {
    GradedFunction out(g.rq_, g.rb_, g.nvars_, g.trunc_);
    for (const auto& [k, c] : g.terms_) out.add_term(k, p * c);
    return out;
}

GradedFunction graded_mul(const GradedFunction& a, const GradedFunction& b) {
    if (a.rank_q() != b.rank_q() || a.rank_b() != b.rank_b() || a.nvars() != b.nvars() ||
        a.truncation() != b.truncation())
        throw std::invalid_argument("graded_mul: incompatible algebras");
    GradedFunction out(a.rank_q(), a.rank_b(), a.nvars(), a.truncation());
    std::vector<std::size_t> qs;
    for (const auto& [k1, p1] : a.terms())
        for (const auto& [k2, p2] : b.terms()) {
            auto sign = merge_odd(k1.qs, k2.qs, qs);
            if (!sign) continue;
            GradedKey key;
            key.qs = qs;
            key.bs.reserve(k1.bs.size() + k2.bs.size());
            std::merge(k1.bs.begin(), k1.bs.end(), k2.bs.begin(), k2.bs.end(),
                       std::back_inserter(key.bs));
            Poly c = p1 * p2;
            if (*sign < 0) c = -c;
            out.add_term(std::move(key), c);
        }
    return out;
}

GradedFunction embed_form(const TensorMap& eta, std::size_t rb, std::size_t trunc) {
    if (eta.symmetry() != Symmetry::alt && eta.arity() > 1)
        throw std::invalid_argument("embed_form: alternating form expected");
    if (eta.out_rank() != 0) throw std::invalid_argument("embed_form: scalar-valued form expected");
    const std::size_t rq = eta.arity() ? eta.arg_ranks()[0] : 0;
    GradedFunction out(rq, rb, eta.nvars(), trunc);
    std::vector<std::size_t> idx(eta.arity(), 0);
    // iterate strictly increasing tuples
    auto next = [&]() {
        std::size_t k = eta.arity();
        while (k > 0) {
            --k;
            if (++idx[k] <= rq - (eta.arity() - k)) {
                for (std::size_t l = k + 1; l < eta.arity(); ++l) idx[l] = idx[l - 1] + 1;
                return true;
            }
        }
        return false;
    };
    if (eta.arity() == 0) {
        out.add_term({}, eta.coeff({}, 0));
        return out;
    }
    if (rq < eta.arity()) return out;
    for (std::size_t l = 0; l < eta.arity(); ++l) idx[l] = l;
    do {
        out.add_term({idx, {}}, eta.coeff(idx, 0));
    } while (next());
    return out;
}

GradedFunction embed_qstar(const Section& tau, std::size_t rb, std::size_t nvars,
                           std::size_t trunc) {
    const std::size_t rq = tau.size();
    GradedFunction out(rq, rb, nvars, trunc);
    for (std::size_t a = 0; a < rq; ++a) out.add_term({{a}, {}}, tau[a]);
    return out;
}

GradedFunction embed_b(const Section& b, std::size_t rq, std::size_t nvars, std::size_t trunc) {
    const std::size_t rb = b.size();
    GradedFunction out(rq, rb, nvars, trunc);
    for (std::size_t m = 0; m < rb; ++m) out.add_term({{}, {m}}, b[m]);
    return out;
}

GradedDerivation::GradedDerivation(int degree, std::vector<GradedFunction> on_x,
                                   std::vector<GradedFunction> on_tau,
                                   std::vector<GradedFunction> on_b)
    : degree_(degree), on_x_(std::move(on_x)), on_tau_(std::move(on_tau)),
      on_b_(std::move(on_b)) {
    const GradedFunction* any = nullptr;
    for (const auto* v : {&on_x_, &on_tau_, &on_b_})
        if (!v->empty()) any = &v->front();
    if (any) {
        rq_ = any->rank_q();
        rb_ = any->rank_b();
        nvars_ = any->nvars();
        trunc_ = any->truncation();
    }
    auto check = [&](const std::vector<GradedFunction>& v, int gen_degree, const char* what) {
        for (const auto& g : v) {
            if (g.rank_q() != rq_ || g.rank_b() != rb_ || g.nvars() != nvars_ ||
                g.truncation() != trunc_)
                throw std::invalid_argument(std::string("GradedDerivation: image shape on ") +
                                            what);
            int d = gen_degree + degree_;
            if (d < 0 && !g.is_zero())
                throw std::invalid_argument(
                    std::string("GradedDerivation: negative-degree image on ") + what);
            if (!g.is_zero() && (!g.is_homogeneous() || g.degree() != std::size_t(d)))
                throw std::invalid_argument(
                    std::string("GradedDerivation: inhomogeneous image on ") + what);
        }
    };
    check(on_x_, 0, "coordinates");
    check(on_tau_, 1, "odd generators");
    check(on_b_, 2, "even generators");
    if (on_x_.size() != nvars_ || on_tau_.size() != rq_ || on_b_.size() != rb_)
        throw std::invalid_argument("GradedDerivation: one image per generator expected");
}

GradedFunction GradedDerivation::apply(const GradedFunction& f) const {
    if (f.rank_q() != rq_ || f.rank_b() != rb_ || f.nvars() != nvars_ ||
        f.truncation() != trunc_)
        throw std::invalid_argument("GradedDerivation: argument algebra mismatch");
    GradedFunction out(rq_, rb_, nvars_, trunc_);
    const bool odd = (degree_ % 2) != 0;
    for (const auto& [key, p] : f.terms()) {
        GradedFunction mono = GradedFunction::monomial(rq_, rb_, nvars_, trunc_, key);
        // chain rule on the polynomial coefficient (degree 0, no sign)
        for (std::size_t l = 0; l < nvars_; ++l) {
            Poly dl = p.derivative(l);
            if (!dl.is_zero() && !on_x_[l].is_zero())
                out += graded_mul(dl * on_x_[l], mono);
        }
        // Leibniz over the generator factors (odd first, then even)
        const std::size_t nq = key.qs.size();
        const std::size_t nfac = nq + key.bs.size();
        for (std::size_t pos = 0; pos < nfac; ++pos) {
            const bool is_q = pos < nq;
            const GradedFunction& img =
                is_q ? on_tau_[key.qs[pos]] : on_b_[key.bs[pos - nq]];
            if (img.is_zero()) continue;
            GradedKey pre, post;
            if (is_q) {
                pre.qs.assign(key.qs.begin(), key.qs.begin() + pos);
                post.qs.assign(key.qs.begin() + pos + 1, key.qs.end());
                post.bs = key.bs;
            } else {
                pre.qs = key.qs;
                pre.bs.assign(key.bs.begin(), key.bs.begin() + (pos - nq));
                post.bs.assign(key.bs.begin() + (pos - nq) + 1, key.bs.end());
            }
            // Koszul sign: derivation degree times degree of the prefix
            const bool flip = odd && (pre.qs.size() % 2 == 1);
            GradedFunction term = graded_mul(
                graded_mul(GradedFunction::monomial(rq_, rb_, nvars_, trunc_, pre), img),
                GradedFunction::monomial(rq_, rb_, nvars_, trunc_, post));
            out += flip ? p * (-term) : p * term;
        }
    }
    return out;
}

GradedDerivation commutator(const GradedDerivation& X, const GradedDerivation& Y) {
    const bool flip = (X.degree() % 2 != 0) && (Y.degree() % 2 != 0);
    auto bracket_on = [&](const GradedFunction& gen) {
        GradedFunction r = X.apply(Y.apply(gen));
        GradedFunction s = Y.apply(X.apply(gen));
        return flip ? r + s : r - s;
    };
    const std::size_t rq = X.rank_q(), rb = X.rank_b(), nv = X.nvars(), tr = X.truncation();
    std::vector<GradedFunction> on_x, on_tau, on_b;
    for (std::size_t l = 0; l < nv; ++l)
        on_x.push_back(bracket_on(
            GradedFunction::from_poly(rq, rb, tr, Poly::variable(nv, l))));
    for (std::size_t a = 0; a < rq; ++a)
        on_tau.push_back(bracket_on(GradedFunction::generator_tau(rq, rb, nv, tr, a)));
    for (std::size_t m = 0; m < rb; ++m)
        on_b.push_back(bracket_on(GradedFunction::generator_b(rq, rb, nv, tr, m)));
    return GradedDerivation(X.degree() + Y.degree(), std::move(on_x), std::move(on_tau),
                            std::move(on_b));
}

PoissonBracket::PoissonBracket(std::vector<GradedDerivation> ham_x,
                               std::vector<GradedDerivation> ham_tau,
                               std::vector<GradedDerivation> ham_b)
    : ham_x_(std::move(ham_x)), ham_tau_(std::move(ham_tau)), ham_b_(std::move(ham_b)) {
    const GradedDerivation* any = nullptr;
    for (const auto* v : {&ham_x_, &ham_tau_, &ham_b_})
        if (!v->empty()) any = &v->front();
    if (any) {
        rq_ = any->rank_q();
        rb_ = any->rank_b();
        nvars_ = any->nvars();
        trunc_ = any->truncation();
    }
    auto check = [&](const std::vector<GradedDerivation>& v, int want_degree) {
        for (const auto& d : v) {
            if (d.rank_q() != rq_ || d.rank_b() != rb_ || d.nvars() != nvars_ ||
                d.truncation() != trunc_ || d.degree() != want_degree)
                throw std::invalid_argument("PoissonBracket: Hamiltonian derivation shape");
        }
    };
    check(ham_x_, -2);
    check(ham_tau_, -1);
    check(ham_b_, 0);
    if (ham_x_.size() != nvars_ || ham_tau_.size() != rq_ || ham_b_.size() != rb_)
        throw std::invalid_argument("PoissonBracket: one derivation per generator expected");
}

GradedFunction PoissonBracket::bracket(const GradedFunction& a, const GradedFunction& b) const {
    if (a.rank_q() != rq_ || a.rank_b() != rb_ || a.nvars() != nvars_ ||
        a.truncation() != trunc_)
        throw std::invalid_argument("PoissonBracket: argument algebra mismatch");
    GradedFunction out(rq_, rb_, nvars_, trunc_);
    auto mono = [&](const GradedKey& k) {
        return GradedFunction::monomial(rq_, rb_, nvars_, trunc_, k);
    };
    for (const auto& [k2, p2] : b.terms()) {
        GradedFunction zeta(rq_, rb_, nvars_, trunc_);
        zeta.add_term(k2, p2);
        const bool zodd = k2.degree() % 2 == 1;
        for (const auto& [k1, p1] : a.terms()) {
            // peel the first slot from the left:
            //   {F1..Fn, z} = F1 {F2..Fn, z} + (-1)^{|F2..Fn||z|} {F1, z} F2..Fn
            const std::size_t nq = k1.qs.size();
            const std::size_t nfac = nq + k1.bs.size();
            GradedFunction acc(rq_, rb_, nvars_, trunc_);
            for (std::size_t pos = 0; pos < nfac; ++pos) {
                const bool is_q = pos < nq;
                const GradedDerivation& ham =
                    is_q ? ham_tau_[k1.qs[pos]] : ham_b_[k1.bs[pos - nq]];
                GradedKey pre, post;
                if (is_q) {
                    pre.qs.assign(k1.qs.begin(), k1.qs.begin() + pos);
                    post.qs.assign(k1.qs.begin() + pos + 1, k1.qs.end());
                    post.bs = k1.bs;
                } else {
                    pre.qs = k1.qs;
                    pre.bs.assign(k1.bs.begin(), k1.bs.begin() + (pos - nq));
                    post.bs.assign(k1.bs.begin() + (pos - nq) + 1, k1.bs.end());
                }
                const bool flip = zodd && (post.qs.size() % 2 == 1);
                GradedFunction term =
                    graded_mul(graded_mul(mono(pre), ham.apply(zeta)), mono(post));
                acc += flip ? -term : term;
            }
            out += p1 * acc;
            // chain rule on the coefficient:
            //   {p M, z} = p {M, z} + (-1)^{|M||z|} {p, z} M
            const bool mflip = zodd && (nq % 2 == 1);
            for (std::size_t l = 0; l < nvars_; ++l) {
                Poly dl = p1.derivative(l);
                if (dl.is_zero()) continue;
                GradedFunction term = graded_mul(dl * ham_x_[l].apply(zeta), mono(k1));
                out += mflip ? -term : term;
            }
        }
    }
    return out;
}

PoissonBracket poisson_from_selfdual(const SelfDual2Rep& rep, std::size_t trunc) {
    const std::size_t rq = rep.rank_q(), rb = rep.rank_b(), nv = rep.nvars();
    auto zero = [&] { return GradedFunction(rq, rb, nv, trunc); };
    auto zeros = [&](std::size_t n) { return std::vector<GradedFunction>(n, zero()); };
    const auto& Bm = rep.bB.base().bundle;

    // R(b_m, b_n) as a degree-2 function (element of Lambda^2 Q*)
    auto r_form = [&](std::size_t m, std::size_t n) {
        GradedFunction out = zero();
        for (std::size_t i = 0; i < rq; ++i) {
            Section ri = rep.R_of(Bm.frame(m), Bm.frame(n), frame_section(rq, nv, i));
            for (std::size_t j = i + 1; j < rq; ++j) out.add_term({{i, j}, {}}, ri[j]);
        }
        return out;
    };

    std::vector<GradedDerivation> ham_x, ham_tau, ham_b;
    for (std::size_t l = 0; l < nv; ++l) {
        std::vector<GradedFunction> on_b;
        for (std::size_t m = 0; m < rb; ++m)
            on_b.push_back(GradedFunction::from_poly(
                rq, rb, trunc, -rep.bB.base().anchor[m][l])); // {x_l, b_m} = -rho_B(b_m)(x_l)
        ham_x.emplace_back(-2, zeros(nv), zeros(rq), std::move(on_b));
    }
    for (std::size_t a = 0; a < rq; ++a) {
        std::vector<GradedFunction> on_tau, on_b;
        for (std::size_t c = 0; c < rq; ++c)
            on_tau.push_back(GradedFunction::from_poly(rq, rb, trunc, rep.dQ.at(c, a)));
        for (std::size_t m = 0; m < rb; ++m)
            on_b.push_back(embed_qstar(
                -rep.nablaQstar.act(Bm.frame(m), frame_section(rq, nv, a)), rb, nv, trunc));
        ham_tau.emplace_back(-1, zeros(nv), std::move(on_tau), std::move(on_b));
    }
    for (std::size_t m = 0; m < rb; ++m) {
        std::vector<GradedFunction> on_x, on_tau, on_b;
        for (std::size_t l = 0; l < nv; ++l)
            on_x.push_back(GradedFunction::from_poly(rq, rb, trunc, rep.bB.base().anchor[m][l]));
        for (std::size_t a = 0; a < rq; ++a)
            on_tau.push_back(embed_qstar(
                rep.nablaQstar.act(Bm.frame(m), frame_section(rq, nv, a)), rb, nv, trunc));
        for (std::size_t n = 0; n < rb; ++n)
            on_b.push_back(embed_b(rep.bB.bracket(Bm.frame(m), Bm.frame(n)), rq, nv, trunc) -
                           r_form(m, n));
        ham_b.emplace_back(0, std::move(on_x), std::move(on_tau), std::move(on_b));
    }
    return PoissonBracket(std::move(ham_x), std::move(ham_tau), std::move(ham_b));
}

namespace {

// record a graded-function identity discrepancy by flattening its
// coefficients into a section (component index = term order)
void add_graded_check(CheckReport& rep, const std::string& axiom, const GradedFunction& disc,
                      std::vector<std::size_t> frames) {
    Section flat;
    for (const auto& [k, p] : disc.terms()) flat.push_back(p);
    rep.add_section_check(axiom, flat, std::move(frames));
}

std::vector<GradedFunction> all_generators(std::size_t rq, std::size_t rb, std::size_t nv,
                                           std::size_t tr) {
    std::vector<GradedFunction> gens;
    for (std::size_t l = 0; l < nv; ++l)
        gens.push_back(GradedFunction::from_poly(rq, rb, tr, Poly::variable(nv, l)));
    for (std::size_t a = 0; a < rq; ++a)
        gens.push_back(GradedFunction::generator_tau(rq, rb, nv, tr, a));
    for (std::size_t m = 0; m < rb; ++m)
        gens.push_back(GradedFunction::generator_b(rq, rb, nv, tr, m));
    return gens;
}

// random homogeneous function of the given degree (zero if unrealizable)
GradedFunction random_homogeneous(std::size_t rq, std::size_t rb, std::size_t nv, std::size_t tr,
                                  std::size_t degree, Rng& rng) {
    GradedFunction out(rq, rb, nv, tr);
    for (std::size_t k = (degree % 2 == 0) ? 0 : 1; k <= std::min(rq, degree); k += 2) {
        if (rb == 0 && k < degree) continue;
        GradedKey key;
        // random strictly increasing k-subset of the odd indices
        std::vector<std::size_t> pool(rq);
        for (std::size_t i = 0; i < rq; ++i) pool[i] = i;
        std::shuffle(pool.begin(), pool.end(), rng);
        key.qs.assign(pool.begin(), pool.begin() + k);
        std::sort(key.qs.begin(), key.qs.end());
        for (std::size_t j = 0; j < (degree - k) / 2; ++j)
            key.bs.push_back(std::uniform_int_distribution<std::size_t>(0, rb - 1)(rng));
        std::sort(key.bs.begin(), key.bs.end());
        out.add_term(key, random_poly(nv, rng));
    }
    return out;
}

} // namespace

CheckReport check_poisson_axioms(const PoissonBracket& pb, std::size_t bound, Rng& rng) {
    CheckReport rep;
    const std::size_t rq = pb.rank_q(), rb = pb.rank_b(), nv = pb.nvars(), tr = pb.truncation();
    auto gens = all_generators(rq, rb, nv, tr);
    auto deg = [](const GradedFunction& g) { return g.degree(); };
    auto skew = [&](const GradedFunction& x, const GradedFunction& y) {
        const bool flip = deg(x) % 2 == 1 && deg(y) % 2 == 1;
        GradedFunction r = pb.bracket(x, y);
        GradedFunction s = pb.bracket(y, x);
        return flip ? r - s : r + s;
    };
    auto jacobi = [&](const GradedFunction& x, const GradedFunction& y, const GradedFunction& z) {
        const bool flip = deg(x) % 2 == 1 && deg(y) % 2 == 1;
        GradedFunction inner = pb.bracket(x, pb.bracket(y, z)) -
                               pb.bracket(pb.bracket(x, y), z);
        GradedFunction swapped = pb.bracket(y, pb.bracket(x, z));
        return flip ? inner + swapped : inner - swapped;
    };
    auto leibniz = [&](const GradedFunction& x, const GradedFunction& y, const GradedFunction& z) {
        const bool flip = deg(x) % 2 == 1 && deg(y) % 2 == 1;
        GradedFunction d = pb.bracket(x, graded_mul(y, z)) -
                           graded_mul(pb.bracket(x, y), z);
        GradedFunction second = graded_mul(y, pb.bracket(x, z));
        return flip ? d + second : d - second;
    };
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = 0; j < gens.size(); ++j)
            add_graded_check(rep, "poisson_skew", skew(gens[i], gens[j]), {i, j});
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = 0; j < gens.size(); ++j)
            for (std::size_t k = 0; k < gens.size(); ++k) {
                add_graded_check(rep, "poisson_jacobi", jacobi(gens[i], gens[j], gens[k]),
                                 {i, j, k});
                add_graded_check(rep, "poisson_leibniz", leibniz(gens[i], gens[j], gens[k]),
                                 {i, j, k});
            }
    // randomized non-generator spot checks up to the degree bound
    for (std::size_t trial = 0; trial < 4; ++trial) {
        std::uniform_int_distribution<std::size_t> pick(0, bound);
        GradedFunction x = random_homogeneous(rq, rb, nv, tr, pick(rng), rng);
        GradedFunction y = random_homogeneous(rq, rb, nv, tr, pick(rng), rng);
        GradedFunction z = random_homogeneous(rq, rb, nv, tr, pick(rng), rng);
        add_graded_check(rep, "poisson_skew", skew(x, y), {trial});
        add_graded_check(rep, "poisson_jacobi", jacobi(x, y, z), {trial});
        add_graded_check(rep, "poisson_leibniz", leibniz(x, y, z), {trial});
    }
    return rep;
}

GradedDerivation homological_from_lie2(const SplitLie2& l, std::size_t trunc) {
    const std::size_t rq = l.rank_q(), rb = l.rank_b(), nv = l.nvars();
    const auto& Q = l.dull.base();
    std::vector<GradedFunction> on_x, on_tau, on_b;
    for (std::size_t lvar = 0; lvar < nv; ++lvar) {
        GradedFunction g(rq, rb, nv, trunc);
        for (std::size_t a = 0; a < rq; ++a) g.add_term({{a}, {}}, Q.anchor[a][lvar]);
        on_x.push_back(std::move(g));
    }
    for (std::size_t a = 0; a < rq; ++a) {
        TensorMap ta({rq}, 0, nv, Symmetry::alt);
        ta.coeff({a}, 0) = Poly::constant(nv, 1);
        GradedFunction g = embed_form(koszul_d(l.dull, ta), rb, trunc);
        g += embed_b(l.dB_of(frame_section(rq, nv, a)), rq, nv, trunc);
        on_tau.push_back(std::move(g));
    }
    for (std::size_t m = 0; m < rb; ++m) {
        GradedFunction g(rq, rb, nv, trunc);
        for (std::size_t i = 0; i < rq; ++i) {
            const Section& gi = l.nabla.frame_coeff(i, m);
            for (std::size_t n = 0; n < rb; ++n) g.add_term({{i}, {n}}, gi[n]);
        }
        for (std::size_t i = 0; i < rq; ++i)
            for (std::size_t j = i + 1; j < rq; ++j)
                for (std::size_t k = j + 1; k < rq; ++k)
                    g.add_term({{i, j, k}, {}}, -l.omega.coeff({i, j, k}, m));
        on_b.push_back(std::move(g));
    }
    return GradedDerivation(1, std::move(on_x), std::move(on_tau), std::move(on_b));
}

CheckReport check_homological(const GradedDerivation& Qv, Rng& rng) {
    if (Qv.degree() != 1)
        throw std::invalid_argument("check_homological: degree +1 derivation expected");
    CheckReport rep;
    const std::size_t rq = Qv.rank_q(), rb = Qv.rank_b(), nv = Qv.nvars(), tr = Qv.truncation();
    auto gens = all_generators(rq, rb, nv, tr);
    for (std::size_t i = 0; i < gens.size(); ++i)
        add_graded_check(rep, "Q_squared_zero", Qv.apply(Qv.apply(gens[i])), {i});
    if (gens.empty()) rep.add_pass("Q_squared_zero");
    // Leibniz implies the generator case suffices; spot-check anyway
    GradedFunction x = random_homogeneous(rq, rb, nv, tr, std::min<std::size_t>(2, tr), rng);
    add_graded_check(rep, "Q_squared_spot_check", Qv.apply(Qv.apply(x)), {});
    return rep;
}

CheckReport check_Q_poisson_compat(const GradedDerivation& Qv, const PoissonBracket& pb,
                                   Rng& rng) {
    if (Qv.degree() != 1)
        throw std::invalid_argument("check_Q_poisson_compat: degree +1 derivation expected");
    if (Qv.rank_q() != pb.rank_q() || Qv.rank_b() != pb.rank_b() || Qv.nvars() != pb.nvars() ||
        Qv.truncation() != pb.truncation())
        throw std::invalid_argument("check_Q_poisson_compat: algebra mismatch");
    CheckReport rep;
    const std::size_t rq = Qv.rank_q(), rb = Qv.rank_b(), nv = Qv.nvars(), tr = Qv.truncation();
    auto disc = [&](const GradedFunction& x, const GradedFunction& y) {
        const bool flip = x.degree() % 2 == 1;
        GradedFunction d = Qv.apply(pb.bracket(x, y)) - pb.bracket(Qv.apply(x), y);
        GradedFunction second = pb.bracket(x, Qv.apply(y));
        return flip ? d + second : d - second;
    };
    std::vector<GradedFunction> fs;
    for (std::size_t l = 0; l < nv; ++l)
        fs.push_back(GradedFunction::from_poly(rq, rb, tr, Poly::variable(nv, l)));
    fs.push_back(GradedFunction::from_poly(rq, rb, tr, random_poly(nv, rng)));
    std::vector<GradedFunction> taus, bs;
    for (std::size_t a = 0; a < rq; ++a)
        taus.push_back(GradedFunction::generator_tau(rq, rb, nv, tr, a));
    for (std::size_t m = 0; m < rb; ++m)
        bs.push_back(GradedFunction::generator_b(rq, rb, nv, tr, m));

    for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = 0; j < fs.size(); ++j)
            add_graded_check(rep, "compat_f_f", disc(fs[i], fs[j]), {i, j});
    for (std::size_t a = 0; a < rq; ++a)
        for (std::size_t j = 0; j < fs.size(); ++j)
            add_graded_check(rep, "compat_tau_f", disc(taus[a], fs[j]), {a, j});
    for (std::size_t m = 0; m < rb; ++m)
        for (std::size_t j = 0; j < fs.size(); ++j)
            add_graded_check(rep, "compat_b_f", disc(bs[m], fs[j]), {m, j});
    for (std::size_t m = 0; m < rb; ++m)
        for (std::size_t a = 0; a < rq; ++a)
            add_graded_check(rep, "compat_b_tau", disc(bs[m], taus[a]), {m, a});
    for (std::size_t a = 0; a < rq; ++a)
        for (std::size_t c = 0; c < rq; ++c)
            add_graded_check(rep, "compat_tau_tau", disc(taus[a], taus[c]), {a, c});
    for (std::size_t m = 0; m < rb; ++m)
        for (std::size_t n = 0; n < rb; ++n)
            add_graded_check(rep, "compat_b_b", disc(bs[m], bs[n]), {m, n});
    for (const char* ax : {"compat_f_f", "compat_tau_f", "compat_b_f", "compat_b_tau",
                           "compat_tau_tau", "compat_b_b"})
        if (!rep.find(ax)) rep.add_pass(ax);
    return rep;
}

Lie2Morphism::Lie2Morphism(std::vector<Poly> m0, PolyMat m1, PolyMat m2, TensorMap m12,
                           std::size_t tr)
    : mu0(std::move(m0)), mu1(std::move(m1)), mu2(std::move(m2)), mu12(std::move(m12)),
      trunc(tr) {
    if (mu1.nvars() != mu2.nvars() || mu12.nvars() != mu1.nvars())
        throw std::invalid_argument("Lie2Morphism: component base mismatch");
    for (const Poly& p : mu0)
        if (p.nvars() != mu1.nvars())
            throw std::invalid_argument("Lie2Morphism: base map must live on the source");
    if (mu12.arity() != 2 || mu12.symmetry() != Symmetry::alt ||
        mu12.arg_ranks() != std::vector<std::size_t>(2, mu1.cols()) ||
        mu12.out_rank() != mu2.rows())
        throw std::invalid_argument("Lie2Morphism: correction term shape");
    mu12.validate();
}

GradedFunction Lie2Morphism::pullback(const GradedFunction& f) const {
    if (f.rank_q() != tgt_rq() || f.rank_b() != tgt_rb() || f.nvars() != tgt_nvars() ||
        f.truncation() != trunc)
        throw std::invalid_argument("Lie2Morphism: pullback argument algebra mismatch");
    const std::size_t rq = src_rq(), rb = src_rb(), nv = src_nvars();
    auto pb_tau = [&](std::size_t a) {
        GradedFunction g(rq, rb, nv, trunc);
        for (std::size_t i = 0; i < rq; ++i) g.add_term({{i}, {}}, mu1.at(a, i));
        return g;
    };
    auto pb_b = [&](std::size_t m) {
        GradedFunction g(rq, rb, nv, trunc);
        for (std::size_t n = 0; n < rb; ++n) g.add_term({{}, {n}}, mu2.at(m, n));
        for (std::size_t i = 0; i < rq; ++i)
            for (std::size_t j = i + 1; j < rq; ++j) g.add_term({{i, j}, {}}, mu12.coeff({i, j}, m));
        return g;
    };
    GradedFunction out(rq, rb, nv, trunc);
    for (const auto& [key, p] : f.terms()) {
        GradedFunction term = GradedFunction::from_poly(rq, rb, trunc, p.compose(mu0));
        for (std::size_t a : key.qs) term = graded_mul(term, pb_tau(a));
        for (std::size_t m : key.bs) term = graded_mul(term, pb_b(m));
        out += term;
    }
    return out;
}

CheckReport check_lie2_morphism(const Lie2Morphism& mu, const GradedDerivation& Q_src,
                                const GradedDerivation& Q_tgt) {
    if (Q_src.rank_q() != mu.src_rq() || Q_src.rank_b() != mu.src_rb() ||
        Q_src.nvars() != mu.src_nvars() || Q_tgt.rank_q() != mu.tgt_rq() ||
        Q_tgt.rank_b() != mu.tgt_rb() || Q_tgt.nvars() != mu.tgt_nvars() ||
        Q_src.truncation() != mu.trunc || Q_tgt.truncation() != mu.trunc)
        throw std::invalid_argument("check_lie2_morphism: shape mismatch");
    CheckReport rep;
    auto gens = all_generators(mu.tgt_rq(), mu.tgt_rb(), mu.tgt_nvars(), mu.trunc);
    for (std::size_t i = 0; i < gens.size(); ++i)
        add_graded_check(rep, "morphism_intertwines_Q",
                         mu.pullback(Q_tgt.apply(gens[i])) - Q_src.apply(mu.pullback(gens[i])),
                         {i});
    if (gens.empty()) rep.add_pass("morphism_intertwines_Q");
    return rep;
}

} // namespace lakit
