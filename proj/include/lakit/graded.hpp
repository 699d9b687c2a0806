#pragma once

#include <compare>
#include <map>
#include <stdexcept>
#include <vector>

#include "lakit/structures.hpp"

namespace lakit {

// Raised when a graded product or derivation image would exceed the
// configured truncation degree; overflow is never silently dropped.
struct TruncationOverflow : std::runtime_error {
    explicit TruncationOverflow(std::size_t degree, std::size_t trunc)
        : std::runtime_error("graded degree " + std::to_string(degree) +
                             " exceeds truncation " + std::to_string(trunc)) {}
};

// Monomial in the odd generators tau_1..tau_rq (degree 1, strictly
// increasing indices) and the even generators b_1..b_rb (degree 2, weakly
// increasing indices); total degree |qs| + 2|bs|.
struct GradedKey {
    std::vector<std::size_t> qs;
    std::vector<std::size_t> bs;

    std::size_t degree() const { return qs.size() + 2 * bs.size(); }
    auto operator<=>(const GradedKey&) const = default;
};

// Element of the truncated graded function algebra of Q[-1] (+) B*[-2]:
// polynomial coefficients indexed by generator monomials.  Not necessarily
// homogeneous; zero coefficients are never stored.
class GradedFunction {
public:
    GradedFunction() = default;
    GradedFunction(std::size_t rq, std::size_t rb, std::size_t nvars, std::size_t trunc);

    static GradedFunction from_poly(std::size_t rq, std::size_t rb, std::size_t trunc,
                                    const Poly& p);
    static GradedFunction generator_tau(std::size_t rq, std::size_t rb, std::size_t nvars,
                                        std::size_t trunc, std::size_t a);
    static GradedFunction generator_b(std::size_t rq, std::size_t rb, std::size_t nvars,
                                      std::size_t trunc, std::size_t m);
    // monomial with coefficient 1
    static GradedFunction monomial(std::size_t rq, std::size_t rb, std::size_t nvars,
                                   std::size_t trunc, GradedKey key);

    std::size_t rank_q() const { return rq_; }
    std::size_t rank_b() const { return rb_; }
    std::size_t nvars() const { return nvars_; }
    std::size_t truncation() const { return trunc_; }
    const std::map<GradedKey, Poly>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    // degree when homogeneous (zero counts as homogeneous of every degree)
    bool is_homogeneous() const;
    std::size_t degree() const; // max degree of a term; 0 for zero

    // validates key ordering and truncation, drops zero coefficients
    void add_term(GradedKey key, const Poly& coeff);

    GradedFunction& operator+=(const GradedFunction& o);
    GradedFunction& operator-=(const GradedFunction& o);
    friend GradedFunction operator+(GradedFunction a, const GradedFunction& b) { return a += b; }
    friend GradedFunction operator-(GradedFunction a, const GradedFunction& b) { return a -= b; }
    GradedFunction operator-() const;
    friend GradedFunction operator*(const Poly& p, const GradedFunction& g);
    bool operator==(const GradedFunction& o) const = default;

private:
    std::size_t rq_ = 0, rb_ = 0, nvars_ = 0, trunc_ = 0;
    std::map<GradedKey, Poly> terms_;

    void check_compatible(const GradedFunction& o) const;
};

// graded-commutative product; throws TruncationOverflow past the truncation
GradedFunction graded_mul(const GradedFunction& a, const GradedFunction& b);

// embed an alternating scalar k-form on Q (frame tensor) as the degree-k
// function  sum_{i1<...<ik} eta(e_{i1},..,e_{ik}) tau_{i1}...tau_{ik}.
GradedFunction embed_form(const TensorMap& eta, std::size_t rb, std::size_t trunc);
// embed a section of Q* as a degree-1 function, a section of B as degree 2
GradedFunction embed_qstar(const Section& tau, std::size_t rb, std::size_t nvars,
                           std::size_t trunc);
GradedFunction embed_b(const Section& b, std::size_t rq, std::size_t nvars, std::size_t trunc);

// A derivation of the graded algebra, determined by its images on the base
// coordinates and on the generators, extended by the Koszul-signed Leibniz
// rule.  Images must be homogeneous of degree (generator degree + degree()).
class GradedDerivation {
public:
    GradedDerivation() = default;
    GradedDerivation(int degree, std::vector<GradedFunction> on_x,
                     std::vector<GradedFunction> on_tau, std::vector<GradedFunction> on_b);

    int degree() const { return degree_; }
    std::size_t rank_q() const { return rq_; }
    std::size_t rank_b() const { return rb_; }
    std::size_t nvars() const { return nvars_; }
    std::size_t truncation() const { return trunc_; }
    const GradedFunction& on_x(std::size_t l) const { return on_x_[l]; }
    const GradedFunction& on_tau(std::size_t a) const { return on_tau_[a]; }
    const GradedFunction& on_b(std::size_t m) const { return on_b_[m]; }

    GradedFunction apply(const GradedFunction& f) const;
    bool operator==(const GradedDerivation& o) const = default;

private:
    int degree_ = 0;
    std::size_t rq_ = 0, rb_ = 0, nvars_ = 0, trunc_ = 0;
    std::vector<GradedFunction> on_x_, on_tau_, on_b_;
};

// graded commutator [X,Y] = XY - (-1)^{|X||Y|} YX, again a derivation
GradedDerivation commutator(const GradedDerivation& X, const GradedDerivation& Y);

// A degree -2 bracket stored through its Hamiltonian derivations {g, .} for
// every generator g, extended to the first slot by the graded Leibniz rule.
class PoissonBracket {
public:
    PoissonBracket() = default;
    PoissonBracket(std::vector<GradedDerivation> ham_x, std::vector<GradedDerivation> ham_tau,
                   std::vector<GradedDerivation> ham_b);

    std::size_t rank_q() const { return rq_; }
    std::size_t rank_b() const { return rb_; }
    std::size_t nvars() const { return nvars_; }
    std::size_t truncation() const { return trunc_; }
    const GradedDerivation& ham_x(std::size_t l) const { return ham_x_[l]; }
    const GradedDerivation& ham_tau(std::size_t a) const { return ham_tau_[a]; }
    const GradedDerivation& ham_b(std::size_t m) const { return ham_b_[m]; }

    GradedFunction bracket(const GradedFunction& a, const GradedFunction& b) const;

private:
    std::size_t rq_ = 0, rb_ = 0, nvars_ = 0, trunc_ = 0;
    std::vector<GradedDerivation> ham_x_, ham_tau_, ham_b_;
};

// The degree -2 Poisson bracket of a self-dual 2-representation:
// {f1,f2} = 0, {tau,f} = 0, {tau1,tau2} = <dQ tau1, tau2>, {b,f} = rho_B(b)f,
// {b,tau} = nabla*_b tau, {b1,b2} = [b1,b2] - R(b1,b2).
PoissonBracket poisson_from_selfdual(const SelfDual2Rep& rep, std::size_t trunc);

// graded skew-symmetry, Leibniz and Jacobi, on all generator tuples and on
// random homogeneous functions of degree up to `bound`
CheckReport check_poisson_axioms(const PoissonBracket& pb, std::size_t bound, Rng& rng);

// The degree +1 vector field of a split Lie 2-algebroid:
// Q(f) = rho_Q^* df, Q(tau) = d_Q tau + dB tau, Q(b) = d_nabla b - <omega, b>.
GradedDerivation homological_from_lie2(const SplitLie2& l, std::size_t trunc);

// Q o Q = 0 on every generator (sufficient by Leibniz), plus a randomized
// non-generator spot check.
CheckReport check_homological(const GradedDerivation& Qv, Rng& rng);

// Q{x1,x2} = {Q x1, x2} + (-1)^{|x1|} {x1, Q x2} on the six generator-pair
// shapes (f,f), (tau,f), (b,f), (b,tau), (tau,tau), (b,b).
CheckReport check_Q_poisson_compat(const GradedDerivation& Qv, const PoissonBracket& pb, Rng& rng);

// Morphism of split [2]-manifolds source -> target, as the data of a base
// map (images of the target coordinates), bundle maps Q_src -> Q_tgt and
// B_src -> B_tgt over it, and a correction Lambda^2 Q_src -> B_tgt.  The
// pullback is the induced algebra morphism on graded functions.
struct Lie2Morphism {
    std::vector<Poly> mu0; // one image (in source variables) per target coordinate
    PolyMat mu1;           // rank_q(target) x rank_q(source)
    PolyMat mu2;           // rank_b(target) x rank_b(source)
    TensorMap mu12;        // two alternating source-Q slots, out rank = rank_b(target)
    std::size_t trunc = 0;

    Lie2Morphism() = default;
    Lie2Morphism(std::vector<Poly> m0, PolyMat m1, PolyMat m2, TensorMap m12, std::size_t tr);

    std::size_t src_nvars() const { return mu1.nvars(); }
    std::size_t src_rq() const { return mu1.cols(); }
    std::size_t src_rb() const { return mu2.cols(); }
    std::size_t tgt_nvars() const { return mu0.size(); }
    std::size_t tgt_rq() const { return mu1.rows(); }
    std::size_t tgt_rb() const { return mu2.rows(); }

    GradedFunction pullback(const GradedFunction& f) const;
};

// mu^* o Q_tgt = Q_src o mu^* on the generators of the target algebra
CheckReport check_lie2_morphism(const Lie2Morphism& mu, const GradedDerivation& Q_src,
                                const GradedDerivation& Q_tgt);

} // namespace lakit
