#pragma once

#include <vector>

#include "lakit/checkreport.hpp"
#include "lakit/module.hpp"
#include "lakit/tensor.hpp"

namespace lakit {

// A trivialized vector bundle with an anchor to TM: anchor[i] is the
// polynomial vector field rho(e_i).
struct AnchoredBundle {
    FreeModule bundle;
    std::vector<Section> anchor;

    AnchoredBundle() = default;
    AnchoredBundle(FreeModule m, std::vector<Section> a);

    std::size_t rank() const { return bundle.rank; }
    std::size_t nvars() const { return bundle.nvars; }

    Section anchor_of(const Section& q) const;
    Poly rho(const Section& q, const Poly& f) const;
    // rho^*: one-forms on the base to sections of the dual bundle,
    // (rho^* theta)_i = <theta, rho(e_i)>.
    Section rho_star(const Section& theta) const;
};

// A skew-symmetric bracket on sections of an anchored bundle, stored by its
// frame coefficients c[i][j] = [[e_i, e_j]] and extended by the fixed rules
//   [[q1, f q2]] = f [[q1, q2]] + rho(q1)(f) q2   (and skew-symmetry).
// Anchor compatibility and the Jacobi identity are properties to be checked,
// not assumed; a Lie algebroid bracket is the special case with vanishing
// Jacobiator.
class DullBracket {
public:
    DullBracket() = default;
    DullBracket(AnchoredBundle q, std::vector<std::vector<Section>> coeffs);

    const AnchoredBundle& base() const { return q_; }
    std::size_t rank() const { return q_.rank(); }
    std::size_t nvars() const { return q_.nvars(); }
    const Section& frame_coeff(std::size_t i, std::size_t j) const { return c_[i][j]; }

    Section bracket(const Section& q1, const Section& q2) const;
    Section jacobiator(const Section& q1, const Section& q2, const Section& q3) const;

    // The Dorfman connection obtained by dualizing in the sense of
    // derivations: rho(q)<q',tau> = <[[q,q']],tau> + <q', Delta_q tau>,
    // extended by Delta_q(f tau) = f Delta_q tau + rho(q)(f) tau and
    // Delta_{f q} tau = f Delta_q tau + <q,tau> rho^* df.
    Section dorfman(const Section& q, const Section& tau) const;

    // Curvature of the Dorfman connection,
    // R(q1,q2)tau = D_{q1}D_{q2}tau - D_{q2}D_{q1}tau - D_{[[q1,q2]]}tau.
    Section dorfman_curvature(const Section& q1, const Section& q2, const Section& tau) const;

private:
    AnchoredBundle q_;
    std::vector<std::vector<Section>> c_;
};

// A linear connection Gamma(D) x Gamma(E) -> Gamma(E): frame coefficients
// g[i][j] = nabla_{d_i} e_j, extended tensorially in the D slot and by the
// Leibniz rule (through D's anchor) in the E slot.
class Connection {
public:
    Connection() = default;
    Connection(AnchoredBundle d, FreeModule e, std::vector<std::vector<Section>> coeffs);

    const AnchoredBundle& acting() const { return d_; }
    const FreeModule& space() const { return e_; }
    const Section& frame_coeff(std::size_t i, std::size_t j) const { return g_[i][j]; }

    Section act(const Section& d, const Section& s) const;

    // Dual connection on E^*: rho(d)<alpha,e> = <nabla*_d alpha, e> + <alpha, nabla_d e>.
    Connection dual() const;

    // R(d1,d2)s given a bracket on the acting bundle.
    Section curvature(const DullBracket& bd, const Section& d1, const Section& d2,
                      const Section& s) const;

private:
    AnchoredBundle d_;
    FreeModule e_;
    std::vector<std::vector<Section>> g_;
};

// Axioms of a dull bracket: skew-symmetry, the Leibniz rule in both slots
// and anchor compatibility.  Identities are evaluated on all frame pairs and
// once more with one argument scaled by a random polynomial, which catches
// errors hidden in the derivative terms.
CheckReport check_dull_axioms(const DullBracket& dull, Rng& rng);

// Koszul differential of a scalar-valued alternating form on the bundle of a
// dull bracket (arity may be 0: a function, passed as a 0-ary tensor).
TensorMap koszul_d(const DullBracket& dull, const TensorMap& omega);

// Koszul differential of an E-valued alternating form, twisted by a
// connection along the dull bracket's bundle.
TensorMap koszul_d(const DullBracket& dull, const Connection& nabla, const TensorMap& omega);

} // namespace lakit
