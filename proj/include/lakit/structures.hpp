#pragma once

#include "lakit/calculus.hpp"
#include "lakit/checkreport.hpp"

namespace lakit {

// A (possibly degenerate) Courant algebroid in a fixed frame: anchored
// bundle, symmetric pairing with polynomial coefficients, the derivation-type
// map D determined by its values on the base coordinates, and a bracket
// given by frame coefficients plus the fixed Leibniz extensions
//   [[e, f e']] = f[[e,e']] + rho(e)(f) e'
//   [[f e, e']] = f[[e,e']] - rho(e')(f) e + <e,e'> D f.
class CourantData {
public:
    CourantData() = default;
    // Validates pairing symmetry and <Df, e_i> = rho(e_i)(f) on coordinates
    // (which decides the identity for every f, both sides being derivations).
    CourantData(AnchoredBundle e, PolyMat pairing, std::vector<Section> dcomp,
                std::vector<std::vector<Section>> bracket_table);

    const AnchoredBundle& E() const { return e_; }
    std::size_t rank() const { return e_.rank(); }
    std::size_t nvars() const { return e_.nvars(); }
    const PolyMat& pairing_mat() const { return pairing_; }
    const std::vector<std::vector<Section>>& table() const { return c_; }

    Poly pair_op(const Section& e1, const Section& e2) const;
    Section Dmap(const Poly& f) const;
    Section bracket(const Section& e1, const Section& e2) const;

private:
    AnchoredBundle e_;
    PolyMat pairing_;
    std::vector<Section> dcomp_;
    std::vector<std::vector<Section>> c_;
};

// Split Lie 2-algebroid data: dull bracket on Q, the map dB : Q* -> B, a
// Q-connection on B and omega in Omega^3(Q, B*).
struct SplitLie2 {
    DullBracket dull;  // carries the anchored bundle Q
    FreeModule B;
    PolyMat dB;        // rank(B) x rank(Q)
    Connection nabla;  // Gamma(Q) x Gamma(B) -> Gamma(B)
    TensorMap omega;   // three alternating Q-slots, values in B* (out rank = rank(B))

    SplitLie2() = default;
    SplitLie2(DullBracket d, FreeModule b, PolyMat db, Connection n, TensorMap w);

    std::size_t rank_q() const { return dull.rank(); }
    std::size_t rank_b() const { return B.rank; }
    std::size_t nvars() const { return dull.nvars(); }

    Section dB_of(const Section& tau) const { return dB.apply(tau); }
    // dual map B* -> Q
    Section dBstar_of(const Section& beta) const { return dB.transpose().apply(beta); }
    // omega(q1,q2,.) paired with b: a section of Q*.
    Section omega_pair(const Section& q1, const Section& q2, const Section& b) const;
};

// Self-dual 2-representation of the Lie algebroid B on dQ : Q* -> Q.
struct SelfDual2Rep {
    DullBracket bB;        // bracket on B; Jacobi is a checker entry
    FreeModule Q;
    PolyMat dQ;            // rank(Q) x rank(Q), self-duality makes it symmetric
    Connection nablaQ;     // Gamma(B) x Gamma(Q) -> Gamma(Q)
    Connection nablaQstar; // Gamma(B) x Gamma(Q*) -> Gamma(Q*)
    // R in Omega^2(B, Q* ⊗ Q*): slots (b1, b2, q), value in Q*; antisymmetry
    // in the B pair and in the Q*-pair are checker entries.
    TensorMap R;

    SelfDual2Rep() = default;
    SelfDual2Rep(DullBracket b, FreeModule q, PolyMat dq, Connection nq, Connection nqs,
                 TensorMap r);

    std::size_t rank_q() const { return Q.rank; }
    std::size_t rank_b() const { return bB.rank(); }
    std::size_t nvars() const { return bB.nvars(); }

    Section dQ_of(const Section& tau) const { return dQ.apply(tau); }
    Section R_of(const Section& b1, const Section& b2, const Section& q) const;
};

// The decomposed LA-Courant algebroid: a split Lie 2-algebroid and a
// self-dual 2-representation over the same Q, B and base.
struct LACourantSplit {
    SplitLie2 lie2;
    SelfDual2Rep rep;

    LACourantSplit() = default;
    LACourantSplit(SplitLie2 l, SelfDual2Rep r); // validates shared shapes

    std::size_t rank_q() const { return lie2.rank_q(); }
    std::size_t rank_b() const { return lie2.rank_b(); }
    std::size_t nvars() const { return lie2.nvars(); }
};

// A matched pair of two representations up to homotopy: A acting on
// dB : C -> B via (nablaAB, nablaAC, RA) and B acting on dA : C -> A via
// (nablaBA, nablaBC, RB).
struct Matched2Reps {
    DullBracket bA; // Lie algebroid A
    DullBracket bB; // Lie algebroid B
    FreeModule C;
    PolyMat dA; // rank(A) x rank(C)
    PolyMat dB; // rank(B) x rank(C)
    Connection nablaAB, nablaAC; // A-connections on B and C
    Connection nablaBA, nablaBC; // B-connections on A and C
    TensorMap RA; // slots (a1, a2, b), value in C
    TensorMap RB; // slots (b1, b2, a), value in C

    Matched2Reps() = default;
    Matched2Reps(DullBracket a, DullBracket b, FreeModule c, PolyMat da, PolyMat db,
                 Connection nab, Connection nac, Connection nba, Connection nbc, TensorMap ra,
                 TensorMap rb);
};

// Axiom checkers.  Every identity is evaluated on all frame tuples and once
// more with one argument scaled by a (seeded) random polynomial.
CheckReport check_courant(const CourantData& c, bool require_nondegenerate, Rng& rng);
CheckReport check_split_lie2(const SplitLie2& l, Rng& rng);
CheckReport check_selfdual_2rep(const SelfDual2Rep& r, Rng& rng);
CheckReport check_matched_M(const LACourantSplit& s, Rng& rng);
CheckReport check_matched_m(const Matched2Reps& m, Rng& rng);
CheckReport check_la_courant(const LACourantSplit& s, Rng& rng);

} // namespace lakit
