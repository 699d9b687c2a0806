#pragma once

#include "lakit/structures.hpp"
#include "lakit/subbundle.hpp"

namespace lakit {

// The bracket on the core dual bundle Q*,
//   [[tau1, tau2]] = Delta_{dQ tau1} tau2 - nablaQstar_{dB tau2} tau1,
// computed from the decomposed data (arbitrary polynomial sections).
Section core_bracket(const LACourantSplit& s, const Section& tau1, const Section& tau2);

// The degenerate Courant algebroid carried by the core Q*: anchor
// rho_Q o dQ, pairing <tau1, dQ tau2>, derivative map rho_Q^* d, and the
// core bracket.  Meaningful only when check_la_courant(s) passes.
CourantData core_degenerate_courant(const LACourantSplit& s);

// Exact regression identities of the core bracket: compatibility of dB with
// brackets and anchors, the dQ-image formula, the curvature formula relating
// the bracket to R, and vanishing on exact arguments.
CheckReport check_core_identities(const LACourantSplit& s, Rng& rng);

// A change of Lagrangian splitting: phi with two alternating Q slots and
// values in B* (out rank = rank B).
struct SplittingChange {
    TensorMap phi;

    SplittingChange() = default;
    explicit SplittingChange(TensorMap p);
};

// Data transformed by a splitting change: the dull bracket picks up
// -dB* phi(.,.) and the B-connection on Q* picks up +phi(b, dQ tau).
struct SplitChangeResult {
    DullBracket dull;
    Connection nablaQstar;
};
SplitChangeResult apply_splitting_change(const LACourantSplit& s, const SplittingChange& phi);

// Recompute the core bracket from the transformed data and compare with the
// untransformed one; exact equality on all frame pairs.
CheckReport check_core_bracket_invariance(const LACourantSplit& s, const SplittingChange& phi);

// Courant algebroid with zero anchor from structure constants and an
// invertible symmetric Gram matrix (validity is the caller's check).
CourantData make_quadratic_lie_algebra(std::vector<std::vector<Section>> table, PolyMat gram);

// The split pseudo-Euclidean bundle TM + T*M over p coordinates with the
// projection anchor, canonical pairing and the H-twisted Dorfman bracket;
// throws if the closedness dH = 0 fails.
CourantData make_exact_courant(std::size_t p, const TensorMap& h);

// Decomposition of the tangent prolongation of a Courant algebroid by a
// metric linear connection (acting bundle TM with the identity anchor).
// Requires a constant pairing; throws if conn does not preserve it.
LACourantSplit tangent_prolongation_la_courant(const CourantData& e, const Connection& conn);

// The standard decomposition over a Lie algebroid A: Q = TM + A* with a
// chosen skew dull bracket (anchored by the TM projection), B = A and the
// structure tensors induced by the dual Dorfman connection.
LACourantSplit standard_la_courant_over_lie_algebroid(const DullBracket& a,
                                                      const DullBracket& dullq);

// The decomposition with Q = A + C* and B defined by a matched pair of
// 2-representations.
LACourantSplit la_courant_from_matched_2reps(const Matched2Reps& mp);

// Quotient presentation of (U + Q*) / graph(-dQ restricted to the
// annihilator of U), with the induced anchor, pairing and bracket.
struct ManinPairData {
    std::size_t rank_u = 0;      // rank of U
    RatMat u_basis;              // basis of U inside Q (columns)
    RatMat reps;                 // representatives of the quotient basis in U + Q* coords
    RatMat relations;            // graph relations (columns, constant)
    CourantData courant;         // the induced structure on the quotient
};

// Builds the quotient Courant algebroid of an LA-Dirac subbundle U
// (constant basis columns inside Q) and verifies: well-definedness on the
// graph relations, the Courant axioms, that U embeds as a Dirac structure,
// and the morphism conditions tying the core Q* to the quotient.
ManinPairData manin_pair(const LACourantSplit& s, const RatMat& u_basis);
CheckReport check_manin_pair(const LACourantSplit& s, const ManinPairData& mp, Rng& rng);

} // namespace lakit
