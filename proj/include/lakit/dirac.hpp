#pragma once

#include <optional>

#include "lakit/constructions.hpp"
#include "lakit/structures.hpp"
#include "lakit/subbundle.hpp"

namespace lakit {

// A double subbundle of the decomposed metric double vector bundle over
// (Q, B): a side U in Q, a support B' in B, a core K in Q*, and (for a
// non-Lagrangian ambient splitting) the symmetric decoration Lambda in
// Gamma(S^2 Q ⊗ B*).  All bases are constant.
struct DoubleSubbundleData {
    SubBundle U;                     // inside Q
    SubBundle Bp;                    // inside B
    SubBundle K;                     // inside Q*
    std::optional<TensorMap> Lambda; // two symmetric Q slots, values in B*
};

// Isotropy of the double subbundle: K lies in the annihilator of U and
// Lambda pairs U ⊗ U into the annihilator of B'.
CheckReport check_isotropic(const DoubleSubbundleData& d);

// Maximal isotropy: additionally U is exactly the annihilator of K.
CheckReport check_maximal_isotropic(const DoubleSubbundleData& d);

// Lift correction that kills a symmetric decoration Lambda: shifting the
// horizontal lift by -1/2 Lambda(q,.)* makes the recomputed decoration
// Lambda + A + A^T vanish identically (asserted).  Returns A = -1/2 Lambda.
TensorMap lagrangianize(const TensorMap& lambda);

// Dirac double subbundle with support B' (side conditions of the split Lie
// 2-algebroid): dB(U°) in B', nabla_u b in B', the dull bracket closes in U,
// and i_{u2} i_{u1} omega maps B' into U°.  Throws if D is not maximal
// isotropic.
CheckReport check_vb_dirac(const SplitLie2& l, const DoubleSubbundleData& d, Rng& rng);

// Subalgebroid conditions on the 2-representation side: dQ(U°) in U,
// nabla_b u in U, the B-bracket closes in B', and R(b1,b2) maps U into U°.
// Throws if D is not maximal isotropic.
CheckReport check_subalgebroid(const SelfDual2Rep& r, const DoubleSubbundleData& d, Rng& rng);

// The Lie algebroid induced on the side U of a Dirac double subbundle with
// full support: bracket and anchor restricted from Q.  The report carries
// the Jacobi identity and invariance of the restricted bracket under an
// adapted change of splitting.  Throws if the Dirac conditions fail.
struct InducedAlgebroid {
    DullBracket bracket; // on a rank-(rank U) bundle in the U basis
    CheckReport report;
};
InducedAlgebroid induced_lie_algebroid(const SplitLie2& l, const DoubleSubbundleData& d, Rng& rng);

// The matched pair of 2-term representations carried by an LA-Dirac double
// subbundle with full support: U acts on dB: U° -> B and B acts on
// dQ: U° -> U, with curvature terms restricted from omega and R.
Matched2Reps restricted_matched_pair(const LACourantSplit& s, const DoubleSubbundleData& d);

// All side and representation conditions together; when they hold with full
// support, the restricted matched pair is built and its axioms are merged
// into the report.
CheckReport check_la_dirac(const LACourantSplit& s, const DoubleSubbundleData& d, Rng& rng);

// Pseudo-Dirac data on a subbundle U of a Courant algebroid with constant
// pairing: the invariant part of a metric connection, stored through the
// pairing as nabla_p[l][k][j] = <nabla_{d_l} u_k, u_j>.
struct PseudoDiracData {
    SubBundle U;
    std::vector<std::vector<Section>> nabla_p; // [l][k] = U*-valued class row
    CheckReport report;
};

// Builds the invariant-part data of `conn` on U and checks: the Leibniz rule
// and metric property of the class (exact), closure of the corrected bracket
// in U, vanishing of the curvature form Psi, the relation between the
// Jacobiator of the corrected bracket and Psi, and the three conditions
// singling out the subbundles induced by LA-Dirac structures (U-orthogonal
// inside U, classes of the orthogonal parallel, induced connection flat).
// Throws if conn is not metric or does not preserve U.
PseudoDiracData pseudo_dirac(const CourantData& e, const Connection& conn, const SubBundle& u,
                             Rng& rng);

} // namespace lakit
