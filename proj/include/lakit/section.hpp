#pragma once

#include <cstddef>
#include <vector>

#include "lakit/poly.hpp"

namespace lakit {

// A section of a trivialized rank-r bundle: r polynomial coefficients in a
// fixed global frame.  Sections of TM double as derivations of the base ring
// (polynomial vector fields), with component l the coefficient of d/dx_{l+1}.
using Section = std::vector<Poly>;

Section zero_section(std::size_t rank, std::size_t nvars);
Section frame_section(std::size_t rank, std::size_t nvars, std::size_t i);
bool is_zero(const Section& s);
bool section_eq(const Section& a, const Section& b);

Section operator+(const Section& a, const Section& b);
Section operator-(const Section& a, const Section& b);
Section operator-(const Section& a);
Section operator*(const Poly& f, const Section& s);
Section operator*(const Rational& c, const Section& s);

// Apply a polynomial vector field X (section of TM) to f: sum_l X_l d_l f.
Poly apply_derivation(const Section& X, const Poly& f);

// Commutator [X, Y] of two polynomial vector fields.
Section vf_bracket(const Section& X, const Section& Y);

// Exterior differential of a function: the covector (d_1 f, ..., d_p f).
Section differential(const Poly& f);

// Dual pairing of a covector-type section with a vector-type section (equal
// ranks, matching frames): sum_i a_i b_i.
Poly pair(const Section& a, const Section& b);

} // namespace lakit
