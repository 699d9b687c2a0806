#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "lakit/poly.hpp"
#include "lakit/section.hpp"

namespace lakit {

// Concrete evidence that an identity fails: a nonzero discrepancy polynomial,
// a rational point where it does not vanish, and the frame indices of the
// arguments that produced it.
struct Witness {
    Poly poly;
    std::vector<Rational> point;
    std::vector<std::size_t> frames;
};

// A rational point where a nonzero polynomial is nonvanishing.  Searches the
// integer grid {-d,...,d}^p, which must contain one when p has total degree d.
std::vector<Rational> find_nonzero_point(const Poly& p);

Witness make_witness(const Poly& discrepancy, std::vector<std::size_t> frames);

// Deterministic RNG used wherever the check strategy calls for a random
// polynomial multiplier or random structure data.
using Rng = std::mt19937_64;

// Small-degree polynomial with small integer coefficients; degree <= 2,
// guaranteed nonzero (and nonconstant when nvars > 0).
Poly random_poly(std::size_t nvars, Rng& rng);

} // namespace lakit
