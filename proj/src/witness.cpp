#include "lakit/witness.hpp"

#include <stdexcept>

namespace lakit {

std::vector<Rational> find_nonzero_point(const Poly& p) {
    if (p.is_zero()) throw std::invalid_argument("find_nonzero_point: polynomial is zero");
    const std::size_t nv = p.nvars();
    const long d = static_cast<long>(p.total_degree());
    // d+1 distinct values per coordinate suffice for a nonzero polynomial of
    // total degree d, so the grid below always contains a witness.
    std::vector<long> vals;
    vals.push_back(0);
    for (long k = 1; static_cast<long>(vals.size()) <= d; ++k) {
        vals.push_back(k);
        if (static_cast<long>(vals.size()) <= d) vals.push_back(-k);
    }
    std::vector<std::size_t> idx(nv, 0);
    while (true) {
        std::vector<Rational> pt(nv);
        for (std::size_t i = 0; i < nv; ++i) pt[i] = vals[idx[i]];
        if (p.eval(pt) != 0) return pt;
        std::size_t i = 0;
        for (; i < nv; ++i) {
            if (++idx[i] < vals.size()) break;
            idx[i] = 0;
        }
        if (i == nv) break;
    }
    throw std::logic_error("find_nonzero_point: exhausted grid (unreachable)");
}

Witness make_witness(const Poly& discrepancy, std::vector<std::size_t> frames) {
    return Witness{discrepancy, find_nonzero_point(discrepancy), std::move(frames)};
}

Poly random_poly(std::size_t nvars, Rng& rng) {
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<std::size_t> pick(0, nvars ? nvars - 1 : 0);
    Poly p = Poly::constant(nvars, coeff(rng));
    if (nvars == 0) {
        if (p.is_zero()) p = Poly::constant(0, 1);
        return p;
    }
    // Always include one linear and one quadratic term so Leibniz-sensitive
    // checks see nonvanishing derivatives.
    std::size_t i = pick(rng), j = pick(rng), k = pick(rng);
    int a = coeff(rng), b = coeff(rng);
    if (a == 0) a = 1;
    if (b == 0) b = 2;
    p += Rational(a) * Poly::variable(nvars, i);
    p += Rational(b) * (Poly::variable(nvars, j) * Poly::variable(nvars, k));
    return p;
}

} // namespace lakit
