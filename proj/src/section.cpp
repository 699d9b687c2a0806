#include "lakit/section.hpp"

#include <stdexcept>

namespace lakit {

Section zero_section(std::size_t rank, std::size_t nvars) {
    return Section(rank, Poly(nvars));
}

Section frame_section(std::size_t rank, std::size_t nvars, std::size_t i) {
    Section s = zero_section(rank, nvars);
    s.at(i) = Poly::constant(nvars, 1);
    return s;
}

bool is_zero(const Section& s) {
    for (const auto& p : s)
        if (!p.is_zero()) return false;
    return true;
}

bool section_eq(const Section& a, const Section& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

static void check_ranks(const Section& a, const Section& b) {
    if (a.size() != b.size()) throw std::invalid_argument("Section: rank mismatch");
}

Section operator+(const Section& a, const Section& b) {
    check_ranks(a, b);
    Section r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

Section operator-(const Section& a, const Section& b) {
    check_ranks(a, b);
    Section r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

Section operator-(const Section& a) {
    Section r = a;
    for (auto& p : r) p = -p;
    return r;
}

Section operator*(const Poly& f, const Section& s) {
    Section r = s;
    for (auto& p : r) p = f * p;
    return r;
}

Section operator*(const Rational& c, const Section& s) {
    Section r = s;
    for (auto& p : r) p = c * p;
    return r;
}

Poly apply_derivation(const Section& X, const Poly& f) {
    if (X.size() != f.nvars())
        throw std::invalid_argument("apply_derivation: vector field rank must equal nvars");
    Poly acc(f.nvars());
    for (std::size_t l = 0; l < X.size(); ++l) acc += X[l] * f.derivative(l);
    return acc;
}

Section vf_bracket(const Section& X, const Section& Y) {
    check_ranks(X, Y);
    Section r(X.size());
    for (std::size_t l = 0; l < X.size(); ++l)
        r[l] = apply_derivation(X, Y[l]) - apply_derivation(Y, X[l]);
    return r;
}

Section differential(const Poly& f) {
    Section r(f.nvars());
    for (std::size_t l = 0; l < f.nvars(); ++l) r[l] = f.derivative(l);
    return r;
}

Poly pair(const Section& a, const Section& b) {
    check_ranks(a, b);
    std::size_t nv = a.empty() ? 0 : a[0].nvars();
    Poly acc(nv);
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

} // namespace lakit
