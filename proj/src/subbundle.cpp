#include "lakit/subbundle.hpp"

#include <stdexcept>

namespace lakit {

SubBundle::SubBundle(std::size_t ambient_rank, RatMat basis)
    : ambient_(ambient_rank), basis_(std::move(basis)) {
    if (basis_.rows() == 0 && basis_.cols() == 0) basis_ = RatMat(ambient_, 0);
    if (basis_.rows() != ambient_)
        throw std::invalid_argument("SubBundle: basis rows must equal ambient rank");
    if (rat_rank(basis_) != basis_.cols())
        throw std::invalid_argument("SubBundle: basis columns are dependent");
}

Section SubBundle::basis_section(std::size_t k, std::size_t nvars) const {
    Section s = zero_section(ambient_, nvars);
    for (std::size_t i = 0; i < ambient_; ++i) s[i] = Poly::constant(nvars, basis_(i, k));
    return s;
}

SubBundle SubBundle::annihilator() const {
    // Covectors alpha with alpha^T U = 0, i.e. the kernel of U^T.
    return SubBundle(ambient_, kernel_basis(basis_.transpose()));
}

SubBundle SubBundle::orthogonal(const Metric& m) const {
    if (m.rank() != ambient_) throw std::invalid_argument("SubBundle::orthogonal: rank mismatch");
    return SubBundle(ambient_, kernel_basis(basis_.transpose() * m.gram()));
}

bool SubBundle::contains(const Section& s) const {
    if (s.size() != ambient_) throw std::invalid_argument("SubBundle::contains: rank mismatch");
    RatMat ann = annihilator().basis();
    std::size_t nv = s.empty() ? 0 : s[0].nvars();
    for (std::size_t k = 0; k < ann.cols(); ++k) {
        Poly acc(nv);
        for (std::size_t i = 0; i < ambient_; ++i)
            if (ann(i, k) != 0) acc += ann(i, k) * s[i];
        if (!acc.is_zero()) return false;
    }
    return true;
}

bool SubBundle::contains(const SubBundle& other) const {
    if (other.ambient_ != ambient_) return false;
    return rat_rank(hcat(basis_, other.basis_)) == rank();
}

SubBundle SubBundle::sum(const SubBundle& other) const {
    if (other.ambient_ != ambient_) throw std::invalid_argument("SubBundle::sum: ambient mismatch");
    RatMat joint = hcat(basis_, other.basis_);
    // Extract an independent subset of the joint columns.
    RatMat reduced = joint;
    std::vector<std::size_t> pivots = rref(reduced);
    RatMat out(ambient_, pivots.size());
    for (std::size_t k = 0; k < pivots.size(); ++k) out.set_col(k, joint.col(pivots[k]));
    return SubBundle(ambient_, out);
}

SubBundle SubBundle::intersect(const SubBundle& other) const {
    if (other.ambient_ != ambient_)
        throw std::invalid_argument("SubBundle::intersect: ambient mismatch");
    // Solve U x = V y: kernel of [U | -V], read off the U part.
    RatMat joint = hcat(basis_, -other.basis_);
    RatMat ker = kernel_basis(joint);
    RatMat vecs(ambient_, ker.cols());
    for (std::size_t c = 0; c < ker.cols(); ++c) {
        RatVec x(basis_.cols(), Rational(0));
        for (std::size_t r = 0; r < basis_.cols(); ++r) x[r] = ker(r, c);
        vecs.set_col(c, basis_ * x);
    }
    RatMat reduced = vecs;
    std::vector<std::size_t> pivots = rref(reduced);
    RatMat out(ambient_, pivots.size());
    for (std::size_t k = 0; k < pivots.size(); ++k) out.set_col(k, vecs.col(pivots[k]));
    return SubBundle(ambient_, out);
}

Section SubBundle::coordinates(const Section& s) const {
    if (!contains(s)) throw std::invalid_argument("SubBundle::coordinates: section not a member");
    // Left inverse (U^T U)^{-1} U^T exists because the columns are
    // independent over the rationals.
    RatMat gram = basis_.transpose() * basis_;
    auto inv = inverse(gram);
    if (!inv) throw std::logic_error("SubBundle::coordinates: gram not invertible");
    RatMat left = *inv * basis_.transpose();
    std::size_t nv = s.empty() ? 0 : s[0].nvars();
    Section out = zero_section(rank(), nv);
    for (std::size_t k = 0; k < rank(); ++k)
        for (std::size_t i = 0; i < ambient_; ++i)
            if (left(k, i) != 0) out[k] += left(k, i) * s[i];
    return out;
}

} // namespace lakit
