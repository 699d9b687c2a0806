#include "lakit/exactla.hpp"

#include <stdexcept>

namespace lakit {

RatMat RatMat::identity(std::size_t n) {
    RatMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RatMat RatMat::transpose() const {
    RatMat t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

RatVec RatMat::col(std::size_t c) const {
    RatVec v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

void RatMat::set_col(std::size_t c, const RatVec& v) {
    if (v.size() != rows_) throw std::invalid_argument("RatMat::set_col: size mismatch");
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

RatMat RatMat::left_cols(std::size_t n) const {
    RatMat out(rows_, n);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < n; ++c) out(r, c) = (*this)(r, c);
    return out;
}

RatMat hcat(const RatMat& a, const RatMat& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("hcat: row mismatch");
    RatMat out(a.rows(), a.cols() + b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
        for (std::size_t c = 0; c < b.cols(); ++c) out(r, a.cols() + c) = b(r, c);
    }
    return out;
}

RatMat operator*(const RatMat& a, const RatMat& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("RatMat: product shape mismatch");
    RatMat r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            if (a(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += a(i, k) * b(k, j);
        }
    return r;
}

RatVec operator*(const RatMat& a, const RatVec& v) {
    if (a.cols_ != v.size()) throw std::invalid_argument("RatMat: matvec shape mismatch");
    RatVec r(a.rows_, Rational(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t j = 0; j < a.cols_; ++j) r[i] += a(i, j) * v[j];
    return r;
}

RatMat operator-(const RatMat& a) {
    RatMat r = a;
    for (std::size_t i = 0; i < r.rows_; ++i)
        for (std::size_t j = 0; j < r.cols_; ++j) r(i, j) = -r(i, j);
    return r;
}

std::vector<std::size_t> rref(RatMat& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t sel = rows;
        for (std::size_t r = row; r < rows; ++r)
            if (m(r, col) != 0) {
                sel = r;
                break;
            }
        if (sel == rows) continue;
        if (sel != row)
            for (std::size_t c = 0; c < cols; ++c) std::swap(m(sel, c), m(row, c));
        Rational inv = 1 / m(row, col);
        for (std::size_t c = 0; c < cols; ++c) m(row, c) *= inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == row || m(r, col) == 0) continue;
            Rational f = m(r, col);
            for (std::size_t c = 0; c < cols; ++c) m(r, c) -= f * m(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::size_t rat_rank(RatMat m) { return rref(m).size(); }

RatMat kernel_basis(const RatMat& a) {
    RatMat m = a;
    std::vector<std::size_t> pivots = rref(m);
    const std::size_t cols = a.cols();
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t p : pivots) is_pivot[p] = true;
    RatMat k(cols, cols - pivots.size());
    std::size_t out = 0;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        k(free, out) = 1;
        for (std::size_t pr = 0; pr < pivots.size(); ++pr) k(pivots[pr], out) = -m(pr, free);
        ++out;
    }
    return k;
}

std::optional<RatVec> solve(const RatMat& a, const RatVec& b) {
    RatMat bm(b.size(), 1);
    bm.set_col(0, b);
    RatMat aug = hcat(a, bm);
    std::vector<std::size_t> pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt; // inconsistent
    RatVec x(a.cols(), Rational(0));
    for (std::size_t pr = 0; pr < pivots.size(); ++pr) x[pivots[pr]] = aug(pr, a.cols());
    return x;
}

std::optional<RatMat> inverse(const RatMat& a) {
    if (a.rows() != a.cols()) return std::nullopt;
    const std::size_t n = a.rows();
    RatMat aug = hcat(a, RatMat::identity(n));
    std::vector<std::size_t> pivots = rref(aug);
    if (pivots.size() != n || (n > 0 && pivots.back() >= n)) return std::nullopt;
    RatMat out(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out(r, c) = aug(r, n + c);
    return out;
}

RatMat complete_basis(const RatMat& base, const RatMat& candidates) {
    const std::size_t dim = base.rows();
    if (rat_rank(base) != base.cols())
        throw std::invalid_argument("complete_basis: base columns are dependent");
    RatMat acc = base;
    RatMat chosen(dim, dim - base.cols());
    std::size_t taken = 0;
    for (std::size_t c = 0; c < candidates.cols() && taken < chosen.cols(); ++c) {
        RatMat cand(dim, 1);
        cand.set_col(0, candidates.col(c));
        RatMat trial = hcat(acc, cand);
        if (rat_rank(trial) > acc.cols()) {
            chosen.set_col(taken++, candidates.col(c));
            acc = trial;
        }
    }
    if (taken != chosen.cols()) throw std::invalid_argument("complete_basis: candidates do not span");
    return chosen;
}

} // namespace lakit
