#include "lakit/module.hpp"

#include <stdexcept>

namespace lakit {

PolyMat::PolyMat(std::size_t rows, std::size_t cols, std::size_t nvars)
    : rows_(rows), cols_(cols), nvars_(nvars), data_(rows * cols, Poly(nvars)) {}

Section PolyMat::apply(const Section& s) const {
    if (s.size() != cols_) throw std::invalid_argument("PolyMat::apply: rank mismatch");
    Section r = zero_section(rows_, nvars_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r[i] += at(i, j) * s[j];
    return r;
}

PolyMat PolyMat::transpose() const {
    PolyMat t(cols_, rows_, nvars_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

bool PolyMat::is_zero() const {
    for (const auto& p : data_)
        if (!p.is_zero()) return false;
    return true;
}

bool PolyMat::is_constant() const {
    for (const auto& p : data_)
        if (!p.is_constant()) return false;
    return true;
}

bool PolyMat::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if (at(i, j) != at(j, i)) return false;
    return true;
}

PolyMat operator*(const PolyMat& a, const PolyMat& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("PolyMat: product shape mismatch");
    PolyMat r(a.rows_, b.cols_, a.nvars_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k)
            for (std::size_t j = 0; j < b.cols_; ++j) r.at(i, j) += a.at(i, k) * b.at(k, j);
    return r;
}

PolyMat operator+(const PolyMat& a, const PolyMat& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw std::invalid_argument("PolyMat: sum shape mismatch");
    PolyMat r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] += b.data_[i];
    return r;
}

PolyMat operator-(const PolyMat& a, const PolyMat& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw std::invalid_argument("PolyMat: difference shape mismatch");
    PolyMat r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] -= b.data_[i];
    return r;
}

} // namespace lakit
