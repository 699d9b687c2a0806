#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lakit/rational.hpp"

namespace lakit {

using RatVec = std::vector<Rational>;

// Dense matrix of exact rationals; all the constant-coefficient linear
// algebra (annihilators, kernels, basis completions) runs through this type
// with Gauss-Jordan elimination, so there is no pivoting threshold anywhere.
class RatMat {
public:
    RatMat() = default;
    RatMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), d_(rows * cols, Rational(0)) {}

    static RatMat identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return d_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return d_[r * cols_ + c]; }

    RatMat transpose() const;
    RatVec col(std::size_t c) const;
    void set_col(std::size_t c, const RatVec& v);
    RatMat left_cols(std::size_t n) const;
    // Horizontal concatenation [a | b].
    friend RatMat hcat(const RatMat& a, const RatMat& b);

    friend RatMat operator*(const RatMat& a, const RatMat& b);
    friend RatVec operator*(const RatMat& a, const RatVec& v);
    friend RatMat operator-(const RatMat& a);

    bool operator==(const RatMat& o) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> d_;
};

// Exact Gauss-Jordan elimination; returns the pivot columns and reduces `m`
// in place to reduced row echelon form.
std::vector<std::size_t> rref(RatMat& m);

std::size_t rat_rank(RatMat m);

// Basis of the null space, as matrix columns (may have zero columns).
RatMat kernel_basis(const RatMat& a);

// One solution of a x = b, if any.
std::optional<RatVec> solve(const RatMat& a, const RatVec& b);

std::optional<RatMat> inverse(const RatMat& a);

// Columns of `candidates` that extend the column span of `base` to a basis
// of the full space; base columns must be independent.  Throws if the
// combined span is deficient.
RatMat complete_basis(const RatMat& base, const RatMat& candidates);

} // namespace lakit
