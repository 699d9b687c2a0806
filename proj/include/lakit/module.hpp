#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lakit/section.hpp"

namespace lakit {

// A finitely generated free module over the polynomial base ring: a name, a
// rank and the shared number of base variables.  Sections are coefficient
// vectors in the distinguished frame e_1,...,e_r; the dual module reuses the
// same record with the dual frame.
struct FreeModule {
    std::string name;
    std::size_t rank = 0;
    std::size_t nvars = 0;

    Section zero() const { return zero_section(rank, nvars); }
    Section frame(std::size_t i) const { return frame_section(rank, nvars, i); }
};

// A module map in frame coordinates: `rows x cols` polynomial entries, acting
// on a section s of the rank-`cols` source by matrix-vector product.
class PolyMat {
public:
    PolyMat() = default;
    PolyMat(std::size_t rows, std::size_t cols, std::size_t nvars);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nvars() const { return nvars_; }

    Poly& at(std::size_t r, std::size_t c) { return data_.at(r * cols_ + c); }
    const Poly& at(std::size_t r, std::size_t c) const { return data_.at(r * cols_ + c); }

    Section apply(const Section& s) const;
    PolyMat transpose() const;
    // Dual map between the dual modules; in frame coordinates the transpose.
    PolyMat dual() const { return transpose(); }

    bool operator==(const PolyMat& o) const = default;
    bool is_zero() const;
    bool is_constant() const;
    bool is_symmetric() const;

    friend PolyMat operator*(const PolyMat& a, const PolyMat& b);
    friend PolyMat operator+(const PolyMat& a, const PolyMat& b);
    friend PolyMat operator-(const PolyMat& a, const PolyMat& b);

private:
    std::size_t rows_ = 0, cols_ = 0, nvars_ = 0;
    std::vector<Poly> data_;
};

} // namespace lakit
