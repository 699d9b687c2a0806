#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lakit/module.hpp"
#include "lakit/witness.hpp"

namespace lakit {

enum class Symmetry { none, sym, alt };

// A multilinear map between free modules, stored as a dense array of
// polynomial coefficients indexed by one frame index per input slot plus one
// output frame index (scalar-valued maps have output rank 1 semantics via
// out_rank == 0).  Symmetry tags assert full (anti)symmetry across the input
// slots and are validated at construction; violating coefficients are an
// error, not a silent normalization.
class TensorMap {
public:
    TensorMap() = default;
    // out_rank == 0 means scalar (Poly-valued) output.
    TensorMap(std::vector<std::size_t> arg_ranks, std::size_t out_rank, std::size_t nvars,
              Symmetry sym = Symmetry::none);

    std::size_t arity() const { return arg_ranks_.size(); }
    const std::vector<std::size_t>& arg_ranks() const { return arg_ranks_; }
    std::size_t out_rank() const { return out_rank_; }
    std::size_t nvars() const { return nvars_; }
    Symmetry symmetry() const { return sym_; }

    // Coefficient for input frame tuple `idx` (arity entries) and output
    // frame index j (must be 0 for scalar output).
    Poly& coeff(const std::vector<std::size_t>& idx, std::size_t j = 0);
    const Poly& coeff(const std::vector<std::size_t>& idx, std::size_t j = 0) const;

    // Checks the symmetry tag; throws std::invalid_argument on violation.
    void validate() const;

    // Multilinear evaluation on sections (Poly-linear in every slot).
    Section eval(const std::vector<Section>& args) const;
    Poly eval_scalar(const std::vector<Section>& args) const;

    bool operator==(const TensorMap& o) const = default;

private:
    std::vector<std::size_t> arg_ranks_;
    std::size_t out_rank_ = 0;
    std::size_t nvars_ = 0;
    Symmetry sym_ = Symmetry::none;
    std::vector<Poly> data_;

    std::size_t flat_index(const std::vector<std::size_t>& idx, std::size_t j) const;
    std::size_t out_extent() const { return out_rank_ ? out_rank_ : 1; }
};

// Structural equality with witness extraction: returns std::nullopt when the
// tensors agree, otherwise the first differing coefficient with a rational
// point where the discrepancy polynomial is nonzero.
std::optional<Witness> tensor_equal(const TensorMap& a, const TensorMap& b);

} // namespace lakit
