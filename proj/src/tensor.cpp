#include "lakit/tensor.hpp"

#include <algorithm>
#include <stdexcept>

namespace lakit {

TensorMap::TensorMap(std::vector<std::size_t> arg_ranks, std::size_t out_rank, std::size_t nvars,
                     Symmetry sym)
    : arg_ranks_(std::move(arg_ranks)), out_rank_(out_rank), nvars_(nvars), sym_(sym) {
    if (sym_ != Symmetry::none) {
        for (std::size_t r : arg_ranks_)
            if (r != arg_ranks_.front())
                throw std::invalid_argument("TensorMap: symmetry tag needs equal input ranks");
    }
    std::size_t total = out_extent();
    for (std::size_t r : arg_ranks_) total *= r;
    data_.assign(total, Poly(nvars_));
}

std::size_t TensorMap::flat_index(const std::vector<std::size_t>& idx, std::size_t j) const {
    if (idx.size() != arg_ranks_.size()) throw std::invalid_argument("TensorMap: bad index arity");
    if (j >= out_extent()) throw std::invalid_argument("TensorMap: output index out of range");
    std::size_t flat = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] >= arg_ranks_[k]) throw std::invalid_argument("TensorMap: index out of range");
        flat = flat * arg_ranks_[k] + idx[k];
    }
    return flat * out_extent() + j;
}

Poly& TensorMap::coeff(const std::vector<std::size_t>& idx, std::size_t j) {
    return data_[flat_index(idx, j)];
}

const Poly& TensorMap::coeff(const std::vector<std::size_t>& idx, std::size_t j) const {
    return data_[flat_index(idx, j)];
}

void TensorMap::validate() const {
    if (sym_ == Symmetry::none || arity() < 2) return;
    const std::size_t r = arg_ranks_.front();
    if (r == 0) return;
    std::vector<std::size_t> idx(arity(), 0);
    while (true) {
        // Compare against the transposition of each adjacent slot pair; full
        // (anti)symmetry follows because transpositions generate S_n.
        for (std::size_t k = 0; k + 1 < arity(); ++k) {
            std::vector<std::size_t> swapped = idx;
            std::swap(swapped[k], swapped[k + 1]);
            for (std::size_t j = 0; j < out_extent(); ++j) {
                const Poly& a = coeff(idx, j);
                const Poly& b = coeff(swapped, j);
                if (sym_ == Symmetry::sym) {
                    if (a != b) throw std::invalid_argument("TensorMap: symmetric tag violated");
                } else {
                    if (a != -b) throw std::invalid_argument("TensorMap: alternating tag violated");
                }
            }
        }
        std::size_t k = 0;
        for (; k < arity(); ++k) {
            if (++idx[k] < r) break;
            idx[k] = 0;
        }
        if (k == arity()) break;
    }
}

Section TensorMap::eval(const std::vector<Section>& args) const {
    if (args.size() != arity()) throw std::invalid_argument("TensorMap::eval: bad arity");
    for (std::size_t k = 0; k < arity(); ++k)
        if (args[k].size() != arg_ranks_[k])
            throw std::invalid_argument("TensorMap::eval: argument rank mismatch");
    // Module-valued evaluation: values live in a rank-`out_rank_` module, so
    // a tensor into the zero module evaluates to the empty section (scalar
    // maps go through eval_scalar instead).
    Section out = zero_section(out_rank_, nvars_);
    std::vector<std::size_t> idx(arity(), 0);
    if (out_rank_ == 0 ||
        std::any_of(arg_ranks_.begin(), arg_ranks_.end(), [](std::size_t r) { return r == 0; }))
        return out;
    while (true) {
        Poly scale = Poly::constant(nvars_, 1);
        for (std::size_t k = 0; k < arity(); ++k) scale = scale * args[k][idx[k]];
        if (!scale.is_zero())
            for (std::size_t j = 0; j < out_extent(); ++j) out[j] += scale * coeff(idx, j);
        std::size_t k = 0;
        for (; k < arity(); ++k) {
            if (++idx[k] < arg_ranks_[k]) break;
            idx[k] = 0;
        }
        if (k == arity()) break;
    }
    return out;
}

Poly TensorMap::eval_scalar(const std::vector<Section>& args) const {
    if (out_rank_ != 0) throw std::invalid_argument("TensorMap::eval_scalar: not scalar-valued");
    if (args.size() != arity()) throw std::invalid_argument("TensorMap::eval_scalar: bad arity");
    for (std::size_t k = 0; k < arity(); ++k)
        if (args[k].size() != arg_ranks_[k])
            throw std::invalid_argument("TensorMap::eval_scalar: argument rank mismatch");
    Poly out(nvars_);
    if (std::any_of(arg_ranks_.begin(), arg_ranks_.end(), [](std::size_t r) { return r == 0; }))
        return out;
    std::vector<std::size_t> idx(arity(), 0);
    while (true) {
        Poly scale = Poly::constant(nvars_, 1);
        for (std::size_t k = 0; k < arity(); ++k) scale = scale * args[k][idx[k]];
        if (!scale.is_zero()) out += scale * coeff(idx, 0);
        std::size_t k = 0;
        for (; k < arity(); ++k) {
            if (++idx[k] < arg_ranks_[k]) break;
            idx[k] = 0;
        }
        if (k == arity()) break;
    }
    return out;
}

std::optional<Witness> tensor_equal(const TensorMap& a, const TensorMap& b) {
    if (a.arg_ranks() != b.arg_ranks() || a.out_rank() != b.out_rank())
        throw std::invalid_argument("tensor_equal: shape mismatch");
    if (a.arity() == 0) {
        for (std::size_t j = 0; j < (a.out_rank() ? a.out_rank() : 1); ++j) {
            Poly d = a.coeff({}, j) - b.coeff({}, j);
            if (!d.is_zero()) return make_witness(d, {j});
        }
        return std::nullopt;
    }
    std::vector<std::size_t> idx(a.arity(), 0);
    for (std::size_t r : a.arg_ranks())
        if (r == 0) return std::nullopt;
    const std::size_t oe = a.out_rank() ? a.out_rank() : 1;
    while (true) {
        for (std::size_t j = 0; j < oe; ++j) {
            Poly d = a.coeff(idx, j) - b.coeff(idx, j);
            if (!d.is_zero()) {
                std::vector<std::size_t> frames = idx;
                frames.push_back(j);
                return make_witness(d, frames);
            }
        }
        std::size_t k = 0;
        for (; k < a.arity(); ++k) {
            if (++idx[k] < a.arg_ranks()[k]) break;
            idx[k] = 0;
        }
        if (k == a.arity()) break;
    }
    return std::nullopt;
}

} // namespace lakit
