#include "lakit/metric.hpp"

#include <stdexcept>

#include "lakit/exactla.hpp"

namespace lakit {

Metric::Metric(RatMat gram) : gram_(std::move(gram)) {
    if (gram_.rows() != gram_.cols()) throw std::invalid_argument("Metric: gram must be square");
    for (std::size_t i = 0; i < gram_.rows(); ++i)
        for (std::size_t j = i + 1; j < gram_.cols(); ++j)
            if (gram_(i, j) != gram_(j, i))
                throw std::invalid_argument("Metric: gram must be symmetric");
}

bool Metric::is_invertible() const {
    if (!inv_ready_) {
        auto inv = lakit::inverse(gram_);
        if (inv) {
            inv_ = *inv;
            inv_ready_ = true;
        }
        return inv.has_value();
    }
    return true;
}

const RatMat& Metric::inverse_gram() const {
    if (!is_invertible()) throw std::invalid_argument("Metric: degenerate pairing has no inverse");
    return inv_;
}

Poly Metric::pairing(const Section& a, const Section& b) const {
    if (a.size() != rank() || b.size() != rank())
        throw std::invalid_argument("Metric::pairing: rank mismatch");
    std::size_t nv = a.empty() ? 0 : a[0].nvars();
    Poly acc(nv);
    for (std::size_t i = 0; i < rank(); ++i)
        for (std::size_t j = 0; j < rank(); ++j) {
            if (gram_(i, j) == 0) continue;
            acc += gram_(i, j) * (a[i] * b[j]);
        }
    return acc;
}

Section Metric::flat(const Section& v) const {
    if (v.size() != rank()) throw std::invalid_argument("Metric::flat: rank mismatch");
    std::size_t nv = v.empty() ? 0 : v[0].nvars();
    Section out = zero_section(rank(), nv);
    for (std::size_t a = 0; a < rank(); ++a)
        for (std::size_t i = 0; i < rank(); ++i)
            if (gram_(a, i) != 0) out[a] += gram_(a, i) * v[i];
    return out;
}

Section Metric::sharp(const Section& covector) const {
    if (covector.size() != rank()) throw std::invalid_argument("Metric::sharp: rank mismatch");
    const RatMat& gi = inverse_gram();
    std::size_t nv = covector.empty() ? 0 : covector[0].nvars();
    Section out = zero_section(rank(), nv);
    for (std::size_t i = 0; i < rank(); ++i)
        for (std::size_t a = 0; a < rank(); ++a)
            if (gi(i, a) != 0) out[i] += gi(i, a) * covector[a];
    return out;
}

namespace {

// Precompose slot `slot` with the constant matrix m (columns index the new
// slot's frame): T'(..., a, ...) = sum_i m(i, a) T(..., i, ...).
TensorMap slot_transform(const TensorMap& t, std::size_t slot, const RatMat& m) {
    if (slot >= t.arity()) throw std::invalid_argument("slot transform: slot out of range");
    TensorMap out(t.arg_ranks(), t.out_rank(), t.nvars(), Symmetry::none);
    const std::size_t oe = t.out_rank() ? t.out_rank() : 1;
    std::vector<std::size_t> idx(t.arity(), 0);
    for (std::size_t r : t.arg_ranks())
        if (r == 0) return out;
    while (true) {
        for (std::size_t j = 0; j < oe; ++j) {
            Poly acc(t.nvars());
            std::vector<std::size_t> src = idx;
            for (std::size_t i = 0; i < t.arg_ranks()[slot]; ++i) {
                src[slot] = i;
                if (m(i, idx[slot]) != 0)
                    acc += m(i, idx[slot]) *
                           t.coeff(src, j);
            }
            out.coeff(idx, j) = acc;
        }
        std::size_t k = 0;
        for (; k < t.arity(); ++k) {
            if (++idx[k] < t.arg_ranks()[k]) break;
            idx[k] = 0;
        }
        if (k == t.arity()) break;
    }
    return out;
}

TensorMap output_transform(const TensorMap& t, const RatMat& m) {
    if (t.out_rank() == 0) throw std::invalid_argument("output transform: scalar output");
    TensorMap out(t.arg_ranks(), t.out_rank(), t.nvars(), Symmetry::none);
    std::vector<std::size_t> idx(t.arity(), 0);
    for (std::size_t r : t.arg_ranks())
        if (r == 0) return out;
    while (true) {
        for (std::size_t j = 0; j < t.out_rank(); ++j) {
            Poly acc(t.nvars());
            for (std::size_t i = 0; i < t.out_rank(); ++i)
                if (m(j, i) != 0)
                    acc += m(j, i) *
                           t.coeff(idx, i);
            out.coeff(idx, j) = acc;
        }
        std::size_t k = 0;
        for (; k < t.arity(); ++k) {
            if (++idx[k] < t.arg_ranks()[k]) break;
            idx[k] = 0;
        }
        if (k == t.arity()) break;
    }
    return out;
}

} // namespace

TensorMap raise_slot(const TensorMap& t, std::size_t slot, const Metric& m) {
    return slot_transform(t, slot, m.inverse_gram());
}

TensorMap lower_slot(const TensorMap& t, std::size_t slot, const Metric& m) {
    return slot_transform(t, slot, m.gram());
}

TensorMap raise_output(const TensorMap& t, const Metric& m) {
    return output_transform(t, m.inverse_gram());
}

TensorMap lower_output(const TensorMap& t, const Metric& m) {
    return output_transform(t, m.gram());
}

} // namespace lakit
