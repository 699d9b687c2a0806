#pragma once

#include "lakit/exactla.hpp"
#include "lakit/module.hpp"
#include "lakit/tensor.hpp"

namespace lakit {

// A constant-coefficient symmetric pairing on a rank-r module, given by its
// Gram matrix in the frame.  Musical isomorphisms require invertibility;
// degenerate pairings may still be stored and evaluated.
class Metric {
public:
    Metric() = default;
    explicit Metric(RatMat gram); // throws if not symmetric

    std::size_t rank() const { return gram_.rows(); }
    const RatMat& gram() const { return gram_; }
    bool is_invertible() const;
    const RatMat& inverse_gram() const; // throws if degenerate

    // <a, b> with polynomial coefficients.
    Poly pairing(const Section& a, const Section& b) const;

    // Index-musical maps: flat sends vectors to covectors via the Gram
    // matrix, sharp is its inverse.
    Section flat(const Section& v) const;
    Section sharp(const Section& covector) const;

private:
    RatMat gram_;
    mutable RatMat inv_;
    mutable bool inv_ready_ = false;
};

// Lower (or raise) one input slot of a tensor: replace slot `slot` by its
// metric-dual, i.e. precompose that slot with sharp (for lower=false the
// slot is precomposed with flat).  Output slot raising uses the same Gram
// data applied to the output index.
TensorMap lower_slot(const TensorMap& t, std::size_t slot, const Metric& m);
TensorMap raise_slot(const TensorMap& t, std::size_t slot, const Metric& m);
TensorMap raise_output(const TensorMap& t, const Metric& m);
TensorMap lower_output(const TensorMap& t, const Metric& m);

} // namespace lakit
