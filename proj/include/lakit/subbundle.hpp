#pragma once

#include "lakit/exactla.hpp"
#include "lakit/metric.hpp"
#include "lakit/module.hpp"

namespace lakit {

// A constant-coefficient subbundle of a trivialized rank-n bundle: the
// columns of `basis` are independent frame-coordinate vectors spanning it.
class SubBundle {
public:
    SubBundle() = default;
    SubBundle(std::size_t ambient_rank, RatMat basis); // throws on dependent columns

    std::size_t ambient_rank() const { return ambient_; }
    std::size_t rank() const { return static_cast<std::size_t>(basis_.cols()); }
    const RatMat& basis() const { return basis_; }
    Section basis_section(std::size_t k, std::size_t nvars) const;

    // Annihilator in the dual bundle: covectors vanishing on this subbundle.
    SubBundle annihilator() const;
    // Orthogonal complement with respect to a (possibly degenerate) pairing.
    SubBundle orthogonal(const Metric& m) const;

    // Is the (polynomial-coefficient) section pointwise in the subbundle?
    // Exact: tests pairing against an annihilator basis.
    bool contains(const Section& s) const;
    bool contains(const SubBundle& other) const;

    SubBundle sum(const SubBundle& other) const;
    SubBundle intersect(const SubBundle& other) const;

    // Coordinates of a member section in this subbundle's basis.
    Section coordinates(const Section& s) const; // throws if not a member

private:
    std::size_t ambient_ = 0;
    RatMat basis_;
};

} // namespace lakit
