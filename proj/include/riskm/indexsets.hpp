#ifndef RISKM_INDEXSETS_HPP
#define RISKM_INDEXSETS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "riskm/closedset.hpp"
#include "riskm/monofn.hpp"

namespace riskm {

// Increasing piecewise-linear map that may carry isolated raised values at
// knots (so it need not be left-continuous). This is the general form of an
// increasing witness map; lc_normalize projects it onto its a.e. class.
struct RawMonotone {
    // sorted pieces tiling the domain; upward jumps allowed between pieces
    std::vector<LinearPiece> pieces;
    // (knot, value) overrides; each value must sit between the one-sided
    // limits at its knot, otherwise the map is not increasing
    std::vector<std::pair<double, double>> point_values;

    double lo() const;
    double hi() const;
    // evaluation: the override if one applies, else left-continuous piece
    // value (right-continuous at the domain's left end)
    double at(double v) const;
};

// Unique left-continuous representative of the a.e. class: drops isolated
// raised values and re-reads every knot at its left limit. Throws if the
// input is not increasing.
MonoFn lc_normalize(const RawMonotone& raw);

// The index function of a closed set: p |-> sup((0,p) ∩ K), with sup ∅ = 0.
// Identity on the intervals of K, constant across its gaps.
MonoFn v_map(const ClosedSet& k);

// Points of strict increase of g: closed union of the strictly sloped
// pieces plus every jump knot. psi(v_map(K)) recovers K modulo {0,1}.
ClosedSet psi(const MonoFn& g);

// The coarseness preorder: f precedes g iff psi(f) ⊆ psi(g), i.e. f is an
// increasing re-reading of g (see factor).
bool precedes(const MonoFn& f, const MonoFn& g);

// If f precedes g, an increasing map h on the range of g with
// lc_normalize(h ∘ g) = f; absent otherwise. Off the range of g the map is
// bridged affinely (any increasing extension is equivalent).
std::optional<RawMonotone> factor(const MonoFn& f, const MonoFn& g);

enum class QuantileSide { left, right };

// Whether K supports the one-sided approach to p that makes the
// corresponding quantile additive: from the left, some interval [a,b] of K
// has a < p <= b; from the right, a <= p < b.
bool var_additivity_condition(const ClosedSet& k, double p, QuantileSide side);

}  // namespace riskm

#endif  // RISKM_INDEXSETS_HPP
