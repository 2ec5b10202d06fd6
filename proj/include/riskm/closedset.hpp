#ifndef RISKM_CLOSEDSET_HPP
#define RISKM_CLOSEDSET_HPP

#include <vector>

#include "riskm/common.hpp"

namespace riskm {

// Closed subset of [0,1] stored as a finite union of disjoint closed
// intervals (singletons allowed). Overlapping or touching intervals are
// merged on construction. Two sets are compared modulo the points {0,1}:
// isolated singletons at the boundary do not distinguish sets.
//
// Only finite interval unions are supported; sets with accumulation points
// (e.g. {1/n}) are outside the representable class.
class ClosedSet {
  public:
    static ClosedSet from_intervals(std::vector<Interval> intervals);
    static ClosedSet empty() { return ClosedSet{}; }
    static ClosedSet full() { return from_intervals({{0.0, 1.0}}); }
    static ClosedSet point(double p) { return from_intervals({{p, p}}); }

    const std::vector<Interval>& intervals() const { return intervals_; }
    bool is_empty() const { return intervals_.empty(); }

    bool contains(double p, double tol = kEps) const;

    ClosedSet unite(const ClosedSet& other) const;

    // Open components of the complement in [0,1] (endpoints 0 and 1 act as
    // members, so end gaps run from 0 or to 1). Degenerate gaps are dropped.
    std::vector<Interval> gaps() const;

    // Normal form with isolated boundary singletons {0},{1} removed; used by
    // the modulo-{0,1} comparisons.
    ClosedSet normalized_mod01() const;
    bool equal_mod01(const ClosedSet& other, double tol = kEps) const;
    bool subset_mod01(const ClosedSet& other, double tol = kEps) const;

    // Endpoints of all intervals, in order (each nondegenerate interval
    // contributes two, a singleton one).
    std::vector<double> endpoints() const;

  private:
    std::vector<Interval> intervals_;
};

}  // namespace riskm

#endif  // RISKM_CLOSEDSET_HPP
