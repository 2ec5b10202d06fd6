#include "riskm/closedset.hpp"

#include <algorithm>

namespace riskm {

ClosedSet ClosedSet::from_intervals(std::vector<Interval> intervals) {
    for (auto& iv : intervals) {
        require(std::isfinite(iv.a) && std::isfinite(iv.b), "ClosedSet: non-finite endpoint");
        require(iv.a <= iv.b + kEps, "ClosedSet: interval with a > b");
        if (iv.b < iv.a) iv.b = iv.a;
        require(iv.a >= -kEps && iv.b <= 1.0 + kEps, "ClosedSet: interval outside [0,1]");
        iv.a = std::clamp(iv.a, 0.0, 1.0);
        iv.b = std::clamp(iv.b, 0.0, 1.0);
    }
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& x, const Interval& y) { return x.a < y.a; });
    ClosedSet k;
    for (const auto& iv : intervals) {
        if (!k.intervals_.empty() && iv.a <= k.intervals_.back().b + kEps) {
            k.intervals_.back().b = std::max(k.intervals_.back().b, iv.b);
        } else {
            k.intervals_.push_back(iv);
        }
    }
    return k;
}

bool ClosedSet::contains(double p, double tol) const {
    for (const auto& iv : intervals_)
        if (iv.contains(p, tol)) return true;
    return false;
}

ClosedSet ClosedSet::unite(const ClosedSet& other) const {
    std::vector<Interval> all = intervals_;
    all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
    return from_intervals(std::move(all));
}

std::vector<Interval> ClosedSet::gaps() const {
    std::vector<Interval> out;
    double cursor = 0.0;
    for (const auto& iv : intervals_) {
        if (iv.a - cursor > kEps) out.push_back({cursor, iv.a});
        cursor = std::max(cursor, iv.b);
    }
    if (1.0 - cursor > kEps) out.push_back({cursor, 1.0});
    return out;
}

ClosedSet ClosedSet::normalized_mod01() const {
    std::vector<Interval> kept;
    for (const auto& iv : intervals_) {
        if (iv.degenerate() && (iv.b <= kEps || iv.a >= 1.0 - kEps)) continue;
        kept.push_back(iv);
    }
    ClosedSet k;
    k.intervals_ = std::move(kept);
    return k;
}

bool ClosedSet::equal_mod01(const ClosedSet& other, double tol) const {
    const auto a = normalized_mod01().intervals_;
    const auto b = other.normalized_mod01().intervals_;
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!approx_eq(a[i].a, b[i].a, tol) || !approx_eq(a[i].b, b[i].b, tol)) return false;
    return true;
}

bool ClosedSet::subset_mod01(const ClosedSet& other, double tol) const {
    const auto a = normalized_mod01().intervals_;
    const auto b = other.normalized_mod01().intervals_;
    for (const auto& iv : a) {
        bool covered = false;
        for (const auto& jv : b) {
            if (jv.a <= iv.a + tol && iv.b <= jv.b + tol) {
                covered = true;
                break;
            }
        }
        if (!covered) return false;
    }
    return true;
}

std::vector<double> ClosedSet::endpoints() const {
    std::vector<double> out;
    for (const auto& iv : intervals_) {
        out.push_back(iv.a);
        if (!iv.degenerate()) out.push_back(iv.b);
    }
    return out;
}

}  // namespace riskm
