#include "riskm/monofn.hpp"

#include <algorithm>

namespace riskm {

namespace {

bool collinear(const LinearPiece& a, const LinearPiece& b) {
    if (!approx_eq(a.v1, b.v0)) return false;
    return approx_eq(a.slope(), b.slope(), kEps * std::max(1.0, std::fabs(a.slope())));
}

}  // namespace

MonoFn MonoFn::from_pieces(std::vector<LinearPiece> pieces) {
    require(!pieces.empty(), "MonoFn: empty piece list");
    // Drop null-width pieces, snap abutting endpoints, validate monotonicity.
    std::vector<LinearPiece> kept;
    for (auto& p : pieces) {
        require(std::isfinite(p.t0) && std::isfinite(p.t1) && std::isfinite(p.v0) &&
                    std::isfinite(p.v1),
                "MonoFn: non-finite piece");
        if (p.width() <= kEps) continue;
        kept.push_back(p);
    }
    require(!kept.empty(), "MonoFn: all pieces degenerate");
    for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
        require(approx_eq(kept[i].t1, kept[i + 1].t0),
                "MonoFn: pieces must tile the domain contiguously");
        kept[i + 1].t0 = kept[i].t1;
    }
    for (auto& p : kept) {
        require(p.v1 >= p.v0 - kEps, "MonoFn: piece must be increasing");
        if (p.v1 < p.v0) p.v1 = p.v0;
    }
    for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
        require(kept[i + 1].v0 >= kept[i].v1 - kEps,
                "MonoFn: knots may only jump upward");
        if (kept[i + 1].v0 < kept[i].v1) kept[i + 1].v0 = kept[i].v1;
    }
    // Merge collinear continuations so equal functions share a normal form.
    MonoFn f;
    for (auto& p : kept) {
        if (!f.pieces_.empty() && collinear(f.pieces_.back(), p)) {
            f.pieces_.back().t1 = p.t1;
            f.pieces_.back().v1 = p.v1;
        } else {
            f.pieces_.push_back(p);
        }
    }
    return f;
}

MonoFn MonoFn::constant(double lo, double hi, double v) {
    return from_pieces({{lo, hi, v, v}});
}

MonoFn MonoFn::identity() { return from_pieces({{0.0, 1.0, 0.0, 1.0}}); }

namespace {

// Queries within the null tolerance of a knot mean the knot itself: knot
// positions are often accumulated sums (quantile masses), so a caller's
// exact level can land an ulp to either side. Without the snap a one-sided
// limit would read the neighbouring segment instead of the jump.
double snap_to_knot(const std::vector<LinearPiece>& pieces, double t) {
    auto it = std::lower_bound(pieces.begin(), pieces.end(), t,
                               [](const LinearPiece& p, double x) { return p.t1 < x; });
    if (it == pieces.end()) return t;
    if (std::fabs(t - it->t0) <= kEps) return it->t0;
    if (std::fabs(t - it->t1) <= kEps) return it->t1;
    return t;
}

}  // namespace

double MonoFn::operator()(double t) const {
    t = snap_to_knot(pieces_, t);
    if (t <= lo()) return pieces_.front().v0;
    if (t >= hi()) return pieces_.back().v1;
    // Piece with t0 < t <= t1 gives the left-continuous value.
    auto it = std::lower_bound(pieces_.begin(), pieces_.end(), t,
                               [](const LinearPiece& p, double x) { return p.t1 < x; });
    return it->at(t);
}

double MonoFn::left_limit(double t) const { return (*this)(t); }

double MonoFn::right_limit(double t) const {
    t = snap_to_knot(pieces_, t);
    if (t <= lo()) return pieces_.front().v0;
    if (t >= hi()) return pieces_.back().v1;
    // Piece with t0 <= t < t1 gives the right limit.
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                               [](double x, const LinearPiece& p) { return x < p.t1; });
    return it->at(t);
}

bool MonoFn::same_function(const MonoFn& other, double tol) const {
    if (pieces_.size() != other.pieces_.size()) return false;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& a = pieces_[i];
        const auto& b = other.pieces_[i];
        if (!approx_eq(a.t0, b.t0, tol) || !approx_eq(a.t1, b.t1, tol) ||
            !approx_eq(a.v0, b.v0, tol) || !approx_eq(a.v1, b.v1, tol))
            return false;
    }
    return true;
}

double integral(const MonoFn& f) {
    double total = 0.0;
    for (const auto& p : f.pieces()) total += integral_linear(p.t0, p.t1, p.v0, p.v1);
    return total;
}

}  // namespace riskm
