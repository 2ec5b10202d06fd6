#include "riskm/indexsets.hpp"

#include <algorithm>
#include <cmath>

namespace riskm {

// ===========================================================================
// RawMonotone
// ===========================================================================

double RawMonotone::lo() const {
    if (!pieces.empty()) return pieces.front().t0;
    require(!point_values.empty(), "RawMonotone: empty map");
    return point_values.front().first;
}

double RawMonotone::hi() const {
    if (!pieces.empty()) return pieces.back().t1;
    require(!point_values.empty(), "RawMonotone: empty map");
    return point_values.back().first;
}

double RawMonotone::at(double v) const {
    for (const auto& pv : point_values)
        if (approx_eq(pv.first, v)) return pv.second;
    require(!pieces.empty(), "RawMonotone: no piece covers the point");
    if (v <= pieces.front().t0) return pieces.front().at(pieces.front().t0);
    auto it = std::lower_bound(pieces.begin(), pieces.end(), v,
                               [](const LinearPiece& p, double w) { return p.t1 < w; });
    if (it == pieces.end()) --it;
    return it->at(std::min(v, it->t1));
}

MonoFn lc_normalize(const RawMonotone& raw) {
    require(!raw.pieces.empty(), "lc_normalize: map has no pieces");
    MonoFn f = MonoFn::from_pieces(raw.pieces);  // validates monotonicity
    for (const auto& pv : raw.point_values) {
        require(pv.first >= f.lo() - kEps && pv.first <= f.hi() + kEps,
                "lc_normalize: point value outside the domain");
        const double left = pv.first <= f.lo() + kEps ? f(f.lo()) : f(pv.first);
        const double right = pv.first >= f.hi() - kEps ? f(f.hi()) : f.right_limit(pv.first);
        require(pv.second >= left - kEps && pv.second <= right + kEps,
                "lc_normalize: raised value breaks monotonicity");
    }
    return f;
}

// ===========================================================================
// v_map and psi
// ===========================================================================

MonoFn v_map(const ClosedSet& k) {
    std::vector<LinearPiece> pieces;
    double cur_t = 0.0;
    double cur_v = 0.0;
    for (const auto& iv : k.intervals()) {
        if (iv.a > cur_t + kEps) pieces.push_back({cur_t, iv.a, cur_v, cur_v});
        if (iv.b > iv.a + kEps) {
            pieces.push_back({iv.a, iv.b, iv.a, iv.b});
            cur_v = iv.b;
        } else {
            cur_v = iv.a;  // singleton: the running supremum jumps to it
        }
        cur_t = iv.b;
    }
    if (cur_t < 1.0 - kEps) pieces.push_back({cur_t, 1.0, cur_v, cur_v});
    if (pieces.empty()) pieces.push_back({0.0, 1.0, cur_v, cur_v});
    pieces.front().t0 = 0.0;
    pieces.back().t1 = 1.0;
    return MonoFn::from_pieces(std::move(pieces));
}

ClosedSet psi(const MonoFn& g) {
    require(g.unit_domain(), "psi: domain must be [0,1]");
    std::vector<Interval> parts;
    const auto& ps = g.pieces();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (ps[i].v1 > ps[i].v0 + kEps) parts.push_back({ps[i].t0, ps[i].t1});
        // an upward jump at the knot makes it a point of strict increase
        if (i + 1 < ps.size() && ps[i + 1].v0 > ps[i].v1 + kEps)
            parts.push_back({ps[i].t1, ps[i].t1});
    }
    return ClosedSet::from_intervals(std::move(parts));
}

bool precedes(const MonoFn& f, const MonoFn& g) {
    return psi(f).subset_mod01(psi(g));
}

// ===========================================================================
// factor
// ===========================================================================

namespace {

// Maximal runs of g: either a strictly sloped piece or a maximal plateau.
struct Run {
    bool plateau = false;
    double t0 = 0.0, t1 = 0.0;  // parameter span
    double v0 = 0.0, v1 = 0.0;  // value span (equal for plateaus)
};

std::vector<Run> runs_of(const MonoFn& g) {
    std::vector<Run> runs;
    for (const auto& p : g.pieces()) {
        if (p.v1 <= p.v0 + kEps) {
            const double v = 0.5 * (p.v0 + p.v1);
            if (!runs.empty() && runs.back().plateau && approx_eq(runs.back().v1, v)) {
                runs.back().t1 = p.t1;
            } else {
                runs.push_back({true, p.t0, p.t1, v, v});
            }
        } else {
            runs.push_back({false, p.t0, p.t1, p.v0, p.v1});
        }
    }
    return runs;
}

}  // namespace

std::optional<RawMonotone> factor(const MonoFn& f, const MonoFn& g) {
    require(f.unit_domain() && g.unit_domain(), "factor: domains must be [0,1]");
    if (!precedes(f, g)) return std::nullopt;

    RawMonotone h;
    double v_end = g(0.0);
    double y_end = f(0.0);

    auto bridge_to = [&](double v, double y) {
        if (v > v_end + kEps) h.pieces.push_back({v_end, v, y_end, y});
        v_end = std::max(v_end, v);
        y_end = y;
    };

    for (const auto& run : runs_of(g)) {
        if (run.plateau) {
            const double y_req = f(run.t1);
            if (run.v0 > v_end + kEps) {
                bridge_to(run.v0, y_req);
            } else if (y_req > y_end + kEps) {
                // the plateau forces a raised value at the current knot
                h.point_values.emplace_back(v_end, y_req);
                y_end = y_req;
            }
            continue;
        }
        // strictly sloped run: h restricted to [v0,v1] is f read through the
        // affine inverse, split at the knots of f inside the span
        bridge_to(run.v0, f.right_limit(run.t0));
        std::vector<double> cuts{run.t0, run.t1};
        for (std::size_t i = 1; i < f.pieces().size(); ++i) {
            const double t = f.pieces()[i].t0;
            if (t > run.t0 + kEps && t < run.t1 - kEps) cuts.push_back(t);
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double ta = cuts[i];
            const double tb = cuts[i + 1];
            const double frac_a = (ta - run.t0) / (run.t1 - run.t0);
            const double frac_b = (tb - run.t0) / (run.t1 - run.t0);
            const double va = run.v0 + frac_a * (run.v1 - run.v0);
            const double vb = run.v0 + frac_b * (run.v1 - run.v0);
            h.pieces.push_back({va, vb, f.right_limit(ta), f(tb)});
        }
        v_end = run.v1;
        y_end = f(run.t1);
    }

    if (h.pieces.empty()) {
        // g is constant: the factor map is a single assigned point
        h.point_values.emplace_back(v_end, f(1.0));
    }
    return h;
}

// ===========================================================================
// one-sided quantile additivity
// ===========================================================================

bool var_additivity_condition(const ClosedSet& k, double p, QuantileSide side) {
    if (side == QuantileSide::left)
        require(p > kEps && p <= 1.0 + kEps, "var_additivity_condition: left needs p in (0,1]");
    else
        require(p >= -kEps && p < 1.0 - kEps,
                "var_additivity_condition: right needs p in [0,1)");
    for (const auto& iv : k.intervals()) {
        if (side == QuantileSide::left) {
            if (iv.a < p - kEps && p <= iv.b + kEps) return true;
        } else {
            if (iv.a <= p + kEps && p < iv.b - kEps) return true;
        }
    }
    return false;
}

}  // namespace riskm
