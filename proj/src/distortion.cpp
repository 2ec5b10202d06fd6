#include "riskm/distortion.hpp"

#include <algorithm>
#include <cmath>

namespace riskm {

// ===========================================================================
// construction
// ===========================================================================

DistortionFn DistortionFn::from_knots(std::vector<DistortionKnot> knots,
                                      std::vector<double> curvature) {
    require(knots.size() >= 2, "DistortionFn: need at least the knots at 0 and 1");
    for (const auto& k : knots)
        require(std::isfinite(k.t) && std::isfinite(k.left) && std::isfinite(k.value) &&
                    std::isfinite(k.right),
                "DistortionFn: non-finite knot");
    std::sort(knots.begin(), knots.end(),
              [](const DistortionKnot& a, const DistortionKnot& b) { return a.t < b.t; });
    require(approx_eq(knots.front().t, 0.0) && approx_eq(knots.back().t, 1.0),
            "DistortionFn: knots must span [0,1]");
    knots.front().t = 0.0;
    knots.back().t = 1.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        require(knots[i + 1].t - knots[i].t > kEps, "DistortionFn: duplicate knots");
    require(std::fabs(knots.front().value) <= kEps, "DistortionFn: h(0) must be 0");
    knots.front().value = 0.0;
    knots.front().left = 0.0;  // no limit from below at 0
    knots.back().right = knots.back().value;  // no limit from above at 1
    if (curvature.empty()) curvature.assign(knots.size() - 1, 0.0);
    require(curvature.size() == knots.size() - 1,
            "DistortionFn: curvature list must have one entry per knot gap");
    for (double c : curvature)
        require(std::isfinite(c), "DistortionFn: non-finite curvature");
    DistortionFn h;
    h.knots_ = std::move(knots);
    h.curvature_ = std::move(curvature);
    return h;
}

std::vector<DistortionFn::Segment> DistortionFn::segments() const {
    std::vector<Segment> out;
    out.reserve(knots_.size() - 1);
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
        out.push_back({knots_[i].t, knots_[i + 1].t, knots_[i].right, knots_[i + 1].left,
                       curvature_[i]});
    return out;
}

double DistortionFn::operator()(double t) const {
    t = std::clamp(t, 0.0, 1.0);
    for (std::size_t i = 0; i < knots_.size(); ++i)
        if (approx_eq(knots_[i].t, t)) return knots_[i].value;
    auto it = std::lower_bound(
        knots_.begin(), knots_.end(), t,
        [](const DistortionKnot& k, double v) { return k.t < v; });
    const std::size_t j = static_cast<std::size_t>(it - knots_.begin()) - 1;
    const Segment s{knots_[j].t, knots_[j + 1].t, knots_[j].right, knots_[j + 1].left,
                    curvature_[j]};
    return s.at(t);
}

double DistortionFn::left_limit(double t) const {
    for (std::size_t i = 0; i < knots_.size(); ++i)
        if (approx_eq(knots_[i].t, t)) return knots_[i].left;
    return (*this)(t);
}

double DistortionFn::right_limit(double t) const {
    for (std::size_t i = 0; i < knots_.size(); ++i)
        if (approx_eq(knots_[i].t, t)) return knots_[i].right;
    return (*this)(t);
}

bool DistortionFn::same_function(const DistortionFn& other, double tol) const {
    // compare on the union grid: knot data and midpoint values
    std::vector<double> ts;
    for (const auto& k : knots_) ts.push_back(k.t);
    for (const auto& k : other.knots_) ts.push_back(k.t);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(),
                         [tol](double a, double b) { return std::fabs(a - b) <= tol; }),
             ts.end());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!approx_eq((*this)(ts[i]), other(ts[i]), tol)) return false;
        if (!approx_eq(left_limit(ts[i]), other.left_limit(ts[i]), tol)) return false;
        if (!approx_eq(right_limit(ts[i]), other.right_limit(ts[i]), tol)) return false;
        if (i + 1 < ts.size()) {
            // two interior probes pin the quadratic on the shared segment
            for (double f : {1.0 / 3.0, 2.0 / 3.0}) {
                const double m = ts[i] + f * (ts[i + 1] - ts[i]);
                if (!approx_eq((*this)(m), other(m), tol)) return false;
            }
        }
    }
    return true;
}

// ===========================================================================
// named weights
// ===========================================================================

DistortionFn DistortionFn::var(double p) {
    require(p > kEps && p < 1.0 - kEps, "var weight: p must lie in (0,1)");
    return from_knots({{0.0, 0.0, 0.0, 0.0},
                       {1.0 - p, 0.0, 0.0, 1.0},
                       {1.0, 1.0, 1.0, 1.0}});
}

DistortionFn DistortionFn::var_plus(double p) {
    require(p >= -kEps && p < 1.0 - kEps, "var_plus weight: p must lie in [0,1)");
    if (p <= kEps) {
        // 1{t >= 1}: the essential infimum
        return from_knots({{0.0, 0.0, 0.0, 0.0}, {1.0, 0.0, 1.0, 1.0}});
    }
    return from_knots({{0.0, 0.0, 0.0, 0.0},
                       {1.0 - p, 0.0, 1.0, 1.0},
                       {1.0, 1.0, 1.0, 1.0}});
}

DistortionFn DistortionFn::es(double p) {
    require(p > kEps && p < 1.0 - kEps, "es weight: p must lie in (0,1)");
    return from_knots({{0.0, 0.0, 0.0, 0.0},
                       {1.0 - p, 1.0, 1.0, 1.0},
                       {1.0, 1.0, 1.0, 1.0}});
}

DistortionFn DistortionFn::mean() {
    return from_knots({{0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0, 1.0}});
}

DistortionFn DistortionFn::ess_sup() {
    return from_knots({{0.0, 0.0, 0.0, 1.0}, {1.0, 1.0, 1.0, 1.0}});
}

DistortionFn DistortionFn::mean_median_dev() {
    return from_knots({{0.0, 0.0, 0.0, 0.0},
                       {0.5, 0.5, 0.5, 0.5},
                       {1.0, 0.0, 0.0, 0.0}});
}

DistortionFn DistortionFn::gini_shortfall(double alpha, double lambda) {
    require(alpha > kEps && alpha < 1.0 - kEps, "gini weight: alpha must lie in (0,1)");
    require(lambda >= 0.0, "gini weight: lambda must be nonnegative");
    const double w = 1.0 - alpha;
    // t/(1-α) + 2λ t (1-α-t)/(1-α)² on [0,1-α]: affine 0 -> 1 plus the
    // quadratic hump c·t((1-α)-t) with c = 2λ/(1-α)²
    return from_knots({{0.0, 0.0, 0.0, 0.0},
                       {w, 1.0, 1.0, 1.0},
                       {1.0, 1.0, 1.0, 1.0}},
                      {2.0 * lambda / (w * w), 0.0});
}

DistortionFn DistortionFn::maxvar(double alpha) {
    require(alpha > 1.0 + kEps, "maxvar weight: alpha must exceed 1");
    const double e = 1.0 / alpha;
    const int n = 32;
    std::vector<DistortionKnot> knots;
    std::vector<double> curv;
    for (int i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) / n;
        const double v = std::pow(t, e);
        knots.push_back({t, v, v, v});
    }
    // midpoint-matched curvature; strictly positive on every piece of a
    // strictly concave power, so no piece ever reads as affine
    for (int i = 0; i < n; ++i) {
        const double a = knots[i].t, b = knots[i + 1].t;
        const double mid = std::pow(0.5 * (a + b), e);
        const double chord = 0.5 * (knots[i].value + knots[i + 1].value);
        curv.push_back((mid - chord) / (0.25 * (b - a) * (b - a)));
    }
    return from_knots(std::move(knots), std::move(curv));
}

// ===========================================================================
// conjugate and decomposition
// ===========================================================================

DistortionFn conjugate(const DistortionFn& h) {
    const double h1 = h.h1();
    std::vector<DistortionKnot> knots;
    std::vector<double> curv;
    const auto& ks = h.knots();
    for (std::size_t i = ks.size(); i-- > 0;) {
        // ĥ(t) = h1 - h(1-t): one-sided limits swap sides
        knots.push_back({1.0 - ks[i].t, h1 - ks[i].right, h1 - ks[i].value,
                         h1 - ks[i].left});
    }
    for (std::size_t i = h.curvature().size(); i-- > 0;) curv.push_back(-h.curvature()[i]);
    return DistortionFn::from_knots(std::move(knots), std::move(curv));
}

DistortionParts decompose(const DistortionFn& h) {
    const auto& ks = h.knots();
    std::vector<DistortionKnot> kl, kr, kc;
    double cum_l = 0.0, cum_r = 0.0;
    for (const auto& k : ks) {
        const double wl = k.value - k.left;
        const double wr = k.right - k.value;
        kl.push_back({k.t, cum_l, cum_l + wl, cum_l + wl});
        cum_l += wl;
        kr.push_back({k.t, cum_r, cum_r, cum_r + wr});
        cum_r += wr;
        const double vc = k.value - kl.back().value - kr.back().value;
        kc.push_back({k.t, vc, vc, vc});
    }
    kl.front().left = kl.front().value;  // structural: no limit below 0
    kr.back().right = kr.back().value;
    return {DistortionFn::from_knots(std::move(kc), h.curvature()),
            DistortionFn::from_knots(std::move(kl)),
            DistortionFn::from_knots(std::move(kr))};
}

// ===========================================================================
// Choquet integral
// ===========================================================================

double choquet(const DistortionFn& h, const Plrv& x) {
    const MonoFn q = quantile_fn(x);
    double acc = 0.0;

    // continuous part: ∫ Q(1-t) h'(t) dt segment by segment, split where
    // the reflected quantile has knots
    for (const auto& s : h.segments()) {
        std::vector<double> cuts{s.a, s.b};
        for (const auto& qp : q.pieces()) {
            for (double p : {qp.t0, qp.t1}) {
                const double t = 1.0 - p;
                if (t > s.a + kEps && t < s.b - kEps) cuts.push_back(t);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double u = cuts[i];
            const double v = cuts[i + 1];
            if (v - u <= kEps) continue;
            // the quantile piece covering (1-v, 1-u)
            const double pm = 1.0 - 0.5 * (u + v);
            const auto& ps = q.pieces();
            auto it = std::upper_bound(
                ps.begin(), ps.end(), pm,
                [](double w, const LinearPiece& pc) { return w < pc.t1; });
            if (it == ps.end()) --it;
            const double fu = it->at(1.0 - u);
            const double fv = it->at(1.0 - v);
            acc += integral_product_linear(u, v, fu, fv, s.deriv(u), s.deriv(v));
        }
    }

    // jump part: left jumps read the right quantile, right jumps the left
    for (const auto& k : h.knots()) {
        const double wl = k.value - k.left;
        const double wr = k.right - k.value;
        if (std::fabs(wl) > 0.0) acc += wl * q.right_limit(1.0 - k.t);
        if (std::fabs(wr) > 0.0) acc += wr * q(1.0 - k.t);
    }
    return acc;
}

// ===========================================================================
// K-additivity
// ===========================================================================

namespace {

// Affinity report of h on the closed interval [lo,hi] with the one-sided
// closure rules: a right jump at lo or a left jump at hi breaks it, as does
// any jump, curvature, or slope change strictly inside.
bool affine_on_closure(const DistortionFn& h, double lo, double hi) {
    const auto& ks = h.knots();
    for (const auto& k : ks) {
        const double wl = k.value - k.left;
        const double wr = k.right - k.value;
        if (k.t > lo + kEps && k.t < hi - kEps) {
            if (std::fabs(wl) > kEps || std::fabs(wr) > kEps) return false;
        }
        if (approx_eq(k.t, lo) && std::fabs(wr) > kEps) return false;
        if (approx_eq(k.t, hi) && std::fabs(wl) > kEps) return false;
    }
    bool have_slope = false;
    double slope = 0.0;
    for (const auto& s : h.segments()) {
        const double a = std::max(s.a, lo);
        const double b = std::min(s.b, hi);
        if (b - a <= kEps) continue;
        if (std::fabs(s.c) > kEps) return false;
        if (!have_slope) {
            slope = s.slope();
            have_slope = true;
        } else if (std::fabs(s.slope() - slope) > kEps * std::max(1.0, std::fabs(slope))) {
            return false;
        }
    }
    return true;
}

}  // namespace

bool is_k_additive(const DistortionFn& h, const ClosedSet& k) {
    for (const auto& gap : k.gaps()) {
        if (!affine_on_closure(h, 1.0 - gap.b, 1.0 - gap.a)) return false;
    }
    return true;
}

AdditivityCore additivity_core(const DistortionFn& h) {
    const DistortionFn hh = conjugate(h);
    AdditivityCore out;

    // flags: one per jump of the conjugate
    for (const auto& k : hh.knots()) {
        if (std::fabs(k.value - k.left) > kEps)
            out.flags.push_back({k.t, true});  // need K ⊇ [p-δ, p]
        if (std::fabs(k.right - k.value) > kEps)
            out.flags.push_back({k.t, false});  // need K ⊇ [p, p+δ]
    }

    // maximal affine runs of the conjugate; the core is their complement
    const auto segs = hh.segments();
    std::vector<Interval> runs;
    std::size_t i = 0;
    while (i < segs.size()) {
        if (std::fabs(segs[i].c) > kEps) {
            ++i;
            continue;
        }
        double u = segs[i].a;
        double v = segs[i].b;
        const double slope = segs[i].slope();
        std::size_t j = i;
        while (j + 1 < segs.size()) {
            const auto& knot = hh.knots()[j + 1];
            const bool jumpy = std::fabs(knot.value - knot.left) > kEps ||
                               std::fabs(knot.right - knot.value) > kEps;
            const auto& nxt = segs[j + 1];
            if (jumpy || std::fabs(nxt.c) > kEps ||
                std::fabs(nxt.slope() - slope) > kEps * std::max(1.0, std::fabs(slope)))
                break;
            v = nxt.b;
            ++j;
        }
        runs.push_back({u, v});
        i = j + 1;
    }
    std::vector<Interval> core;
    double cursor = 0.0;
    for (const auto& r : runs) {
        if (r.a > cursor + kEps) core.push_back({cursor, r.a});
        else if (cursor > 0.0 || r.a > kEps) core.push_back({r.a, r.a});
        cursor = r.b;
    }
    if (cursor < 1.0 - kEps) core.push_back({cursor, 1.0});
    out.core = ClosedSet::from_intervals(std::move(core)).normalized_mod01();
    return out;
}

bool is_concave(const DistortionFn& h) {
    const auto& ks = h.knots();
    const auto segs = h.segments();
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const double wl = ks[i].value - ks[i].left;
        const double wr = ks[i].right - ks[i].value;
        if (i == 0) {
            if (wr < -kEps) return false;  // only an upward jump at 0
        } else if (i + 1 == ks.size()) {
            if (wl > kEps) return false;  // only a downward drop at 1
        } else {
            if (std::fabs(wl) > kEps || std::fabs(wr) > kEps) return false;
        }
    }
    for (const auto& s : segs) {
        if (s.c < -kEps) return false;  // segment curvature -2c must be <= 0
    }
    for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
        const double left_deriv = segs[i].deriv(segs[i].b);
        const double right_deriv = segs[i + 1].deriv(segs[i + 1].a);
        if (right_deriv > left_deriv + kEps * std::max(1.0, std::fabs(left_deriv)))
            return false;
    }
    return true;
}

}  // namespace riskm
