#include "riskm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "riskm/dependence.hpp"

namespace riskm {

namespace {

// Exact integral of f·g over the unit interval for two normalized monotone
// functions: both are linear between the merged knot positions, and the
// countably many jump points carry no mass.
double product_integral(const MonoFn& f, const MonoFn& g) {
    std::vector<double> cuts;
    cuts.reserve(f.pieces().size() + g.pieces().size() + 1);
    for (const auto& p : f.pieces()) cuts.push_back(p.t0);
    for (const auto& p : g.pieces()) cuts.push_back(p.t0);
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    double a = cuts.front();
    for (double b : cuts) {
        if (b - a <= kEps) continue;
        total += integral_product_linear(a, b, f.right_limit(a), f.left_limit(b),
                                         g.right_limit(a), g.left_limit(b));
        a = b;
    }
    return total;
}

}  // namespace

Spectrum Spectrum::from_monofn(const MonoFn& g) {
    require(g.unit_domain(), "spectrum: domain must be [0,1]");
    require(g.min_value() >= -kEps, "spectrum: density must be nonnegative");
    require(approx_eq(integral(g), 1.0),
            "spectrum: density must integrate to 1");
    return Spectrum(g);
}

Spectrum Spectrum::uniform() {
    return Spectrum(MonoFn::constant(0.0, 1.0, 1.0));
}

Spectrum Spectrum::es(double p) {
    require(p >= 0.0 && p < 1.0 - kEps, "spectrum: es level must be in [0,1)");
    if (p <= kEps) return uniform();
    const double w = 1.0 / (1.0 - p);
    return Spectrum(MonoFn::from_pieces({{0.0, p, 0.0, 0.0}, {p, 1.0, w, w}}));
}

double ESMixture::evaluate(const Plrv& x) const {
    double total = lambda0 * mean(x);
    for (const auto& term : terms) total += term.lambda * es(x, term.alpha);
    return total;
}

double rho(const Spectrum& g, const Plrv& x) {
    return product_integral(g.fn(), quantile_fn(x));
}

bool is_additive_on(const Spectrum& g, const std::vector<Plrv>& xs) {
    return is_g_comonotonic(xs, g.fn());
}

std::optional<ESMixture> es_mixture(const Spectrum& g) {
    const auto& ps = g.fn().pieces();
    for (const auto& p : ps) {
        if (!approx_eq(p.v0, p.v1)) return std::nullopt;
    }
    ESMixture m;
    m.lambda0 = std::max(ps.front().v0, 0.0);
    double prev = ps.front().v0;
    for (std::size_t i = 1; i < ps.size(); ++i) {
        // The normal form merges flat neighbours at equal levels, so each
        // remaining boundary is a genuine upward step inside (0,1).
        const double alpha = ps[i].t0;
        m.terms.push_back({alpha, (ps[i].v0 - prev) * (1.0 - alpha)});
        prev = ps[i].v0;
    }
    return m;
}

std::optional<Spectrum> spectrum_of_distortion(const DistortionFn& h) {
    for (const auto& k : h.knots()) {
        if (!approx_eq(k.left, k.value) || !approx_eq(k.value, k.right)) {
            return std::nullopt;  // any jump puts mass on a single level
        }
    }
    if (!approx_eq(h.h1(), 1.0)) return std::nullopt;
    std::vector<LinearPiece> pieces;
    double prev_slope = 0.0;
    for (const auto& s : conjugate(h).segments()) {
        if (s.c > kEps) return std::nullopt;  // strictly concave stretch
        double va = s.deriv(s.a);
        double vb = s.deriv(s.b);
        if (std::fabs(s.c) <= kEps) va = vb = s.slope();
        if (va < -kEps) return std::nullopt;        // decreasing stretch of h
        if (va < prev_slope - kEps) return std::nullopt;  // concave kink
        va = std::max(va, prev_slope);
        vb = std::max(vb, va);
        pieces.push_back({s.a, s.b, va, vb});
        prev_slope = vb;
    }
    return Spectrum::from_monofn(MonoFn::from_pieces(std::move(pieces)));
}

DistortionFn distortion_of_spectrum(const Spectrum& g) {
    // Integrate the density into the conjugate weight: each linear piece of g
    // becomes one quadratic segment whose derivative reproduces the piece
    // exactly (curvature -slope/2 tilts the chord's constant derivative by
    // ±(v1-v0)/2 at the two ends).
    std::vector<DistortionKnot> knots;
    std::vector<double> curvature;
    double acc = 0.0;
    knots.push_back({g.fn().lo(), 0.0, 0.0, 0.0});
    for (const auto& p : g.fn().pieces()) {
        acc += integral_linear(p.t0, p.t1, p.v0, p.v1);
        curvature.push_back(-p.slope() / 2.0);
        knots.push_back({p.t1, acc, acc, acc});
    }
    return conjugate(DistortionFn::from_knots(std::move(knots),
                                              std::move(curvature)));
}

}  // namespace riskm
