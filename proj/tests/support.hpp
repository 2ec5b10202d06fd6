#ifndef RISKM_TESTS_SUPPORT_HPP
#define RISKM_TESTS_SUPPORT_HPP

// Shared helpers for the test binaries: seeded generators for random
// variables and index sets, plus slow brute-force oracles that never touch
// the library's distribution machinery.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "riskm/closedset.hpp"
#include "riskm/distortion.hpp"
#include "riskm/randvar.hpp"
#include "riskm/spectral.hpp"

namespace riskm::testsupport {

// --- brute-force distribution oracle ---------------------------------------

// P(x <= v), computed piece by piece from first principles.
inline double cdf_scan(const Plrv& x, double v) {
    double m = 0.0;
    for (const auto& p : x.pieces()) {
        if (std::fabs(p.v1 - p.v0) <= 1e-15) {
            if (p.v0 <= v) m += p.width();
            continue;
        }
        // fraction of [t0,t1) where the line lies at or below v
        const double f = (v - p.v0) / (p.v1 - p.v0);
        double frac;
        if (p.v1 > p.v0)
            frac = std::clamp(f, 0.0, 1.0);
        else
            frac = 1.0 - std::clamp(f, 0.0, 1.0);
        m += frac * p.width();
    }
    return m;
}

// Left quantile inf{v : P(x <= v) >= p} by bisection on the value axis.
inline double cdf_scan_quantile(const Plrv& x, double p) {
    double lo = ess_inf(x) - 1.0;
    double hi = ess_sup(x) + 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cdf_scan(x, mid) >= p)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

// Right quantile sup{v : P(x < v) <= p} = inf{v : P(x <= v) > p}.
inline double cdf_scan_quantile_right(const Plrv& x, double p) {
    double lo = ess_inf(x) - 1.0;
    double hi = ess_sup(x) + 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cdf_scan(x, mid) > p)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

// E[(x - q)+], exact per piece.
inline double excess_mean(const Plrv& x, double q) {
    double acc = 0.0;
    for (const auto& p : x.pieces()) {
        const double a = p.v0 - q;
        const double b = p.v1 - q;
        if (a <= 0.0 && b <= 0.0) continue;
        if (a >= 0.0 && b >= 0.0) {
            acc += 0.5 * (a + b) * p.width();
        } else {
            // one sign change: triangle above the crossing
            const double pos = std::max(a, b);
            acc += 0.5 * pos * (pos / (pos - std::min(a, b))) * p.width();
        }
    }
    return acc;
}

// Tail expectation via the exact identity
//   (1-p) ES_p = q (1-p) + E[(x - q)+]  with  q the left quantile at p.
inline double cdf_scan_es(const Plrv& x, double p) {
    const double q = cdf_scan_quantile(x, p);
    return q + excess_mean(x, q) / (1.0 - p);
}

// --- seeded generators ------------------------------------------------------

inline double uniform(std::mt19937_64& rng, double a, double b) {
    return a + (b - a) * std::generate_canonical<double, 53>(rng);
}

inline int uniform_int(std::mt19937_64& rng, int a, int b) {
    return a + static_cast<int>(rng() % static_cast<unsigned long long>(b - a + 1));
}

// Random piecewise-linear variable: a mix of flat stretches, ramps in both
// directions, and value jumps between pieces.
inline Plrv gen_plrv(std::mt19937_64& rng, int max_pieces = 6, double vlo = -2.0,
                     double vhi = 3.0) {
    const int n = uniform_int(rng, 1, max_pieces);
    std::vector<double> raw{0.0, 1.0};
    for (int i = 1; i < n; ++i) raw.push_back(uniform(rng, 0.02, 0.98));
    std::sort(raw.begin(), raw.end());
    std::vector<double> cuts;
    for (double c : raw)
        if (cuts.empty() || c - cuts.back() >= 1e-4) cuts.push_back(c);
    cuts.back() = 1.0;
    std::vector<LinearPiece> ps;
    double carry = uniform(rng, vlo, vhi);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const int kind = uniform_int(rng, 0, 3);
        double v0 = carry, v1 = carry;
        if (kind == 0) {  // flat, possibly after a jump
            v0 = v1 = uniform_int(rng, 0, 1) ? carry : uniform(rng, vlo, vhi);
        } else {  // ramp; kind==3 restarts from a fresh level (a jump)
            v0 = (kind == 3) ? uniform(rng, vlo, vhi) : carry;
            v1 = uniform(rng, vlo, vhi);
        }
        ps.push_back({cuts[i], cuts[i + 1], v0, v1});
        carry = v1;
    }
    if (ps.empty()) ps.push_back({0.0, 1.0, carry, carry});
    ps.front().t0 = 0.0;
    ps.back().t1 = 1.0;
    return Plrv::from_pieces(std::move(ps));
}

// Random increasing piecewise-linear variable (a.s. comonotone with itself).
inline Plrv gen_increasing_plrv(std::mt19937_64& rng, int max_pieces = 5, double vlo = -2.0,
                                double vhi = 3.0) {
    const int n = uniform_int(rng, 1, max_pieces);
    std::vector<double> raw{0.0, 1.0};
    for (int i = 1; i < n; ++i) raw.push_back(uniform(rng, 0.02, 0.98));
    std::sort(raw.begin(), raw.end());
    std::vector<double> cuts;
    for (double c : raw)
        if (cuts.empty() || c - cuts.back() >= 1e-4) cuts.push_back(c);
    cuts.back() = 1.0;
    std::vector<double> vals;
    for (std::size_t i = 0; i < cuts.size() + 4; ++i) vals.push_back(uniform(rng, vlo, vhi));
    std::sort(vals.begin(), vals.end());
    std::vector<LinearPiece> ps;
    std::size_t vi = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const int kind = uniform_int(rng, 0, 2);
        double v0 = vals[vi];
        double v1 = (kind == 0) ? v0 : vals[std::min(vi + 1, vals.size() - 1)];
        if (kind == 2) vi = std::min(vi + 2, vals.size() - 1);  // jump past a level
        else if (kind == 1) ++vi;
        ps.push_back({cuts[i], cuts[i + 1], v0, vals[vi] >= v1 ? v1 : vals[vi]});
    }
    if (ps.empty()) ps.push_back({0.0, 1.0, vals[0], vals[1]});
    ps.front().t0 = 0.0;
    ps.back().t1 = 1.0;
    // enforce global monotonicity defensively
    double run = ps.front().v0;
    for (auto& p : ps) {
        p.v0 = std::max(p.v0, run);
        p.v1 = std::max(p.v1, p.v0);
        run = p.v1;
    }
    return Plrv::from_pieces(std::move(ps));
}

// --- closed index sets -------------------------------------------------------

// Random finite union of well-separated closed intervals (some degenerate).
inline ClosedSet gen_closedset(std::mt19937_64& rng, int max_intervals = 4) {
    const int m = uniform_int(rng, 1, max_intervals);
    std::vector<double> pts;
    for (int i = 0; i < 2 * m; ++i) pts.push_back(uniform(rng, 0.0, 1.0));
    std::sort(pts.begin(), pts.end());
    std::vector<double> sep;
    for (double p : pts)
        if (sep.empty() || p - sep.back() >= 5e-3) sep.push_back(p);
    if (sep.size() % 2 == 1) sep.push_back(std::min(1.0, sep.back() + 5e-3));
    std::vector<Interval> ivs;
    for (std::size_t i = 0; i + 1 < sep.size(); i += 2) {
        if (uniform_int(rng, 0, 3) == 0)
            ivs.push_back({sep[i], sep[i]});  // singleton
        else
            ivs.push_back({sep[i], sep[i + 1]});
    }
    return ClosedSet::from_intervals(std::move(ivs));
}

// Random increasing index function on [0,1] (class-G member).
inline MonoFn gen_monofn(std::mt19937_64& rng, int max_pieces = 5) {
    return MonoFn::from_pieces(gen_increasing_plrv(rng, max_pieces, 0.0, 2.0).pieces());
}

// Random step variable: flat pieces only, so the distribution is a finite
// list of atoms. Levels repeat now and then to exercise tie handling.
inline Plrv gen_step_plrv(std::mt19937_64& rng, int max_pieces = 6, double vlo = -2.0,
                          double vhi = 3.0) {
    const int n = uniform_int(rng, 1, max_pieces);
    std::vector<double> raw{0.0, 1.0};
    for (int i = 1; i < n; ++i) raw.push_back(uniform(rng, 0.02, 0.98));
    std::sort(raw.begin(), raw.end());
    std::vector<double> cuts;
    for (double c : raw)
        if (cuts.empty() || c - cuts.back() >= 1e-4) cuts.push_back(c);
    cuts.back() = 1.0;
    std::vector<LinearPiece> ps;
    std::vector<double> used;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double v;
        if (!used.empty() && uniform_int(rng, 0, 3) == 0)
            v = used[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(used.size()) - 1))];
        else
            v = uniform(rng, vlo, vhi);
        used.push_back(v);
        ps.push_back({cuts[i], cuts[i + 1], v, v});
    }
    return Plrv::from_pieces(std::move(ps));
}

// Random strictly sloped variable (atomless distribution): every piece is a
// genuine ramp; value jumps between pieces are allowed.
inline Plrv gen_atomless_plrv(std::mt19937_64& rng, int max_pieces = 5, double vlo = -2.0,
                              double vhi = 3.0) {
    const int n = uniform_int(rng, 1, max_pieces);
    std::vector<double> raw{0.0, 1.0};
    for (int i = 1; i < n; ++i) raw.push_back(uniform(rng, 0.05, 0.95));
    std::sort(raw.begin(), raw.end());
    std::vector<double> cuts;
    for (double c : raw)
        if (cuts.empty() || c - cuts.back() >= 0.02) cuts.push_back(c);
    cuts.back() = 1.0;
    std::vector<LinearPiece> ps;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double v0 = uniform(rng, vlo, vhi);
        double v1 = uniform(rng, vlo, vhi);
        while (std::fabs(v1 - v0) < 0.05) v1 = uniform(rng, vlo, vhi);
        ps.push_back({cuts[i], cuts[i + 1], v0, v1});
    }
    return Plrv::from_pieces(std::move(ps));
}

// --- distortion weights -------------------------------------------------------

// Well-separated knot grid 0 = t_0 < ... < t_m = 1.
inline std::vector<double> gen_knot_grid(std::mt19937_64& rng, int max_interior) {
    const int n = uniform_int(rng, 0, max_interior);
    std::vector<double> raw{0.0, 1.0};
    for (int i = 0; i < n; ++i) raw.push_back(uniform(rng, 0.05, 0.95));
    std::sort(raw.begin(), raw.end());
    std::vector<double> cuts;
    for (double c : raw)
        if (cuts.empty() || c - cuts.back() >= 0.03) cuts.push_back(c);
    cuts.back() = 1.0;
    return cuts;
}

// Random bounded-variation weight: quadratic-arc skeleton with optional
// one-sided jumps anywhere they are structurally possible. Not monotone.
inline DistortionFn gen_distortion(std::mt19937_64& rng, bool with_jumps = true,
                                   bool with_curvature = true) {
    const auto cuts = gen_knot_grid(rng, 4);
    std::vector<DistortionKnot> knots;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        const double value = (i == 0) ? 0.0 : uniform(rng, -1.5, 1.5);
        double left = value, right = value;
        if (with_jumps && i > 0 && uniform_int(rng, 0, 2) == 0)
            left = value - uniform(rng, -0.8, 0.8);
        if (with_jumps && i + 1 < cuts.size() && uniform_int(rng, 0, 2) == 0)
            right = value + uniform(rng, -0.8, 0.8);
        knots.push_back({cuts[i], left, value, right});
    }
    std::vector<double> curv(cuts.size() - 1, 0.0);
    if (with_curvature)
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            if (uniform_int(rng, 0, 1) == 0) {
                const double w = cuts[i + 1] - cuts[i];
                // hump height at the midpoint stays below 1/2
                curv[i] = uniform(rng, -2.0, 2.0) / (w * w);
            }
    return DistortionFn::from_knots(std::move(knots), std::move(curv));
}

// Random increasing weight normalized to h(1) = 1, jumps upward only,
// curvature kept below the slope so the derivative never changes sign.
inline DistortionFn gen_increasing_distortion(std::mt19937_64& rng, bool with_jumps = true) {
    const auto cuts = gen_knot_grid(rng, 4);
    std::vector<DistortionKnot> knots;
    std::vector<double> curv;
    double v = 0.0;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        const double left = v;
        const double value =
            (i > 0 && with_jumps && uniform_int(rng, 0, 2) == 0) ? left + uniform(rng, 0.0, 0.4) : left;
        const double right = (i + 1 < cuts.size() && with_jumps && uniform_int(rng, 0, 2) == 0)
                                 ? value + uniform(rng, 0.0, 0.4)
                                 : value;
        knots.push_back({cuts[i], left, value, right});
        v = right;
        if (i + 1 < cuts.size()) {
            const double w = cuts[i + 1] - cuts[i];
            const double rise = uniform(rng, 0.05, 0.6);
            curv.push_back(uniform_int(rng, 0, 1) ? uniform(rng, -0.9, 0.9) * (rise / w) / w : 0.0);
            v += rise;
        }
    }
    const double s = 1.0 / knots.back().value;
    for (auto& k : knots) {
        k.left *= s;
        k.value *= s;
        k.right *= s;
    }
    for (auto& c : curv) c *= s;
    return DistortionFn::from_knots(std::move(knots), std::move(curv));
}

// Random continuous concave weight: piecewise-linear with strictly
// decreasing slopes (may decrease below zero, concavity needs no sign).
inline DistortionFn gen_concave_distortion(std::mt19937_64& rng) {
    const auto cuts = gen_knot_grid(rng, 4);
    double slope = uniform(rng, 1.0, 3.0);
    double v = 0.0;
    std::vector<DistortionKnot> knots{{0.0, 0.0, 0.0, 0.0}};
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        v += slope * (cuts[i] - cuts[i - 1]);
        knots.push_back({cuts[i], v, v, v});
        slope -= uniform(rng, 0.1, 1.0);
    }
    return DistortionFn::from_knots(std::move(knots));
}

// --- spectra -------------------------------------------------------------------

// Random step spectrum: increasing flat levels on a well-separated grid,
// scaled to unit integral. Sometimes starts at a positive base level (which
// decomposes into a mean component).
inline Spectrum gen_step_spectrum(std::mt19937_64& rng, int max_interior = 4) {
    const auto cuts = gen_knot_grid(rng, max_interior);
    std::vector<double> levels;
    double v = (uniform_int(rng, 0, 2) == 0) ? uniform(rng, 0.1, 0.6) : 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        levels.push_back(v);
        v += uniform(rng, 0.1, 2.0);
    }
    if (levels.back() < 0.1) levels.back() += uniform(rng, 0.5, 1.5);
    double total = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i)
        total += levels[i] * (cuts[i + 1] - cuts[i]);
    std::vector<LinearPiece> ps;
    for (std::size_t i = 0; i < levels.size(); ++i)
        ps.push_back({cuts[i], cuts[i + 1], levels[i] / total, levels[i] / total});
    return Spectrum::from_monofn(MonoFn::from_pieces(std::move(ps)));
}

// Random spectrum with sloped stretches: an increasing nonnegative skeleton,
// scaled to unit integral.
inline Spectrum gen_spectrum(std::mt19937_64& rng, int max_pieces = 5) {
    auto ps = gen_increasing_plrv(rng, max_pieces, 0.0, 2.0).pieces();
    double total = 0.0;
    for (const auto& p : ps) total += integral_linear(p.t0, p.t1, p.v0, p.v1);
    if (total < 0.05) {
        for (auto& p : ps) {
            p.v0 += 0.5;
            p.v1 += 0.5;
        }
        total += 0.5;
    }
    for (auto& p : ps) {
        p.v0 /= total;
        p.v1 /= total;
    }
    return Spectrum::from_monofn(MonoFn::from_pieces(std::move(ps)));
}

}  // namespace riskm::testsupport

#endif  // RISKM_TESTS_SUPPORT_HPP
