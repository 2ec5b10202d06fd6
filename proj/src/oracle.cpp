#include "riskm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "riskm/common.hpp"

namespace riskm {

namespace {

// P(X > v), scanned piece by piece.  Flat pieces contribute their full width
// or nothing; sloped pieces contribute the sub-interval where the ramp sits
// above v.  Boundaries carry no mass on ramps, so strictness only matters at
// flats, where we take the strict inequality.
double survival(const Plrv& x, double v) {
    double total = 0.0;
    for (const auto& p : x.pieces()) {
        double width = p.t1 - p.t0;
        if (p.v0 == p.v1) {
            if (p.v0 > v) total += width;
            continue;
        }
        double lo = std::min(p.v0, p.v1);
        double hi = std::max(p.v0, p.v1);
        double frac = (hi - v) / (hi - lo);
        frac = std::clamp(frac, 0.0, 1.0);
        total += width * frac;
    }
    return total;
}

double piecewise_min(const Plrv& x) {
    double m = x.pieces().front().v0;
    for (const auto& p : x.pieces()) m = std::min({m, p.v0, p.v1});
    return m;
}

double piecewise_max(const Plrv& x) {
    double m = x.pieces().front().v0;
    for (const auto& p : x.pieces()) m = std::max({m, p.v0, p.v1});
    return m;
}

// Trapezoid rule for g over [a, b] with n steps.
template <typename F>
double trapezoid(F&& g, double a, double b, int n) {
    double step = (b - a) / n;
    double acc = 0.5 * (g(a) + g(b));
    for (int i = 1; i < n; ++i) acc += g(a + i * step);
    return acc * step;
}

}  // namespace

DiscreteRv make_discrete(std::vector<std::pair<double, double>> atoms) {
    require(!atoms.empty(), "discrete rv: needs at least one atom");
    double total = 0.0;
    for (const auto& [v, p] : atoms) {
        require(std::isfinite(v), "discrete rv: values must be finite");
        require(p > 0.0, "discrete rv: probabilities must be positive");
        total += p;
    }
    require(std::abs(total - 1.0) <= 1e-7, "discrete rv: probabilities must sum to one");
    return DiscreteRv{std::move(atoms)};
}

double choquet_numeric(const DistortionFn& h, const Plrv& x, int grid_n) {
    require(grid_n >= 1000, "choquet_numeric: grid too coarse");
    double vmin = std::min(piecewise_min(x), 0.0);
    double vmax = std::max(piecewise_max(x), 0.0);
    double h1 = h.h1();
    auto distorted = [&](double v) { return h(survival(x, v)); };
    double acc = 0.0;
    if (vmin < -kEps) acc += trapezoid([&](double v) { return distorted(v) - h1; }, vmin, 0.0, grid_n);
    if (vmax > kEps) acc += trapezoid(distorted, 0.0, vmax, grid_n);
    return acc;
}

double choquet_discrete(const DistortionFn& h, const DiscreteRv& x) {
    // Merge ties, sort values decreasing, and accumulate the telescoping sum
    // v_(1) h(T_1) + Σ_{k≥2} v_(k) (h(T_k) - h(T_{k-1})) with T_k the
    // probability mass sitting on the k largest values.
    std::vector<std::pair<double, double>> atoms = x.atoms;
    std::sort(atoms.begin(), atoms.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<std::pair<double, double>> merged;
    for (const auto& a : atoms) {
        if (!merged.empty() && approx_eq(merged.back().first, a.first))
            merged.back().second += a.second;
        else
            merged.push_back(a);
    }
    double acc = 0.0;
    double t_prev = 0.0;
    double h_prev = 0.0;
    double mass = 0.0;
    for (std::size_t k = 0; k < merged.size(); ++k) {
        mass += merged[k].second;
        double t_k = (k + 1 == merged.size()) ? 1.0 : mass;
        double h_k = h(t_k);
        acc += merged[k].first * (h_k - h_prev);
        t_prev = t_k;
        h_prev = h_k;
    }
    (void)t_prev;
    return acc;
}

bool concentration_grid(const std::vector<Plrv>& xs, const ClosedSet& k, int grid_n) {
    require(!xs.empty(), "concentration_grid: needs at least one component");
    require(grid_n >= 64, "concentration_grid: grid too coarse");

    // Sample every component at M cell midpoints, then order the samples the
    // way the canonical tail is built: by the sum, breaking ties toward the
    // right end of [0, 1].
    constexpr int M = 8192;
    const std::size_t d = xs.size();
    std::vector<std::vector<double>> vals(d, std::vector<double>(M));
    std::vector<double> sum(M, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (int j = 0; j < M; ++j) {
            double w = (j + 0.5) / M;
            vals[i][j] = xs[i](w);
            sum[j] += vals[i][j];
        }
    }
    std::vector<int> order(M);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (sum[a] != sum[b]) return sum[a] < sum[b];
        return a < b;  // ties resolve toward the right end of [0,1]
    });

    // prefix_max[i][r]: largest sample of component i among the r lowest-sum
    // cells; suffix_min[i][r]: smallest sample among cells r..M-1.  A level p
    // passes when every component's upper tail dominates its complement.
    std::vector<std::vector<double>> prefix_max(d, std::vector<double>(M));
    std::vector<std::vector<double>> suffix_min(d, std::vector<double>(M));
    for (std::size_t i = 0; i < d; ++i) {
        double run = -std::numeric_limits<double>::infinity();
        for (int r = 0; r < M; ++r) {
            run = std::max(run, vals[i][order[r]]);
            prefix_max[i][r] = run;
        }
        run = std::numeric_limits<double>::infinity();
        for (int r = M - 1; r >= 0; --r) {
            run = std::min(run, vals[i][order[r]]);
            suffix_min[i][r] = run;
        }
    }

    // Discretization slack: cell midpoints sit up to half a cell away from
    // the true tail boundary, so dominance is only checked up to this tol,
    // and the cut index may shift by one cell in either direction (the exact
    // boundary can fall anywhere inside a cell).  A genuine concentration
    // therefore always passes; only violations wider than a couple of cells
    // are reported, which keeps this a valid necessary-condition screen.
    constexpr double tol = 1e-4;
    auto cut_ok = [&](int cut) {
        if (cut <= 0 || cut >= M) return true;
        for (std::size_t i = 0; i < d; ++i)
            if (suffix_min[i][cut] < prefix_max[i][cut - 1] - tol) return false;
        return true;
    };
    auto level_ok = [&](double p) {
        long m = std::lround((1.0 - p) * M);  // tail size in cells
        int cut = M - static_cast<int>(std::clamp<long>(m, 0, M));
        return cut_ok(cut - 1) || cut_ok(cut) || cut_ok(cut + 1);
    };

    for (const auto& iv : k.intervals()) {
        if (iv.b - iv.a <= kEps) {
            if (!level_ok(iv.a)) return false;
            continue;
        }
        for (int g = 0; g < grid_n; ++g) {
            double p = iv.a + (iv.b - iv.a) * g / (grid_n - 1);
            if (!level_ok(p)) return false;
        }
    }
    return true;
}

}  // namespace riskm
