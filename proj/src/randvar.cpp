#include "riskm/randvar.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>

namespace riskm {

// ===========================================================================
// Event
// ===========================================================================

Event Event::from_intervals(std::vector<Interval> intervals) {
    for (auto& iv : intervals) {
        require(std::isfinite(iv.a) && std::isfinite(iv.b), "Event: non-finite endpoint");
        require(iv.a <= iv.b + kEps, "Event: interval with a > b");
        iv.a = std::clamp(iv.a, 0.0, 1.0);
        iv.b = std::clamp(std::max(iv.b, iv.a), 0.0, 1.0);
    }
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& x, const Interval& y) { return x.a < y.a; });
    Event e;
    for (const auto& iv : intervals) {
        if (iv.width() <= kEps) continue;  // null sets are dropped
        if (!e.intervals_.empty() && iv.a <= e.intervals_.back().b + kEps) {
            e.intervals_.back().b = std::max(e.intervals_.back().b, iv.b);
        } else {
            e.intervals_.push_back(iv);
        }
    }
    return e;
}

double Event::measure() const {
    double m = 0.0;
    for (const auto& iv : intervals_) m += iv.width();
    return m;
}

Event Event::complement() const {
    std::vector<Interval> out;
    double cursor = 0.0;
    for (const auto& iv : intervals_) {
        if (iv.a > cursor) out.push_back({cursor, iv.a});
        cursor = std::max(cursor, iv.b);
    }
    if (cursor < 1.0) out.push_back({cursor, 1.0});
    return from_intervals(std::move(out));
}

Event Event::intersect(const Event& other) const {
    std::vector<Interval> out;
    for (const auto& a : intervals_) {
        for (const auto& b : other.intervals_) {
            const double lo = std::max(a.a, b.a);
            const double hi = std::min(a.b, b.b);
            if (hi > lo) out.push_back({lo, hi});
        }
    }
    return from_intervals(std::move(out));
}

Event Event::unite(const Event& other) const {
    std::vector<Interval> out = intervals_;
    out.insert(out.end(), other.intervals_.begin(), other.intervals_.end());
    return from_intervals(std::move(out));
}

bool Event::same_event(const Event& other, double tol) const {
    if (intervals_.size() != other.intervals_.size()) return false;
    for (std::size_t i = 0; i < intervals_.size(); ++i)
        if (!approx_eq(intervals_[i].a, other.intervals_[i].a, tol) ||
            !approx_eq(intervals_[i].b, other.intervals_[i].b, tol))
            return false;
    return true;
}

// ===========================================================================
// Plrv
// ===========================================================================

namespace {

bool pieces_collinear(const LinearPiece& a, const LinearPiece& b) {
    if (!approx_eq(a.v1, b.v0)) return false;
    return approx_eq(a.slope(), b.slope(), kEps * std::max(1.0, std::fabs(a.slope())));
}

}  // namespace

Plrv Plrv::from_pieces(std::vector<LinearPiece> pieces) {
    require(!pieces.empty(), "Plrv: empty piece list");
    std::vector<LinearPiece> kept;
    for (auto& p : pieces) {
        require(std::isfinite(p.t0) && std::isfinite(p.t1) && std::isfinite(p.v0) &&
                    std::isfinite(p.v1),
                "Plrv: non-finite piece");
        if (p.width() <= kEps) continue;
        kept.push_back(p);
    }
    require(!kept.empty(), "Plrv: all pieces degenerate");
    require(approx_eq(kept.front().t0, 0.0), "Plrv: pieces must start at 0");
    require(approx_eq(kept.back().t1, 1.0), "Plrv: pieces must end at 1");
    kept.front().t0 = 0.0;
    kept.back().t1 = 1.0;
    for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
        require(approx_eq(kept[i].t1, kept[i + 1].t0), "Plrv: pieces must tile [0,1]");
        kept[i + 1].t0 = kept[i].t1;
    }
    Plrv x;
    for (auto& p : kept) {
        if (!x.pieces_.empty() && pieces_collinear(x.pieces_.back(), p)) {
            x.pieces_.back().t1 = p.t1;
            x.pieces_.back().v1 = p.v1;
        } else {
            x.pieces_.push_back(p);
        }
    }
    return x;
}

Plrv Plrv::constant(double v) { return from_pieces({{0.0, 1.0, v, v}}); }

Plrv Plrv::uniform01() { return from_pieces({{0.0, 1.0, 0.0, 1.0}}); }

Plrv Plrv::from_monofn(const MonoFn& f) {
    require(f.unit_domain(), "Plrv::from_monofn: domain must be [0,1]");
    return from_pieces(f.pieces());
}

double Plrv::operator()(double omega) const {
    if (omega <= 0.0) return pieces_.front().at(0.0);
    if (omega >= 1.0) return pieces_.back().at(1.0);
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), omega,
                               [](double w, const LinearPiece& p) { return w < p.t1; });
    return it->at(omega);
}

bool Plrv::same_variable(const Plrv& other, double tol) const {
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

Plrv Plrv::operator+(const Plrv& other) const { return sum({*this, other}); }

Plrv Plrv::operator-() const { return scale_shift(-1.0, 0.0); }

Plrv Plrv::scale_shift(double a, double b) const {
    std::vector<LinearPiece> out = pieces_;
    for (auto& p : out) {
        p.v0 = a * p.v0 + b;
        p.v1 = a * p.v1 + b;
    }
    return from_pieces(std::move(out));
}

// ===========================================================================
// Distribution machinery: quantile function and rank transform
// ===========================================================================

namespace {

struct DistBuild {
    std::vector<double> levels;          // sorted distinct values
    std::vector<double> atom_mass;       // per level
    std::vector<double> stretch_mass;    // between consecutive levels
    std::vector<double> atom_start;      // p-offset of each atom block
    std::vector<double> stretch_start;   // p-offset of each stretch block
};

// Fragment of one x-piece covering exactly one level interval (sloped) or
// sitting at one level (flat), kept in omega order.
struct Fragment {
    double a = 0.0, b = 0.0;  // omega interval
    int level = 0;            // flat: level index; sloped: lower level index
    bool flat = false;
    bool ascending = true;  // sloped only: value rises with omega
};

int level_index(const std::vector<double>& levels, double v) {
    auto it = std::lower_bound(levels.begin(), levels.end(), v - kEps);
    return static_cast<int>(it - levels.begin());
}

void build_distribution(const Plrv& x, DistBuild& d, std::vector<Fragment>& frags) {
    std::vector<double> vals;
    for (const auto& p : x.pieces()) {
        vals.push_back(p.v0);
        vals.push_back(p.v1);
    }
    std::sort(vals.begin(), vals.end());
    for (double v : vals) {
        if (d.levels.empty() || v > d.levels.back() + kEps) d.levels.push_back(v);
    }
    const std::size_t m = d.levels.size();
    d.atom_mass.assign(m, 0.0);
    d.stretch_mass.assign(m > 0 ? m - 1 : 0, 0.0);

    for (const auto& p : x.pieces()) {
        const int i0 = level_index(d.levels, p.v0);
        const int i1 = level_index(d.levels, p.v1);
        if (i0 == i1) {
            d.atom_mass[i0] += p.width();
            frags.push_back({p.t0, p.t1, i0, true, true});
            continue;
        }
        const bool asc = i1 > i0;
        const int klo = std::min(i0, i1);
        const int khi = std::max(i0, i1);
        // omega at a given value along this piece
        auto omega_at = [&](double v) {
            return p.t0 + (v - p.v0) / (p.v1 - p.v0) * p.width();
        };
        // Split at every intermediate level crossing, emitting fragments in
        // omega order (descending pieces visit levels top-down).
        for (int j = 0; j < khi - klo; ++j) {
            const int k = asc ? klo + j : khi - 1 - j;
            double wa = omega_at(asc ? d.levels[k] : d.levels[k + 1]);
            double wb = omega_at(asc ? d.levels[k + 1] : d.levels[k]);
            if (j == 0) wa = p.t0;
            if (j == khi - klo - 1) wb = p.t1;
            d.stretch_mass[k] += wb - wa;
            frags.push_back({wa, wb, k, false, asc});
        }
    }

    // Cumulative p-offsets: at each level first the atom, then the stretch
    // climbing to the next level.
    d.atom_start.assign(m, 0.0);
    d.stretch_start.assign(m > 0 ? m - 1 : 0, 0.0);
    double pcur = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        d.atom_start[k] = pcur;
        pcur += d.atom_mass[k];
        if (k + 1 < m) {
            d.stretch_start[k] = pcur;
            pcur += d.stretch_mass[k];
        }
    }
    require(approx_eq(pcur, 1.0, 1e-7), "Plrv: total mass must be 1");
}

}  // namespace

MonoFn quantile_fn(const Plrv& x) {
    DistBuild d;
    std::vector<Fragment> frags;
    build_distribution(x, d, frags);
    std::vector<LinearPiece> q;
    double pcur = 0.0;
    for (std::size_t k = 0; k < d.levels.size(); ++k) {
        if (d.atom_mass[k] > 0.0) {
            q.push_back({pcur, pcur + d.atom_mass[k], d.levels[k], d.levels[k]});
            pcur += d.atom_mass[k];
        }
        if (k + 1 < d.levels.size() && d.stretch_mass[k] > 0.0) {
            q.push_back({pcur, pcur + d.stretch_mass[k], d.levels[k], d.levels[k + 1]});
            pcur += d.stretch_mass[k];
        }
    }
    if (!q.empty()) {
        q.front().t0 = 0.0;
        q.back().t1 = 1.0;
    }
    return MonoFn::from_pieces(std::move(q));
}

Plrv rank_transform(const Plrv& x) {
    DistBuild d;
    std::vector<Fragment> frags;
    build_distribution(x, d, frags);
    // Flat regions at the same level fill their atom block in ascending
    // omega order (stable ties), so the transform increases across flats.
    std::vector<double> atom_fill = d.atom_start;
    std::vector<LinearPiece> u;
    u.reserve(frags.size());
    for (const auto& f : frags) {
        if (f.flat) {
            const double w = f.b - f.a;
            u.push_back({f.a, f.b, atom_fill[f.level], atom_fill[f.level] + w});
            atom_fill[f.level] += w;
        } else {
            const double lo = d.stretch_start[f.level];
            const double hi = lo + d.stretch_mass[f.level];
            if (f.ascending)
                u.push_back({f.a, f.b, lo, hi});
            else
                u.push_back({f.a, f.b, hi, lo});
        }
    }
    return Plrv::from_pieces(std::move(u));
}

// ===========================================================================
// Quantile functionals
// ===========================================================================

double quantile_left(const Plrv& x, double p) {
    require(p > kEps && p <= 1.0 + kEps, "quantile_left: p must lie in (0,1]");
    return quantile_fn(x)(std::min(p, 1.0));
}

double quantile_right(const Plrv& x, double p) {
    require(p >= -kEps && p < 1.0 - kEps, "quantile_right: p must lie in [0,1)");
    return quantile_fn(x).right_limit(std::max(p, 0.0));
}

double var(const Plrv& x, double p) { return quantile_left(x, p); }

double var_plus(const Plrv& x, double p) { return quantile_right(x, p); }

double es(const Plrv& x, double p) {
    require(p > kEps && p <= 1.0 + kEps, "es: p must lie in (0,1]");
    if (p >= 1.0 - kEps) return ess_sup(x);
    const MonoFn q = quantile_fn(x);
    double acc = 0.0;
    for (const auto& pc : q.pieces()) {
        const double lo = std::max(pc.t0, p);
        const double hi = pc.t1;
        if (hi <= lo) continue;
        acc += integral_linear(lo, hi, pc.at(lo), pc.at(hi));
    }
    return acc / (1.0 - p);
}

double ess_sup(const Plrv& x) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& p : x.pieces()) m = std::max({m, p.v0, p.v1});
    return m;
}

double ess_inf(const Plrv& x) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : x.pieces()) m = std::min({m, p.v0, p.v1});
    return m;
}

double mean(const Plrv& x) {
    double acc = 0.0;
    for (const auto& p : x.pieces()) acc += integral_linear(p.t0, p.t1, p.v0, p.v1);
    return acc;
}

namespace {

// Essential extrema ignore overlaps of null width: rounding in event
// construction can misalign an endpoint with a piece cut by an ulp, and such
// slivers must not leak the neighbouring piece's values into the bound. If
// the whole event is below the null threshold, fall back to raw overlaps.
template <typename Fold>
double ess_extremum_on(const Plrv& x, const Event& e, double init, Fold fold) {
    for (double floor : {kEps, 0.0}) {
        double m = init;
        for (const auto& p : x.pieces()) {
            for (const auto& iv : e.intervals()) {
                const double lo = std::max(p.t0, iv.a);
                const double hi = std::min(p.t1, iv.b);
                if (hi - lo <= floor) continue;
                m = fold(m, p.at(lo), p.at(hi));
            }
        }
        if (m != init) return m;
    }
    return init;
}

}  // namespace

double ess_inf_on(const Plrv& x, const Event& e) {
    require(!e.is_empty(), "ess_inf_on: empty event");
    return ess_extremum_on(x, e, std::numeric_limits<double>::infinity(),
                           [](double m, double a, double b) {
                               return std::min({m, a, b});
                           });
}

double ess_sup_on(const Plrv& x, const Event& e) {
    require(!e.is_empty(), "ess_sup_on: empty event");
    return ess_extremum_on(x, e, -std::numeric_limits<double>::infinity(),
                           [](double m, double a, double b) {
                               return std::max({m, a, b});
                           });
}

// ===========================================================================
// Refinement, sums, composition
// ===========================================================================

std::vector<Cell> refine(const std::vector<Plrv>& xs) {
    require(!xs.empty(), "refine: empty vector");
    std::vector<double> cuts{0.0, 1.0};
    for (const auto& x : xs)
        for (const auto& p : x.pieces()) {
            cuts.push_back(p.t0);
            cuts.push_back(p.t1);
        }
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> grid;
    for (double c : cuts)
        if (grid.empty() || c > grid.back() + kEps) grid.push_back(c);
    grid.front() = 0.0;
    grid.back() = 1.0;

    std::vector<Cell> cells;
    cells.reserve(grid.size());
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        Cell c;
        c.a = grid[i];
        c.b = grid[i + 1];
        const double mid = 0.5 * (c.a + c.b);
        for (const auto& x : xs) {
            const auto& ps = x.pieces();
            auto it = std::upper_bound(ps.begin(), ps.end(), mid,
                                       [](double w, const LinearPiece& p) { return w < p.t1; });
            c.vals.emplace_back(it->at(c.a), it->at(c.b));
        }
        cells.push_back(std::move(c));
    }
    return cells;
}

std::vector<Cell> restrict_cells(const std::vector<Cell>& cells, const Event& e) {
    std::vector<Cell> out;
    for (const auto& c : cells) {
        for (const auto& iv : e.intervals()) {
            const double lo = std::max(c.a, iv.a);
            const double hi = std::min(c.b, iv.b);
            if (hi - lo <= kEps) continue;
            Cell r;
            r.a = lo;
            r.b = hi;
            const double w = c.b - c.a;
            for (const auto& v : c.vals) {
                const double va = v.first + (v.second - v.first) * (lo - c.a) / w;
                const double vb = v.first + (v.second - v.first) * (hi - c.a) / w;
                r.vals.emplace_back(va, vb);
            }
            out.push_back(std::move(r));
        }
    }
    return out;
}

Plrv sum(const std::vector<Plrv>& xs) {
    require(!xs.empty(), "sum: empty vector");
    if (xs.size() == 1) return xs[0];
    const auto cells = refine(xs);
    std::vector<LinearPiece> pieces;
    pieces.reserve(cells.size());
    for (const auto& c : cells) {
        double s0 = 0.0, s1 = 0.0;
        for (const auto& v : c.vals) {
            s0 += v.first;
            s1 += v.second;
        }
        pieces.push_back({c.a, c.b, s0, s1});
    }
    return Plrv::from_pieces(std::move(pieces));
}

Plrv compose(const MonoFn& f, const Plrv& inner) {
    // Knot values of f where the composition must be split.
    std::vector<double> knots;
    for (std::size_t i = 1; i < f.pieces().size(); ++i) knots.push_back(f.pieces()[i].t0);

    auto piece_covering = [&](double v) -> const LinearPiece& {
        const auto& ps = f.pieces();
        auto it = std::upper_bound(ps.begin(), ps.end(), v,
                                   [](double w, const LinearPiece& p) { return w < p.t1; });
        if (it == ps.end()) --it;
        return *it;
    };

    std::vector<LinearPiece> out;
    for (const auto& p : inner.pieces()) {
        if (std::fabs(p.v1 - p.v0) <= kEps) {
            const double v = f(std::clamp(0.5 * (p.v0 + p.v1), f.lo(), f.hi()));
            out.push_back({p.t0, p.t1, v, v});
            continue;
        }
        const double vlo = std::min(p.v0, p.v1);
        const double vhi = std::max(p.v0, p.v1);
        std::vector<double> splits{p.t0, p.t1};
        for (double w : knots) {
            if (w > vlo + kEps && w < vhi - kEps)
                splits.push_back(p.t0 + (w - p.v0) / (p.v1 - p.v0) * p.width());
        }
        std::sort(splits.begin(), splits.end());
        for (std::size_t i = 0; i + 1 < splits.size(); ++i) {
            const double a = splits[i];
            const double b = splits[i + 1];
            if (b - a <= kEps && i + 1 < splits.size() - 1) continue;
            const double va = p.at(a);
            const double vb = p.at(b);
            const double vm = std::clamp(0.5 * (va + vb), f.lo(), f.hi());
            const auto& fp = piece_covering(vm);
            out.push_back({a, b, fp.at(std::clamp(va, f.lo(), f.hi())),
                           fp.at(std::clamp(vb, f.lo(), f.hi()))});
        }
    }
    return Plrv::from_pieces(std::move(out));
}

Plrv apply_increasing(const Plrv& x, const MonoFn& f) {
    const double lo = ess_inf(x);
    const double hi = ess_sup(x);
    require(lo >= f.lo() - kEps && hi <= f.hi() + kEps,
            "apply_increasing: map does not cover the variable's range");
    return compose(f, x);
}

// ===========================================================================
// Comonotonicity
// ===========================================================================

namespace {

struct SFragment {
    int level = 0;   // flat: level; sloped: lower level
    bool flat = false;
    // per-component values, oriented so .first sits at the lower sum level
    std::vector<std::pair<double, double>> vals;
};

}  // namespace

bool cells_comonotone(const std::vector<Cell>& cells, double tol) {
    if (cells.empty()) return true;
    const std::size_t d = cells.front().vals.size();
    if (d <= 1) return true;

    std::vector<double> levels;
    {
        std::vector<double> svals;
        for (const auto& c : cells) {
            double s0 = 0.0, s1 = 0.0;
            for (const auto& v : c.vals) {
                s0 += v.first;
                s1 += v.second;
            }
            svals.push_back(s0);
            svals.push_back(s1);
        }
        std::sort(svals.begin(), svals.end());
        for (double v : svals)
            if (levels.empty() || v > levels.back() + kEps) levels.push_back(v);
    }
    const std::size_t m = levels.size();

    std::vector<SFragment> frags;
    for (const auto& c : cells) {
        double s0 = 0.0, s1 = 0.0;
        for (const auto& v : c.vals) {
            s0 += v.first;
            s1 += v.second;
        }
        const int i0 = level_index(levels, s0);
        const int i1 = level_index(levels, s1);
        if (i0 == i1) {
            SFragment f;
            f.level = i0;
            f.flat = true;
            f.vals = c.vals;
            frags.push_back(std::move(f));
            continue;
        }
        const bool asc = i1 > i0;
        const int klo = std::min(i0, i1);
        const int khi = std::max(i0, i1);
        for (int k = klo; k < khi; ++k) {
            // Fractions of the cell where the sum passes levels k and k+1.
            const double fa = (levels[k] - s0) / (s1 - s0);
            const double fb = (levels[k + 1] - s0) / (s1 - s0);
            SFragment f;
            f.level = k;
            f.flat = false;
            f.vals.reserve(d);
            for (const auto& v : c.vals) {
                const double va = v.first + (v.second - v.first) * fa;
                const double vb = v.first + (v.second - v.first) * fb;
                f.vals.emplace_back(va, vb);  // oriented: lower level first
            }
            (void)asc;
            frags.push_back(std::move(f));
        }
    }

    // Per level: the common component values of flat mass; per stretch: the
    // affine component profile. Everything must agree across fragments.
    constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::vector<double>> flat_val(m, std::vector<double>(d, kUnset));
    std::vector<char> has_flat(m, 0);
    std::vector<std::vector<double>> st_lo(m, std::vector<double>(d, kUnset));
    std::vector<std::vector<double>> st_hi(m, std::vector<double>(d, kUnset));
    std::vector<char> has_stretch(m, 0);

    auto merge_val = [&](double& slot, double v) {
        if (std::isnan(slot)) {
            slot = v;
            return true;
        }
        return approx_eq(slot, v, tol);
    };

    for (const auto& f : frags) {
        if (f.flat) {
            has_flat[f.level] = 1;
            for (std::size_t i = 0; i < d; ++i) {
                // components must be constant on sum-ties
                if (!approx_eq(f.vals[i].first, f.vals[i].second, tol)) return false;
                if (!merge_val(flat_val[f.level][i], 0.5 * (f.vals[i].first + f.vals[i].second)))
                    return false;
            }
        } else {
            has_stretch[f.level] = 1;
            for (std::size_t i = 0; i < d; ++i) {
                // increasing in the sum
                if (f.vals[i].second < f.vals[i].first - tol) return false;
                if (!merge_val(st_lo[f.level][i], f.vals[i].first)) return false;
                if (!merge_val(st_hi[f.level][i], f.vals[i].second)) return false;
            }
        }
    }

    // Cross-structure monotonicity along ascending sum levels.
    std::vector<double> last(d, -std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < m; ++k) {
        if (has_flat[k]) {
            for (std::size_t i = 0; i < d; ++i) {
                if (flat_val[k][i] < last[i] - tol) return false;
                last[i] = std::max(last[i], flat_val[k][i]);
            }
        }
        if (k + 1 < m && has_stretch[k]) {
            for (std::size_t i = 0; i < d; ++i) {
                if (st_lo[k][i] < last[i] - tol) return false;
                last[i] = std::max(last[i], st_hi[k][i]);
            }
        }
    }
    return true;
}

bool is_comonotonic(const std::vector<Plrv>& xs) {
    if (xs.size() <= 1) return true;
    return cells_comonotone(refine(xs));
}

}  // namespace riskm
