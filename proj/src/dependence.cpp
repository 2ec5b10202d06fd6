#include "riskm/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace riskm {

namespace {

// SplitMix64 finalizer; used to derive independent stream seeds from one
// user seed without correlated low bits.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Random permutation of {0,...,n-1} (Fisher-Yates, fixed draw order).
std::vector<int> shuffled_blocks(int n, std::uint64_t seed) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    for (int j = n - 1; j > 0; --j) {
        const int r = static_cast<int>(rng() % static_cast<std::uint64_t>(j + 1));
        std::swap(perm[static_cast<std::size_t>(j)], perm[static_cast<std::size_t>(r)]);
    }
    return perm;
}

bool inside_unit(double p) { return p > kEps && p < 1.0 - kEps; }

// Canonical nested tail with the conventions A_0 = [0,1] and A_1 = empty,
// so layers of boundary-touching intervals come out right.
Event tail_or_boundary(const Plrv& s, double p) {
    if (p <= kEps) return Event::full();
    if (p >= 1.0 - kEps) return Event::empty();
    return tail_event(s, p);
}

}  // namespace

bool TailCertificate::all() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](bool v) { return v; });
}

Event tail_event(const Plrv& x, double p) {
    require(inside_unit(p), "tail level must lie strictly inside (0,1)");
    const Plrv u = rank_transform(x);
    std::vector<Interval> parts;
    for (const auto& piece : u.pieces()) {
        if (piece.v0 == piece.v1) {
            if (piece.v0 > p) parts.push_back({piece.t0, piece.t1});
            continue;
        }
        // Sloped rank piece: keep the sub-interval where the rank exceeds p.
        const double cross = piece.t0 + (p - piece.v0) / piece.slope();
        if (piece.slope() > 0.0) {
            if (piece.v1 > p)
                parts.push_back({std::max(piece.t0, cross), piece.t1});
        } else {
            if (piece.v0 > p)
                parts.push_back({piece.t0, std::min(piece.t1, cross)});
        }
    }
    return Event::from_intervals(std::move(parts));
}

std::pair<bool, TailCertificate> is_p_concentrated(const std::vector<Plrv>& xs,
                                                   double p) {
    require(!xs.empty(), "need at least one component");
    TailCertificate cert;
    cert.p = p;
    cert.event = tail_event(sum(xs), p);
    const Event rest = cert.event.complement();
    bool ok = true;
    cert.verdicts.reserve(xs.size());
    for (const auto& x : xs) {
        const bool good = ess_inf_on(x, cert.event) >= ess_sup_on(x, rest) - kEps;
        cert.verdicts.push_back(good);
        ok = ok && good;
    }
    return {ok, cert};
}

ConcentrationReport is_k_concentrated(const std::vector<Plrv>& xs,
                                      const ClosedSet& k) {
    require(!xs.empty(), "need at least one component");
    ConcentrationReport report;
    report.ok = true;

    std::vector<double> levels;
    for (double p : k.endpoints())
        if (inside_unit(p)) levels.push_back(p);
    levels.erase(std::unique(levels.begin(), levels.end(),
                             [](double a, double b) { return approx_eq(a, b); }),
                 levels.end());

    for (double p : levels) {
        auto [ok, cert] = is_p_concentrated(xs, p);
        report.certificates.push_back(std::move(cert));
        if (!ok) {
            report.ok = false;
            report.failing_p = p;
            return report;
        }
    }

    // Between consecutive canonical tails the components must be comonotonic
    // conditionally on the layer; together with the endpoint checks this
    // covers every level inside the interval.
    const Plrv s = sum(xs);
    const auto cells = refine(xs);
    for (const auto& iv : k.intervals()) {
        if (iv.b - iv.a <= kEps) continue;
        const Event layer =
            tail_or_boundary(s, iv.a).setminus(tail_or_boundary(s, iv.b));
        if (layer.measure() <= kEps) continue;
        if (!cells_comonotone(restrict_cells(cells, layer))) {
            report.ok = false;
            report.failing_layer = iv;
            return report;
        }
    }
    return report;
}

Plrv witness_z(const std::vector<Plrv>& xs, const ClosedSet& k) {
    require(is_k_concentrated(xs, k).ok, "not K-concentrated");
    return compose(v_map(k), rank_transform(sum(xs)));
}

bool is_g_comonotonic(const std::vector<Plrv>& xs, const MonoFn& g) {
    return is_k_concentrated(xs, psi(g)).ok;
}

// --- ordinal-sum generator --------------------------------------------------

namespace {

constexpr int kShuffleBlocks = 8;

void append_identity(std::vector<LinearPiece>& pieces, double a, double b) {
    if (b - a > 0.0) pieces.push_back({a, b, a, b});
}

// Pieces realizing one coupling on the gap (a,b) for a non-leading component.
void append_coupling(std::vector<LinearPiece>& pieces, const GapCoupling& c,
                     double a, double b, std::uint64_t stream_seed) {
    const double width = b - a;
    switch (c.kind) {
        case CouplingKind::comonotone:
            append_identity(pieces, a, b);
            return;
        case CouplingKind::countermonotone:
            pieces.push_back({a, b, b, a});
            return;
        case CouplingKind::independent: {
            const auto perm = shuffled_blocks(kShuffleBlocks, stream_seed);
            const double w = width / kShuffleBlocks;
            for (int slot = 0; slot < kShuffleBlocks; ++slot) {
                const double lo = a + perm[static_cast<std::size_t>(slot)] * w;
                pieces.push_back({a + slot * w, a + (slot + 1) * w, lo, lo + w});
            }
            return;
        }
        case CouplingKind::swap_blocks: {
            const double theta = c.param;  // validated by generate()
            const double cut = a + theta * width;
            // The two blocks trade places; each keeps its internal order.
            pieces.push_back({a, a + (width - theta * width), cut, b});
            pieces.push_back({a + (width - theta * width), b, a, cut});
            return;
        }
    }
    require(false, "unknown coupling kind");
}

}  // namespace

std::vector<Plrv> generate(const ClosedSet& k, const GapCopulaSpec& spec,
                           const std::vector<MonoFn>& marginals,
                           std::uint64_t seed) {
    const auto gs = k.gaps();
    require(spec.gaps.size() == gs.size(),
            "coupling spec must list each gap of the index set exactly once");
    for (std::size_t j = 0; j < gs.size(); ++j) {
        require(approx_eq(spec.gaps[j].gap.a, gs[j].a) &&
                    approx_eq(spec.gaps[j].gap.b, gs[j].b),
                "coupling spec gap does not match the index set");
        if (spec.gaps[j].kind == CouplingKind::swap_blocks)
            require(spec.gaps[j].param > kEps && spec.gaps[j].param < 1.0 - kEps,
                    "swap-blocks pivot must lie strictly inside (0,1)");
    }
    for (const auto& m : marginals)
        require(m.unit_domain(), "marginal quantile must have domain [0,1]");

    const std::size_t d = marginals.empty() ? 2 : marginals.size();
    std::vector<Plrv> out;
    out.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<LinearPiece> pieces;
        double cursor = 0.0;
        for (std::size_t j = 0; j < gs.size(); ++j) {
            append_identity(pieces, cursor, gs[j].a);
            if (i == 0) {
                // The leading component stays the identity everywhere, so the
                // per-gap couplings read as copulas against it.
                append_identity(pieces, gs[j].a, gs[j].b);
            } else {
                append_coupling(pieces, spec.gaps[j], gs[j].a, gs[j].b,
                                mix64(seed ^ mix64(31 * j + i)));
            }
            cursor = gs[j].b;
        }
        append_identity(pieces, cursor, 1.0);
        const Plrv u = Plrv::from_pieces(std::move(pieces));
        out.push_back(marginals.empty() ? u : compose(marginals[i], u));
    }
    return out;
}

std::pair<Plrv, Plrv> order_refutation_pair(const MonoFn& f, const MonoFn& g,
                                            std::uint64_t seed) {
    require(!precedes(f, g), "f precedes g; no refutation exists");
    const ClosedSet kf = psi(f);
    const ClosedSet kg = psi(g);
    const auto gs = kg.gaps();

    // Gaps of psi(g) whose interior meets psi(f): reflecting such a gap
    // breaks the f-levels inside it while leaving g-comonotonicity intact.
    std::vector<std::size_t> targets;
    for (std::size_t j = 0; j < gs.size(); ++j) {
        for (const auto& iv : kf.intervals()) {
            const double lo = std::max(iv.a, gs[j].a);
            const double hi = std::min(iv.b, gs[j].b);
            const bool meets = (iv.b - iv.a <= kEps)
                                   ? (iv.a > gs[j].a + kEps && iv.a < gs[j].b - kEps)
                                   : (hi - lo > kEps);
            if (meets) {
                targets.push_back(j);
                break;
            }
        }
    }
    require(!targets.empty(), "psi(f) does not meet the gaps of psi(g)");

    for (std::size_t j : targets) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            GapCopulaSpec spec;
            for (std::size_t jj = 0; jj < gs.size(); ++jj) {
                GapCoupling c;
                c.gap = gs[jj];
                c.kind = (jj == j) ? (attempt == 0 ? CouplingKind::countermonotone
                                                   : CouplingKind::independent)
                                   : CouplingKind::comonotone;
                spec.gaps.push_back(c);
            }
            auto xs = generate(kg, spec, {f, f}, seed + static_cast<std::uint64_t>(attempt));
            if (is_g_comonotonic(xs, g) && !is_g_comonotonic(xs, f))
                return {std::move(xs[0]), std::move(xs[1])};
        }
    }
    throw std::runtime_error("unable to realize an order refutation pair");
}

// --- counterexamples to K-additivity ----------------------------------------

namespace {

// Common layered pair template for a failing gap (a,b): both variables are 0
// before the gap and 3 after it, with values in [1,2] inside, so the pair is
// concentrated for every index set avoiding the open gap.
Plrv layered_profile(double a, double b, std::vector<LinearPiece> inside) {
    std::vector<LinearPiece> pieces;
    if (a > kEps) pieces.push_back({0.0, a, 0.0, 0.0});
    for (auto& p : inside) pieces.push_back(p);
    if (b < 1.0 - kEps) pieces.push_back({b, 1.0, 3.0, 3.0});
    return Plrv::from_pieces(std::move(pieces));
}

Plrv ramp_up(double a, double b) { return layered_profile(a, b, {{a, b, 1.0, 2.0}}); }

// Rearrangement of the ramp's mass by a block permutation of the gap.
Plrv ramp_shuffled(double a, double b, const std::vector<int>& perm) {
    const double w = (b - a) / static_cast<double>(perm.size());
    std::vector<LinearPiece> inside;
    for (std::size_t slot = 0; slot < perm.size(); ++slot) {
        const double v = 1.0 + perm[slot] / static_cast<double>(perm.size());
        inside.push_back({a + slot * w, a + (slot + 1) * w, v,
                          v + 1.0 / static_cast<double>(perm.size())});
    }
    return layered_profile(a, b, std::move(inside));
}

}  // namespace

std::optional<std::pair<Plrv, Plrv>> counterexample(const DistortionFn& h,
                                                    const ClosedSet& k,
                                                    std::uint64_t seed) {
    if (is_k_additive(h, k)) return std::nullopt;

    constexpr double kGapFloor = 1e-9;
    const auto verified = [&](const Plrv& x, const Plrv& y) {
        const double gap = choquet(h, x) + choquet(h, y) - choquet(h, x + y);
        return std::fabs(gap) > kGapFloor;
    };

    const auto gs = k.gaps();
    for (std::size_t j = 0; j < gs.size(); ++j) {
        const double a = gs[j].a;
        const double b = gs[j].b;
        // The gap fails iff the weight is non-affine on the matching closure;
        // probe it through the public decision with the two-sided hull of the
        // gap as the index set.
        std::vector<Interval> hull;
        if (a > kEps) hull.push_back({0.0, a});
        if (b < 1.0 - kEps) hull.push_back({b, 1.0});
        if (is_k_additive(h, ClosedSet::from_intervals(hull))) continue;

        const double m = 0.5 * (a + b);
        const Plrv x = ramp_up(a, b);
        // Deterministic candidates: the reflection kills affine weights with
        // any interior break; the asymmetric variants survive the case of
        // equal jump masses at the two closure endpoints, which the pure
        // reflection cancels.
        const std::vector<Plrv> fixed = {
            layered_profile(a, b, {{a, b, 2.0, 1.0}}),
            layered_profile(a, b, {{a, m, 2.0, 2.0}, {m, b, 2.0, 1.0}}),
            layered_profile(a, b, {{a, m, 2.0, 1.0}, {m, b, 1.0, 1.0}}),
        };
        for (const auto& y : fixed)
            if (verified(x, y)) return std::make_pair(x, y);

        for (int attempt = 0; attempt < 64; ++attempt) {
            const auto perm = shuffled_blocks(
                kShuffleBlocks,
                mix64(seed ^ mix64(977 * j + static_cast<std::uint64_t>(attempt))));
            const Plrv y = ramp_shuffled(a, b, perm);
            if (verified(x, y)) return std::make_pair(x, y);
        }
    }
    throw std::runtime_error(
        "no verified counterexample found within the bounded search");
}

}  // namespace riskm
