#include "riskm/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "riskm/closedset.hpp"
#include "riskm/dependence.hpp"
#include "riskm/distortion.hpp"
#include "riskm/indexsets.hpp"
#include "riskm/oracle.hpp"
#include "riskm/randvar.hpp"
#include "riskm/spectral.hpp"

namespace riskm {

namespace {

// Pinned tolerances: exact-arithmetic bound and the numeric-oracle band.
constexpr double kExact = 1e-9;
constexpr double kOracleTol = 1e-4;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }
};

CriterionResult finish(const Timer& t, std::string name, bool pass,
                       std::string detail) {
    return {std::move(name), pass, std::move(detail), t.ms()};
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2e", v);
    return buf;
}

// --- deterministic samplers (local to the self-test) ------------------------

double unif(std::mt19937_64& rng, double a, double b) {
    return a + (b - a) * std::generate_canonical<double, 53>(rng);
}

int unif_int(std::mt19937_64& rng, int a, int b) {
    return a + static_cast<int>(rng() % static_cast<std::uint64_t>(b - a + 1));
}

std::vector<double> sample_grid(std::mt19937_64& rng, int max_interior,
                                double min_sep) {
    std::vector<double> raw{0.0, 1.0};
    const int n = unif_int(rng, 0, max_interior);
    for (int i = 0; i < n; ++i) raw.push_back(unif(rng, 0.02, 0.98));
    std::sort(raw.begin(), raw.end());
    std::vector<double> cuts;
    for (double c : raw)
        if (cuts.empty() || c - cuts.back() >= min_sep) cuts.push_back(c);
    cuts.back() = 1.0;
    return cuts;
}

Plrv sample_plrv(std::mt19937_64& rng) {
    const auto cuts = sample_grid(rng, 5, 0.01);
    std::vector<LinearPiece> ps;
    double carry = unif(rng, -2.0, 3.0);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const int kind = unif_int(rng, 0, 3);
        double v0 = carry;
        double v1 = carry;
        if (kind == 0) {
            v0 = v1 = unif_int(rng, 0, 1) ? carry : unif(rng, -2.0, 3.0);
        } else {
            v0 = (kind == 3) ? unif(rng, -2.0, 3.0) : carry;
            v1 = unif(rng, -2.0, 3.0);
        }
        ps.push_back({cuts[i], cuts[i + 1], v0, v1});
        carry = v1;
    }
    return Plrv::from_pieces(std::move(ps));
}

MonoFn sample_monofn(std::mt19937_64& rng) {
    const auto cuts = sample_grid(rng, 4, 0.02);
    std::vector<LinearPiece> ps;
    double v = unif(rng, -1.0, 0.5);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const int kind = unif_int(rng, 0, 2);
        const double v0 = (kind == 2) ? v + unif(rng, 0.0, 0.5) : v;
        const double v1 = (kind == 0) ? v0 : v0 + unif(rng, 0.0, 1.0);
        ps.push_back({cuts[i], cuts[i + 1], v0, v1});
        v = v1;
    }
    return MonoFn::from_pieces(std::move(ps));
}

ClosedSet sample_closedset(std::mt19937_64& rng, int max_intervals) {
    const int m = unif_int(rng, 1, max_intervals);
    std::vector<double> pts;
    for (int i = 0; i < 2 * m; ++i) pts.push_back(unif(rng, 0.0, 1.0));
    std::sort(pts.begin(), pts.end());
    std::vector<double> sep;
    for (double p : pts)
        if (sep.empty() || p - sep.back() >= 5e-3) sep.push_back(p);
    if (sep.size() % 2 == 1) sep.push_back(std::min(1.0, sep.back() + 5e-3));
    std::vector<Interval> ivs;
    for (std::size_t i = 0; i + 1 < sep.size(); i += 2) {
        if (unif_int(rng, 0, 3) == 0)
            ivs.push_back({sep[i], sep[i]});
        else
            ivs.push_back({sep[i], sep[i + 1]});
    }
    return ClosedSet::from_intervals(std::move(ivs));
}

Spectrum sample_step_spectrum(std::mt19937_64& rng) {
    const auto cuts = sample_grid(rng, 4, 0.03);
    std::vector<double> levels;
    double v = (unif_int(rng, 0, 2) == 0) ? unif(rng, 0.1, 0.6) : 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        levels.push_back(v);
        v += unif(rng, 0.1, 2.0);
    }
    if (levels.back() < 0.1) levels.back() += unif(rng, 0.5, 1.5);
    double total = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i)
        total += levels[i] * (cuts[i + 1] - cuts[i]);
    std::vector<LinearPiece> ps;
    for (std::size_t i = 0; i < levels.size(); ++i)
        ps.push_back({cuts[i], cuts[i + 1], levels[i] / total, levels[i] / total});
    return Spectrum::from_monofn(MonoFn::from_pieces(std::move(ps)));
}

Spectrum sample_spectrum(std::mt19937_64& rng) {
    const auto cuts = sample_grid(rng, 4, 0.03);
    std::vector<LinearPiece> ps;
    double v = (unif_int(rng, 0, 1) == 0) ? unif(rng, 0.0, 0.4) : 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const int kind = unif_int(rng, 0, 2);
        const double v0 = (kind == 2) ? v + unif(rng, 0.0, 0.7) : v;
        const double v1 = (kind == 0) ? v0 : v0 + unif(rng, 0.0, 1.5);
        ps.push_back({cuts[i], cuts[i + 1], v0, v1});
        v = v1;
    }
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

DistortionFn sample_distortion(std::mt19937_64& rng) {
    const auto cuts = sample_grid(rng, 4, 0.03);
    std::vector<DistortionKnot> knots;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        const double value = (i == 0) ? 0.0 : unif(rng, -1.5, 1.5);
        double left = value;
        double right = value;
        if (i > 0 && unif_int(rng, 0, 2) == 0) left = value - unif(rng, -0.8, 0.8);
        if (i + 1 < cuts.size() && unif_int(rng, 0, 2) == 0)
            right = value + unif(rng, -0.8, 0.8);
        knots.push_back({cuts[i], left, value, right});
    }
    std::vector<double> curv(cuts.size() - 1, 0.0);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (unif_int(rng, 0, 1) == 0) {
            const double w = cuts[i + 1] - cuts[i];
            curv[i] = unif(rng, -2.0, 2.0) / (w * w);
        }
    return DistortionFn::from_knots(std::move(knots), std::move(curv));
}

GapCopulaSpec rotate_spec(const ClosedSet& k, std::size_t salt) {
    static const CouplingKind kinds[] = {
        CouplingKind::comonotone, CouplingKind::countermonotone,
        CouplingKind::independent, CouplingKind::swap_blocks};
    GapCopulaSpec spec;
    std::size_t i = salt;
    for (const auto& g : k.gaps()) spec.gaps.push_back({g, kinds[i++ % 4], 0.5});
    return spec;
}

// --- published worked-example fixtures ---------------------------------------

Plrv layered_loss() {
    return Plrv::from_pieces({{0.0, 0.85, 0.0, 0.0},
                              {0.85, 0.90, 0.5, 1.5},
                              {0.90, 0.95, 1.5, 2.5},
                              {0.95, 1.0, 2.5, 3.5}});
}

Plrv layered_steps(double c, double b, double a) {
    return Plrv::from_pieces({{0.0, 0.85, 0.0, 0.0},
                              {0.85, 0.90, c, c},
                              {0.90, 0.95, b, b},
                              {0.95, 1.0, a, a}});
}

Plrv ramp_loss() {
    return Plrv::from_pieces({{0.0, 2.0 / 3.0, 0.0, 0.0},
                              {2.0 / 3.0, 5.0 / 6.0, 1.5, 3.0},
                              {5.0 / 6.0, 1.0, 3.0, 3.0}});
}

Plrv mirror_loss() {
    return Plrv::from_pieces({{0.0, 2.0 / 3.0, 0.0, 0.0},
                              {2.0 / 3.0, 5.0 / 6.0, 1.5, 0.0},
                              {5.0 / 6.0, 1.0, 3.0, 3.0}});
}

DistortionFn ramp_weight() {
    return DistortionFn::from_knots({{0.0, 0.0, 0.0, 0.0},
                                     {1.0 / 6.0, 0.5, 0.5, 0.5},
                                     {0.5, 1.0, 1.0, 1.0},
                                     {1.0, 1.0, 1.0, 1.0}},
                                    {0.0, 4.5, 0.0});
}

Spectrum half_half() {
    return Spectrum::from_monofn(MonoFn::from_pieces(
        {{0.0, 0.9, 0.0, 0.0}, {0.9, 0.95, 5.0, 5.0}, {0.95, 1.0, 15.0, 15.0}}));
}

Spectrum ramp_spectrum() {
    return Spectrum::from_monofn(MonoFn::from_pieces({{0.0, 0.5, 0.0, 0.0},
                                                      {0.5, 5.0 / 6.0, 0.0, 3.0},
                                                      {5.0 / 6.0, 1.0, 3.0, 3.0}}));
}

// --- the criteria -------------------------------------------------------------

CriterionResult crit_worked_example() {
    Timer t;
    const DistortionFn h = ramp_weight();
    const Spectrum g = ramp_spectrum();
    const Plrv x = ramp_loss();
    const Plrv s = ramp_loss() + mirror_loss();
    double worst = std::fabs(choquet(h, x) - 2.375);
    worst = std::max(worst, std::fabs(choquet(h, s) - 4.125));
    worst = std::max(worst, std::fabs(rho(g, x) - 2.375));
    worst = std::max(worst, std::fabs(rho(g, s) - 4.125));
    return finish(t, "worked-example integrals", worst <= kExact,
                  "max err " + sci(worst));
}

CriterionResult crit_layered_table() {
    Timer t;
    const Plrv x = layered_loss();
    const Plrv s1 = layered_steps(1, 2, 3) + x;
    const Plrv s2 = layered_steps(1, 3, 2) + x;
    const Plrv s3 = layered_steps(2, 1, 3) + x;
    const Spectrum hh = half_half();
    double worst = 0.0;
    const auto note = [&](double got, double want) {
        worst = std::max(worst, std::fabs(got - want));
    };
    note(es(s1, 0.90), 5.0);
    note(es(s1, 0.95), 6.0);
    note(rho(hh, s1), 5.5);
    note(es(s2, 0.90), 5.0);
    note(es(s3, 0.95), 6.0);
    note(2.0 * rho(hh, x), 5.5);
    // the two table cells whose printed values round the exact results
    const double c95 = es(s2, 0.95);
    const double c90 = es(s3, 0.90);
    note(c95, 5.25);
    note(c90, 4.625);
    bool pass = worst <= kExact;
    const double o95 =
        std::fabs(c95 - choquet_numeric(DistortionFn::es(0.95), s2, 1000000));
    const double o90 =
        std::fabs(c90 - choquet_numeric(DistortionFn::es(0.90), s3, 1000000));
    pass = pass && o95 <= kOracleTol && o90 <= kOracleTol;
    // assert the exact cells genuinely differ from the rounded 5 / 4.5
    pass = pass && std::fabs(c95 - 5.0) > 1e-3 && std::fabs(c90 - 4.5) > 1e-3;
    const bool in_time = t.ms() < 1000.0;
    return finish(t, "layered tail table", pass && in_time,
                  "max exact err " + sci(worst) + ", oracle gap " +
                      sci(std::max(o95, o90)));
}

CriterionResult crit_additivity_table() {
    Timer t;
    bool pass = true;
    {
        const DistortionFn hv = DistortionFn::var(0.9);
        pass = pass && !is_k_additive(hv, ClosedSet::point(0.9));
        pass = pass && is_k_additive(hv, ClosedSet::from_intervals({{0.85, 0.9}}));
        const AdditivityCore ac = additivity_core(hv);
        pass = pass && ac.core.equal_mod01(ClosedSet::point(0.9)) &&
               ac.flags.size() == 1 && ac.flags[0].left &&
               std::fabs(ac.flags[0].p - 0.9) <= kExact;
    }
    {
        const DistortionFn hm = DistortionFn::mean_median_dev();
        const AdditivityCore ac = additivity_core(hm);
        pass = pass && ac.core.equal_mod01(ClosedSet::point(0.5)) &&
               ac.flags.empty();
        pass = pass && is_k_additive(hm, ClosedSet::point(0.5));
    }
    {
        const DistortionFn hg = DistortionFn::gini_shortfall(0.9, 0.25);
        const ClosedSet tail = ClosedSet::from_intervals({{0.9, 1.0}});
        pass = pass && additivity_core(hg).core.equal_mod01(tail);
        pass = pass && is_k_additive(hg, tail);
        pass =
            pass && !is_k_additive(hg, ClosedSet::from_intervals({{0.901, 1.0}}));
    }
    {
        const DistortionFn hp = DistortionFn::maxvar(2.0);
        pass = pass && is_k_additive(hp, ClosedSet::full());
        std::mt19937_64 rng(90103);
        int proper = 0;
        while (proper < 100) {
            const ClosedSet k = sample_closedset(rng, 4);
            if (k.equal_mod01(ClosedSet::full())) continue;
            ++proper;
            pass = pass && !is_k_additive(hp, k);
        }
    }
    const bool in_time = t.ms() < 1000.0;
    return finish(t, "additivity index table", pass && in_time,
                  "4 weight families");
}

CriterionResult crit_round_trip() {
    Timer t;
    std::mt19937_64 rng(90104);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
        const ClosedSet k = sample_closedset(rng, 8);
        if (!psi(v_map(k)).equal_mod01(k)) ++bad;
    }
    return finish(t, "index round trip", bad == 0,
                  std::to_string(1000 - bad) + "/1000 sets");
}

CriterionResult crit_concentration_equivalence() {
    Timer t;
    std::mt19937_64 rng(90105);
    int bad = 0;
    for (int i = 0; i < 500; ++i) {
        const ClosedSet k = sample_closedset(rng, 4);
        std::vector<MonoFn> marginals;
        if (unif_int(rng, 0, 1) == 0) {
            const int d = unif_int(rng, 2, 3);
            for (int j = 0; j < d; ++j) marginals.push_back(sample_monofn(rng));
        }
        const auto xs =
            generate(k, rotate_spec(k, static_cast<std::size_t>(i)), marginals,
                     777000 + static_cast<std::uint64_t>(i));
        const bool by_levels = is_k_concentrated(xs, k).ok;
        const bool by_reference = is_g_comonotonic(xs, v_map(k));
        const bool by_grid = concentration_grid(xs, k, 64);
        if (!(by_levels && by_reference && by_grid)) ++bad;
    }
    return finish(t, "concentration equivalence", bad == 0,
                  std::to_string(500 - bad) + "/500 vectors agree");
}

CriterionResult crit_additivity_iff() {
    Timer t;
    std::mt19937_64 rng(90106);
    int bad = 0;
    int additive_n = 0;
    int split_n = 0;
    for (int i = 0; i < 500; ++i) {
        const Spectrum g =
            (i % 2 == 0) ? sample_step_spectrum(rng) : sample_spectrum(rng);
        std::vector<Plrv> xs;
        if (i % 3 == 0) {
            const Plrv u = sample_plrv(rng);
            xs = {u, compose(sample_monofn(rng), rank_transform(u))};
        } else if (i % 3 == 1) {
            xs = {sample_plrv(rng), sample_plrv(rng)};
        } else {
            const ClosedSet k = sample_closedset(rng, 3);
            xs = generate(k, rotate_spec(k, static_cast<std::size_t>(i)), {},
                          888000 + static_cast<std::uint64_t>(i));
        }
        double parts = 0.0;
        for (const auto& xi : xs) parts += rho(g, xi);
        const double gap = parts - rho(g, sum(xs));
        const bool additive = is_additive_on(g, xs);
        if (additive)
            ++additive_n;
        else
            ++split_n;
        if (additive != (std::fabs(gap) <= kExact)) ++bad;
        if (!additive && !(gap > kExact)) ++bad;
        if (gap < -kExact) ++bad;
    }
    const bool in_time = t.ms() < 30000.0;
    return finish(t, "spectral additivity iff",
                  bad == 0 && additive_n > 0 && split_n > 0 && in_time,
                  std::to_string(additive_n) + " additive / " +
                      std::to_string(split_n) + " split, 0 tolerated");
}

CriterionResult crit_mixture_reconstruction() {
    Timer t;
    std::mt19937_64 rng(90107);
    double worst = 0.0;
    bool pass = true;
    for (int i = 0; i < 1000; ++i) {
        const Spectrum g = sample_step_spectrum(rng);
        const auto m = es_mixture(g);
        if (!m.has_value()) {
            pass = false;
            continue;
        }
        const Plrv x = sample_plrv(rng);
        worst = std::max(worst, std::fabs(m->evaluate(x) - rho(g, x)));
    }
    pass = pass && worst <= kExact;
    const auto hm = es_mixture(half_half());
    pass = pass && hm.has_value() && std::fabs(hm->lambda0) <= 1e-12 &&
           hm->terms.size() == 2 && std::fabs(hm->terms[0].alpha - 0.9) <= 1e-12 &&
           std::fabs(hm->terms[0].lambda - 0.5) <= 1e-12 &&
           std::fabs(hm->terms[1].alpha - 0.95) <= 1e-12 &&
           std::fabs(hm->terms[1].lambda - 0.5) <= 1e-12;
    return finish(t, "mixture reconstruction", pass, "max err " + sci(worst));
}

CriterionResult crit_counterexample_completeness() {
    Timer t;
    std::mt19937_64 rng(90108);
    bool pass = true;
    int refuted = 0;
    int guard = 0;
    while (refuted < 200 && guard < 20000) {
        ++guard;
        const DistortionFn h = sample_distortion(rng);
        const ClosedSet k = sample_closedset(rng, 3);
        if (is_k_additive(h, k)) continue;
        ++refuted;
        try {
            const auto pr =
                counterexample(h, k, 991000 + static_cast<std::uint64_t>(refuted));
            if (!pr.has_value()) {
                pass = false;
                continue;
            }
            const double gap =
                std::fabs(choquet(h, pr->first) + choquet(h, pr->second) -
                          choquet(h, pr->first + pr->second));
            if (!(gap > kExact)) pass = false;
            if (!is_k_concentrated({pr->first, pr->second}, k).ok) pass = false;
        } catch (const std::exception&) {
            pass = false;
        }
    }
    pass = pass && refuted == 200;

    double worst_gap = 0.0;
    int affirmed = 0;
    guard = 0;
    while (affirmed < 200 && guard < 20000) {
        ++guard;
        const DistortionFn h = sample_distortion(rng);
        const AdditivityCore ac = additivity_core(h);
        std::vector<Interval> ivs = ac.core.intervals();
        for (const auto& f : ac.flags) {
            if (f.left)
                ivs.push_back({std::max(0.0, f.p - 0.02), f.p});
            else
                ivs.push_back({f.p, std::min(1.0, f.p + 0.02)});
        }
        if (unif_int(rng, 0, 1) == 0) {
            const double a = unif(rng, 0.0, 0.9);
            ivs.push_back({a, std::min(1.0, a + unif(rng, 0.01, 0.1))});
        }
        const ClosedSet k = ClosedSet::from_intervals(std::move(ivs));
        if (!is_k_additive(h, k)) continue;
        ++affirmed;
        if (counterexample(h, k, 992000 + static_cast<std::uint64_t>(affirmed))
                .has_value())
            pass = false;
        for (int v = 0; v < 50; ++v) {
            const auto xs = generate(
                k, rotate_spec(k, static_cast<std::size_t>(v + affirmed)), {},
                993000 + 50 * static_cast<std::uint64_t>(affirmed) +
                    static_cast<std::uint64_t>(v));
            const double gap = std::fabs(choquet(h, xs[0]) + choquet(h, xs[1]) -
                                         choquet(h, sum(xs)));
            worst_gap = std::max(worst_gap, gap);
        }
    }
    pass = pass && affirmed == 200 && worst_gap <= kExact;
    const bool in_time = t.ms() < 60000.0;
    return finish(t, "counterexample completeness", pass && in_time,
                  "200 refuted, 200 affirmed, max generated gap " +
                      sci(worst_gap));
}

CriterionResult crit_quantile_chain() {
    Timer t;
    std::mt19937_64 rng(90109);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
        const double p = unif(rng, 0.1, 0.9);
        const ClosedSet kp = ClosedSet::point(p);
        const auto xs = generate(kp, rotate_spec(kp, static_cast<std::size_t>(i)),
                                 {}, 994000 + static_cast<std::uint64_t>(i));
        const Plrv s = sum(xs);
        double lo = 0.0;
        double hi = 0.0;
        for (const auto& xi : xs) {
            lo += var(xi, p);
            hi += var_plus(xi, p);
        }
        if (!(var(s, p) <= lo + kEps)) ++bad;
        if (!(lo <= hi + kEps)) ++bad;
        if (!(hi <= var_plus(s, p) + kEps)) ++bad;
    }
    return finish(t, "quantile chain", bad == 0,
                  std::to_string(bad) + " violations in 1000 vectors");
}

}  // namespace

std::vector<CriterionResult> run_selftest() {
    return {crit_worked_example(),
            crit_layered_table(),
            crit_additivity_table(),
            crit_round_trip(),
            crit_concentration_equivalence(),
            crit_additivity_iff(),
            crit_mixture_reconstruction(),
            crit_counterexample_completeness(),
            crit_quantile_chain()};
}

}  // namespace riskm
